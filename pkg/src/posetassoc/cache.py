"""Content-addressed on-disk cache of tubing censuses.

Entries are JSON files named by the SHA-256 of ``<kind>:<canonical description>``.
Writes go to a temporary file in the same directory and are renamed into
place, so concurrent writers never expose a partial file.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Callable

log = logging.getLogger(__name__)

ENV_VAR = "POSETASSOC_CACHE_DIR"


def cache_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "posetassoc"


def cache_key(kind: str, description: str) -> str:
    return hashlib.sha256(f"{kind}:{description}".encode()).hexdigest()


class CensusCache:
    def __init__(self, directory: Path | str | None = None, enabled: bool = True):
        self.directory = Path(directory) if directory is not None else cache_dir()
        self.enabled = enabled
        self.hits = 0
        self.misses = 0

    def _path(self, key: str) -> Path:
        return self.directory / f"{key}.json"

    def load(self, key: str) -> dict[int, int] | None:
        try:
            with open(self._path(key)) as fh:
                raw = json.load(fh)
        except (OSError, ValueError):
            return None
        return {int(k): int(v) for k, v in raw["census"].items()}

    def store(self, key: str, description: str, census: dict[int, int]) -> None:
        self.directory.mkdir(parents=True, exist_ok=True)
        payload = {"description": description, "census": {str(k): v for k, v in census.items()}}
        fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(payload, fh, sort_keys=True)
            os.replace(tmp, self._path(key))
        except BaseException:
            try:
                os.unlink(tmp)
            except OSError:
                pass
            raise

    def census(self, kind: str, description: str, compute: Callable[[], dict[int, int]]) -> dict[int, int]:
        if not self.enabled:
            return compute()
        key = cache_key(kind, description)
        hit = self.load(key)
        if hit is not None:
            self.hits += 1
            return hit
        self.misses += 1
        result = compute()
        try:
            self.store(key, description, result)
        except OSError as e:
            log.warning("could not write cache entry %s: %s", key, e)
        return result

    def poset_census(self, p) -> dict[int, int]:
        from .tubings import enumerate_tubings

        return self.census("poset", p.to_text(), lambda: enumerate_tubings(p))

    def graph_census(self, g) -> dict[int, int]:
        from .graphs import enumerate_graph_tubings

        return self.census("graph", g.spec(), lambda: enumerate_graph_tubings(g))
