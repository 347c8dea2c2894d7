import itertools

import pytest
from hypothesis import settings, strategies as st

from posetassoc.poset import Poset, is_connected

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@st.composite
def posets(draw, min_size=1, max_size=6):
    """Naturally labelled random posets: a relation i < j only when i < j."""
    n = draw(st.integers(min_size, max_size))
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    return Poset(n, chosen)


def connected_posets(min_size=2, max_size=6):
    return posets(min_size, max_size).filter(is_connected)


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("POSETASSOC_CACHE_DIR", str(tmp_path / "cache"))
