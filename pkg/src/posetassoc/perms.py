"""Permutations (one-line tuples over 1..n), descents, Eulerian polynomials,
stack-sorting and its preimages, and the (w, alpha) <-> (omega, U) bijection.
"""

from __future__ import annotations

import itertools
import re
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .polyalg import IntPoly

Perm = tuple


class PermutationError(ValueError):
    pass


def check_perm(w: Sequence[int]) -> tuple[int, ...]:
    w = tuple(w)
    if sorted(w) != list(range(1, len(w) + 1)):
        raise PermutationError(f"{w!r} is not a permutation of 1..{len(w)}")
    return w


def identity(n: int) -> tuple[int, ...]:
    return tuple(range(1, n + 1))


def all_perms(n: int) -> Iterator[tuple[int, ...]]:
    return itertools.permutations(range(1, n + 1))


def parse_perm(text: str, n: int | None = None) -> tuple[int, ...]:
    """One-line (``965347128`` or ``10,2,1,...``) or cycle notation
    (``(59)(6)(1347)(2)(8)``; ``n`` defaults to the largest entry)."""
    s = text.strip()
    if s.startswith("("):
        cycs = []
        for body in re.findall(r"\(([^()]*)\)", s):
            body = body.strip()
            if "," in body or " " in body:
                cycs.append([int(x) for x in re.split(r"[,\s]+", body) if x])
            else:
                cycs.append([int(ch) for ch in body])
        if re.sub(r"\([^()]*\)", "", s).strip():
            raise PermutationError(f"cannot parse cycle notation {text!r}")
        size = n if n is not None else max((max(c) for c in cycs if c), default=0)
        return from_cycles(cycs, size)
    if re.fullmatch(r"\d+", s):
        w = tuple(int(ch) for ch in s)
    else:
        w = tuple(int(x) for x in re.split(r"[,\s]+", s) if x)
    return check_perm(w)


def format_perm(w: Sequence[int]) -> str:
    if len(w) <= 9:
        return "".join(str(x) for x in w)
    return ",".join(str(x) for x in w)


def cycles(w: Sequence[int]) -> list[tuple[int, ...]]:
    """Cycles, each starting at its smallest element, sorted by that element."""
    seen = set()
    out = []
    for start in range(1, len(w) + 1):
        if start in seen:
            continue
        cyc = [start]
        seen.add(start)
        x = w[start - 1]
        while x != start:
            cyc.append(x)
            seen.add(x)
            x = w[x - 1]
        out.append(tuple(cyc))
    return out


def format_cycles(w: Sequence[int]) -> str:
    sep = "" if len(w) <= 9 else ","
    return "".join("(" + sep.join(str(x) for x in c) + ")" for c in cycles(w))


def from_cycles(cycs: Iterable[Sequence[int]], n: int) -> tuple[int, ...]:
    w = list(range(1, n + 1))
    seen = set()
    for c in cycs:
        for i, a in enumerate(c):
            if a in seen or not 1 <= a <= n:
                raise PermutationError(f"bad cycle {tuple(c)}")
            seen.add(a)
            w[a - 1] = c[(i + 1) % len(c)]
    return tuple(w)


def cycle_type(w: Sequence[int]) -> tuple[int, ...]:
    return tuple(sorted((len(c) for c in cycles(w)), reverse=True))


def cycle_count(w: Sequence[int]) -> int:
    return len(cycles(w))


def descents(w: Sequence[int]) -> int:
    return sum(1 for a, b in zip(w, w[1:]) if a > b)


def descent_gf(perms: Iterable[Sequence[int]]) -> IntPoly:
    hist: dict[int, int] = {}
    for w in perms:
        d = descents(w)
        hist[d] = hist.get(d, 0) + 1
    top = max(hist) if hist else -1
    return IntPoly(hist.get(i, 0) for i in range(top + 1))


@lru_cache(maxsize=None)
def eulerian(n: int) -> IntPoly:
    """E_n: descent generating function of S_n (E_0 = 1)."""
    if n < 0:
        raise ValueError("negative n")
    return descent_gf(all_perms(n))


@lru_cache(maxsize=None)
def eulerian_restricted(m: int, n: int) -> IntPoly:
    """E_{m,n}: descents over w in S_{m+n} with w_1 <= m and w_{m+n} >= m+1."""
    if m < 1 or n < 1:
        raise ValueError("eulerian_restricted needs m, n >= 1")
    return descent_gf(w for w in all_perms(m + n) if w[0] <= m and w[-1] >= m + 1)


def stack_sort(w: Sequence[int]) -> tuple[int, ...]:
    """West's deterministic stack-sorting map."""
    stack: list[int] = []
    out: list[int] = []
    for x in w:
        while stack and stack[-1] < x:
            out.append(stack.pop())
        stack.append(x)
    while stack:
        out.append(stack.pop())
    return tuple(out)


@lru_cache(maxsize=None)
def _preimage_table(n: int) -> dict[tuple[int, ...], tuple[tuple[int, ...], ...]]:
    table: dict[tuple[int, ...], list] = {}
    for w in all_perms(n):
        table.setdefault(stack_sort(w), []).append(w)
    return {k: tuple(v) for k, v in table.items()}


def stack_preimage(target: Sequence[int]) -> list[tuple[int, ...]]:
    """All w with s(w) = target, by exhaustive filter over S_n."""
    target = check_perm(target)
    return sorted(_preimage_table(len(target)).get(target, ()))


def fixed_tail_perms(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """S_{n,k}: permutations of 1..n+k fixing every i > k."""
    tail = tuple(range(k + 1, n + k + 1))
    for head in all_perms(k):
        yield head + tail


def preimages_of_set(targets: Iterable[Sequence[int]]) -> list[tuple[int, ...]]:
    out = []
    for u in targets:
        out.extend(stack_preimage(u))
    return out


@lru_cache(maxsize=None)
def narayana_nk(n: int, k: int) -> IntPoly:
    """N_{n,k}: descent generating function of s^{-1}(S_{n,k})."""
    if n < 0 or k < 0 or n + k < 1:
        raise ValueError("narayana_nk needs n, k >= 0 with n + k >= 1")
    return descent_gf(preimages_of_set(fixed_tail_perms(n, k)))


def two_leg_broom_set(n: int, k: int) -> list[tuple[int, ...]]:
    """{w in s^{-1}(S_{n+1,k}) : w_1 <= n+k-1, w_{n+k+1} >= n+k}."""
    if n < 1 or k < 0:
        raise ValueError("needs n >= 1, k >= 0")
    return [
        w
        for w in preimages_of_set(fixed_tail_perms(n + 1, k))
        if w[0] <= n + k - 1 and w[n + k] >= n + k
    ]


# --- compositions and ordered set partitions ------------------------------

def compositions(n: int, k: int | None = None) -> Iterator[tuple[int, ...]]:
    """Compositions of n (into exactly k parts if given)."""
    if n == 0:
        if k in (None, 0):
            yield ()
        return
    for cuts in itertools.product((False, True), repeat=n - 1):
        parts, run = [], 1
        for c in cuts:
            if c:
                parts.append(run)
                run = 1
            else:
                run += 1
        parts.append(run)
        if k is None or len(parts) == k:
            yield tuple(parts)


def ordered_set_partitions(items: Sequence[int], k: int | None = None) -> Iterator[tuple[frozenset[int], ...]]:
    """Ordered set partitions of ``items`` (into exactly k blocks if given)."""
    items = list(items)
    n = len(items)
    for labels in itertools.product(range(n), repeat=n):
        used = sorted(set(labels))
        if used != list(range(len(used))):
            continue
        if k is not None and len(used) != k:
            continue
        yield tuple(frozenset(x for x, l in zip(items, labels) if l == b) for b in used)


def comp_to_cycles(w: Sequence[int], alpha: Sequence[int]):
    """(w, alpha) -> (omega, U).

    Cut w into segments of lengths alpha, read each segment as a permutation
    of its own value set, and merge the resulting cycles into omega. U_i lists
    the indices (cycles of omega ordered by smallest element, from 1) of the
    cycles that came from segment i.
    """
    w = check_perm(w)
    if any(a < 1 for a in alpha) or sum(alpha) != len(w):
        raise PermutationError(f"{tuple(alpha)} is not a composition of {len(w)}")
    omega = [0] * len(w)
    origin: dict[int, int] = {}
    pos = 0
    for i, a in enumerate(alpha):
        seg = w[pos:pos + a]
        pos += a
        for v, image in zip(sorted(seg), seg):
            omega[v - 1] = image
            origin[v] = i
    omega = tuple(omega)
    U = [set() for _ in alpha]
    for j, c in enumerate(cycles(omega), 1):
        U[origin[c[0]]].add(j)
    return omega, tuple(frozenset(b) for b in U)


def cycles_to_comp(omega: Sequence[int], U: Sequence[Iterable[int]]):
    """Inverse of ``comp_to_cycles``."""
    omega = check_perm(omega)
    cyc = cycles(omega)
    blocks = [frozenset(b) for b in U]
    flat = sorted(j for b in blocks for j in b)
    if flat != list(range(1, len(cyc) + 1)) or any(not b for b in blocks):
        raise PermutationError(f"U does not partition 1..{len(cyc)} into nonempty blocks")
    w: list[int] = []
    alpha = []
    for b in blocks:
        support = sorted(x for j in b for x in cyc[j - 1])
        w.extend(omega[v - 1] for v in support)
        alpha.append(len(support))
    return tuple(w), tuple(alpha)
