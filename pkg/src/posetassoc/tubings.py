"""Tubes and tubings of connected posets, face counts of poset associahedra,
and the good/bad tube decomposition relative to an autonomous chain.

A census (``FaceCount``) is a plain ``dict`` mapping the number of tubes k to
the number of tubings with k tubes; a tubing with k tubes is a face of
dimension |P| - 2 - k.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import factorial
from typing import Iterable, Iterator

from .poset import (
    Poset,
    PosetError,
    autonomous_mask,
    bits,
    connected_mask,
    convex_mask,
    from_mask,
    is_chain,
    make_antichain,
    make_chain,
    sorted_chain,
    substitute_with_map,
    to_mask,
)
from .polyalg import IntPoly, f_to_h, gamma_polynomial, stirling_first

FaceCount = dict


class TubingError(ValueError):
    pass


def _tube_key(m: int) -> tuple[int, tuple[int, ...]]:
    return bin(m).count("1"), tuple(sorted(from_mask(m)))


def proper_tube_masks(p: Poset) -> list[int]:
    """Proper tubes as bitmasks, sorted by (size, members)."""
    if p.n < 2:
        raise PosetError("tubes need at least two elements")
    out = []
    # grow connected sets from each element; n is small, so plain subsets are cheap
    for m in range(1, p.full_mask):
        c = bin(m).count("1")
        if c < 2:
            continue
        if connected_mask(p, m) and convex_mask(p, m):
            out.append(m)
    out.sort(key=_tube_key)
    return out


def enumerate_proper_tubes(p: Poset) -> list[frozenset[int]]:
    return [from_mask(m) for m in proper_tube_masks(p)]


def precedes(p: Poset, a: int, b: int) -> bool:
    """a < b in the tube order: disjoint and some x in a lies below some y in b."""
    if a & b:
        return False
    for x in bits(a):
        if p.up[x] & b:
            return True
    return False


class TubeSystem:
    """Precomputed pairwise data for backtracking over the proper tubes of p."""

    def __init__(self, p: Poset):
        self.poset = p
        self.tubes = proper_tube_masks(p)
        self.index = {m: i for i, m in enumerate(self.tubes)}
        n = len(self.tubes)
        compat = [0] * n
        succ = [0] * n
        pred = [0] * n
        for i, a in enumerate(self.tubes):
            for j, b in enumerate(self.tubes):
                if i == j:
                    continue
                inter = a & b
                if inter == a or inter == b or not inter:
                    compat[i] |= 1 << j
                if not inter and precedes(p, a, b):
                    succ[i] |= 1 << j
                    pred[j] |= 1 << i
        self.compat = compat
        self.succ = succ
        self.pred = pred

    def closes_cycle(self, j: int, chosen: int) -> bool:
        """Would adding tube j to the (acyclic) chosen set create a cycle?"""
        succ = self.succ
        target = self.pred[j] & chosen
        if not target:
            return False
        reach = frontier = succ[j] & chosen
        while frontier:
            if reach & target:
                return True
            nxt = 0
            for i in bits(frontier):
                nxt |= succ[i]
            nxt &= chosen & ~reach
            reach |= nxt
            frontier = nxt
        return bool(reach & target)

    def count(self) -> FaceCount:
        counts = Counter()
        compat, closes = self.compat, self.closes_cycle

        def rec(chosen: int, cand: int, k: int):
            counts[k] += 1
            while cand:
                low = cand & -cand
                j = low.bit_length() - 1
                cand ^= low
                if closes(j, chosen):
                    continue
                rec(chosen | low, cand & compat[j], k + 1)

        rec(0, (1 << len(self.tubes)) - 1, 0)
        return dict(sorted(counts.items()))

    def iter_index_sets(self) -> Iterator[int]:
        """Yield each tubing as a bitmask over tube indices."""
        compat, closes = self.compat, self.closes_cycle
        stack = [(0, (1 << len(self.tubes)) - 1)]
        while stack:
            chosen, cand = stack.pop()
            yield chosen
            while cand:
                low = cand & -cand
                j = low.bit_length() - 1
                cand ^= low
                if not closes(j, chosen):
                    stack.append((chosen | low, cand & compat[j]))

    def iter_tubings(self) -> Iterator[tuple[int, ...]]:
        """Yield each tubing as a tuple of tube bitmasks."""
        tubes = self.tubes
        for sel in self.iter_index_sets():
            yield tuple(tubes[i] for i in bits(sel))


def _require_connected(p: Poset):
    if p.n < 2:
        raise PosetError("need a poset with at least two elements")
    if not connected_mask(p, p.full_mask):
        raise PosetError("poset is not connected")


def is_valid_tubing(p: Poset, tubes: Iterable[Iterable[int]]) -> bool:
    masks = [to_mask(t) for t in tubes]
    for m in masks:
        size = bin(m).count("1")
        if m & ~p.full_mask or not (1 < size < p.n) or not (
            connected_mask(p, m) and convex_mask(p, m)
        ):
            raise TubingError(f"{sorted(from_mask(m))} is not a proper tube")
    masks = list(dict.fromkeys(masks))
    for i, a in enumerate(masks):
        for b in masks[i + 1:]:
            inter = a & b
            if inter and inter != a and inter != b:
                return False
    return not has_precedence_cycle(p, masks)


def has_precedence_cycle(p: Poset, masks: list[int]) -> bool:
    """Cycle detection on the digraph a -> b whenever a precedes b."""
    n = len(masks)
    succ = [[j for j in range(n) if precedes(p, masks[i], masks[j])] for i in range(n)]
    state = [0] * n  # 0 new, 1 on stack, 2 done
    for root in range(n):
        if state[root]:
            continue
        stack = [(root, iter(succ[root]))]
        state[root] = 1
        while stack:
            v, it = stack[-1]
            for w in it:
                if state[w] == 1:
                    return True
                if state[w] == 0:
                    state[w] = 1
                    stack.append((w, iter(succ[w])))
                    break
            else:
                state[v] = 2
                stack.pop()
    return False


def enumerate_tubings(p: Poset) -> FaceCount:
    """Census of tubings of a connected poset by number of tubes."""
    _require_connected(p)
    return TubeSystem(p).count()


def iter_tubings(p: Poset) -> Iterator[frozenset[frozenset[int]]]:
    """Stream every tubing of p as a frozenset of tubes."""
    _require_connected(p)
    for t in TubeSystem(p).iter_tubings():
        yield frozenset(from_mask(m) for m in t)


def census_to_f(census: FaceCount, n: int) -> IntPoly:
    """f(t) = sum_k census[k] t^(n - 2 - k)."""
    d = n - 2
    cs = [0] * (d + 1)
    for k, c in census.items():
        if k > d:
            raise TubingError(f"tubing with {k} tubes exceeds dimension {d}")
        cs[d - k] += c
    return IntPoly(cs)


def f_polynomial(p: Poset, census: FaceCount | None = None) -> IntPoly:
    if census is None:
        census = enumerate_tubings(p)
    return census_to_f(census, p.n)


def h_polynomial(p: Poset, census: FaceCount | None = None) -> IntPoly:
    return f_to_h(f_polynomial(p, census))


def gamma_of_poset(p: Poset, census: FaceCount | None = None) -> IntPoly:
    return gamma_polynomial(h_polynomial(p, census), p.n - 2)


# --- tubes relative to an autonomous subposet -----------------------------

def _check_autonomous(p: Poset, S) -> int:
    s = to_mask(S)
    if not s or s & ~p.full_mask:
        raise PosetError(f"{sorted(S)} is not a nonempty subset of p")
    if not autonomous_mask(p, s):
        raise PosetError(f"{sorted(S)} is not autonomous")
    return s


def _classify_mask(p: Poset, s: int, t: int) -> str:
    if not t & s or t & s == t or t & s == s:
        return "good"
    inside, outside = t & s, t & ~s
    lower = any(p.up[x] & inside for x in bits(outside))
    upper = any(p.down[x] & inside for x in bits(outside))
    if lower and upper:
        return "bad_both"
    if lower:
        return "bad_lower"
    if upper:
        return "bad_upper"
    raise TubingError(f"bad tube {sorted(from_mask(t))} is neither lower nor upper")


def classify_tube(p: Poset, S, tube) -> str:
    """One of ``good``, ``bad_lower``, ``bad_upper``, ``bad_both``."""
    s = _check_autonomous(p, S)
    return _classify_mask(p, s, to_mask(tube))


@dataclass(frozen=True)
class BadTubeDecomposition:
    """(L, M, U): L and U are nested sequences of (set, starred) pairs outside S,
    M an ordered sequence of disjoint blocks covering S."""

    L: tuple[tuple[frozenset[int], bool], ...]
    M: tuple[frozenset[int], ...]
    U: tuple[tuple[frozenset[int], bool], ...]


def _side_sequence(s: int, tubes: list[int]):
    seq, blocks = [], []
    prev = 0
    for t in tubes:
        if t & prev != prev:
            raise TubingError("bad tubes of one side are not nested")
        new = (t & ~prev) & s
        seq.append((from_mask(t & ~s), bool(new)))
        if new:
            blocks.append(from_mask(new))
        prev = t
    return tuple(seq), blocks


def decompose_bad(p: Poset, S, T: Iterable[Iterable[int]]) -> BadTubeDecomposition:
    s = _check_autonomous(p, S)
    lower, upper = [], []
    covered = 0
    for tube in T:
        t = to_mask(tube)
        kind = _classify_mask(p, s, t)
        if kind == "good":
            continue
        if kind == "bad_both":
            raise TubingError(f"tube {sorted(tube)} is both lower and upper")
        (lower if kind == "bad_lower" else upper).append(t)
        covered |= t
    lower.sort(key=lambda m: bin(m).count("1"))
    upper.sort(key=lambda m: bin(m).count("1"))
    L, ml = _side_sequence(s, lower)
    U, mu = _side_sequence(s, upper)
    hat = s & ~covered
    M = ml + ([from_mask(hat)] if hat else []) + mu[::-1]
    return BadTubeDecomposition(L, tuple(M), U)


def _rebuild_side(s: int, seq, blocks) -> list[int]:
    out, cum, j = [], 0, 0
    for members, starred in seq:
        if starred:
            cum |= to_mask(blocks[j])
            j += 1
        if not cum:
            raise TubingError("first set of a side must be starred")
        m = to_mask(members)
        if m & s:
            raise TubingError("L/U sets must avoid S")
        out.append(m | cum)
    return out


def reconstruct_bad(p: Poset, S, d: BadTubeDecomposition) -> set[frozenset[int]]:
    """Inverse of ``decompose_bad``: the set of bad tubes."""
    s = _check_autonomous(p, S)
    sl = sum(star for _, star in d.L)
    su = sum(star for _, star in d.U)
    extra = len(d.M) - sl - su
    if extra not in (0, 1):
        raise TubingError(f"{len(d.M)} blocks do not match {sl} + {su} stars")
    union = 0
    for b in d.M:
        bm = to_mask(b)
        if not bm or bm & union or bm & ~s:
            raise TubingError("M must be disjoint nonempty blocks inside S")
        union |= bm
    if union != s:
        raise TubingError("M does not cover S")
    ml = list(d.M[:sl])
    mu = list(d.M[len(d.M) - su:])[::-1] if su else []
    tubes = _rebuild_side(s, d.L, ml) + _rebuild_side(s, d.U, mu)
    return {from_mask(t) for t in tubes}


def bad_tubes(p: Poset, S, T) -> set[frozenset[int]]:
    s = _check_autonomous(p, S)
    return {frozenset(t) for t in T if _classify_mask(p, s, to_mask(t)) != "good"}


# --- degradable / non-degradable -------------------------------------------

def _check_autonomous_chain(p: Poset, S) -> int:
    s = _check_autonomous(p, S)
    if s == p.full_mask:
        raise PosetError("S must be a proper subposet")
    if not is_chain(p, from_mask(s)):
        raise PosetError(f"{sorted(S)} is not a chain")
    return s


def count_tubings_split(p: Poset, S) -> tuple[FaceCount, FaceCount]:
    """(non-degradable census, degradable census) relative to the chain S."""
    _require_connected(p)
    s = _check_autonomous_chain(p, S)
    ts = TubeSystem(p)
    inside = 0
    for i, t in enumerate(ts.tubes):
        if t & s == t:
            inside |= 1 << i
    nondeg, deg = Counter(), Counter()
    for sel in ts.iter_index_sets():
        k = bin(sel).count("1")
        (deg if sel & inside else nondeg)[k] += 1
    return dict(sorted(nondeg.items())), dict(sorted(deg.items()))


def antichain_replacements(p: Poset, S) -> list[Poset]:
    """[P_1, ..., P_n]: S replaced by the antichains A_1..A_n."""
    n = len(set(S))
    return [substitute_with_map(p, S, make_antichain(i))[0] for i in range(1, n + 1)]


def nondegradable_identity(p: Poset, S) -> dict[int, tuple[int, int]]:
    """For each k: (n! t_k, sum_i s_{n,i} t_{i,k})."""
    n = len(set(S))
    nondeg, _ = count_tubings_split(p, S)
    per_i = [enumerate_tubings(q) for q in antichain_replacements(p, S)]
    ks = set(nondeg)
    for c in per_i:
        ks |= set(c)
    out = {}
    for k in sorted(ks):
        lhs = factorial(n) * nondeg.get(k, 0)
        rhs = sum(stirling_first(n, i) * per_i[i - 1].get(k, 0) for i in range(1, n + 1))
        out[k] = (lhs, rhs)
    return out


def chain_composition(order: list[int], tubes: Iterable[Iterable[int]]) -> tuple[int, ...]:
    """Composition given by the lonely elements and maximal tubes of a tubing
    of the chain ``order`` (listed bottom to top), read from the top down."""
    tubes = [frozenset(t) for t in tubes]
    maximal = [t for t in tubes if not any(t < u for u in tubes)]
    pos = {a: i for i, a in enumerate(order)}
    parts = []
    i = len(order) - 1
    while i >= 0:
        a = order[i]
        home = next((t for t in maximal if a in t), None)
        if home is None:
            parts.append(1)
            i -= 1
        else:
            lo = min(pos[b] for b in home)
            parts.append(i - lo + 1)
            i = lo - 1
    return tuple(parts)


def degrading_census(p: Poset, S) -> dict[frozenset[frozenset[int]], FaceCount]:
    """Group the tubings of p by their set of degrading tubes (tubes inside S)."""
    _require_connected(p)
    s = _check_autonomous_chain(p, S)
    groups: dict[frozenset, Counter] = {}
    for t in TubeSystem(p).iter_tubings():
        deg = frozenset(from_mask(m) for m in t if m & s == m)
        groups.setdefault(deg, Counter())[len(t)] += 1
    return {k: dict(sorted(v.items())) for k, v in groups.items()}


def contract_chain(p: Poset, S, parts: int) -> tuple[Poset, frozenset[int]]:
    """Replace the chain S by C_parts; returns the new poset and the image of S."""
    q, _, block = substitute_with_map(p, S, make_chain(parts))
    return q, frozenset(block)


def chain_tubings_with_whole(order: list[int]) -> list[frozenset[frozenset[int]]]:
    """All tubings of the chain ``order`` where the whole chain may be a tube."""
    n = len(order)
    intervals = [frozenset(order[i:j]) for i in range(n) for j in range(i + 2, n + 1)]
    out = []

    def ok(a, b):
        return a <= b or b <= a or not (a & b)

    def rec(start, chosen):
        out.append(frozenset(chosen))
        for idx in range(start, len(intervals)):
            iv = intervals[idx]
            if all(ok(iv, c) for c in chosen):
                chosen.append(iv)
                rec(idx + 1, chosen)
                chosen.pop()

    rec(0, [])
    return out


def degradable_contraction_check(p: Poset, S) -> list[tuple[frozenset, dict, dict]]:
    """For each degrading tubing T' of S, compare the census of tubings of p
    whose degrading tubes are exactly T' (shifted down by |T'|) with the
    non-degradable census of p with S contracted to C_l. Returns mismatches."""
    order = sorted_chain(p, S)
    groups = degrading_census(p, S)
    bad = []
    for tp in chain_tubings_with_whole(order):
        alpha = chain_composition(order, tp)
        got = {k - len(tp): c for k, c in groups.get(tp, {}).items()}
        q, image = contract_chain(p, S, len(alpha))
        if q.n >= 2:
            want, _ = count_tubings_split(q, image)
        else:
            want = {}
        want = {k: c for k, c in want.items() if c}
        if got != want:
            bad.append((tp, got, want))
    return bad
