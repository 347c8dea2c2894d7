"""Tubings of (directed) graphs, read as undirected graphs, with the
directed-cycle / directed-path constructions attached to permutations and
the bijection between tubings of cycle unions and bottom-excluding tubings
of path unions paired with a permutation.
"""

from __future__ import annotations

import itertools
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .perms import all_perms, check_perm, compositions, cycle_count, cycles, parse_perm
from .poset import bits, from_mask, to_mask

FaceCount = dict


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class DiGraph:
    """Directed graph on 1..n. Loops are allowed and ignored by tubings."""

    n: int
    edges: tuple[tuple[int, int], ...]
    _adj: tuple[int, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        edges = tuple(sorted(set((int(u), int(v)) for u, v in self.edges)))
        for u, v in edges:
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise GraphError(f"edge {u}->{v} outside 1..{self.n}")
        adj = [0] * self.n
        for u, v in edges:
            if u != v:
                adj[u - 1] |= 1 << (v - 1)
                adj[v - 1] |= 1 << (u - 1)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "_adj", tuple(adj))

    @property
    def adj(self) -> tuple[int, ...]:
        """Undirected neighbour bitmask of each vertex (loops dropped)."""
        return self._adj

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def out_edges(self, u: int) -> list[int]:
        return [b for a, b in self.edges if a == u]

    def in_edges(self, v: int) -> list[int]:
        return [a for a, b in self.edges if b == v]

    def neighbourhood(self, m: int) -> int:
        out = 0
        for i in bits(m):
            out |= self._adj[i]
        return out

    def component_masks(self) -> list[int]:
        comps, seen = [], 0
        for v in range(self.n):
            if seen >> v & 1:
                continue
            comp = frontier = 1 << v
            while frontier:
                frontier = self.neighbourhood(frontier) & ~comp
                comp |= frontier
            seen |= comp
            comps.append(comp)
        return comps

    def is_connected_set(self, m: int) -> bool:
        if not m:
            return False
        comp = frontier = m & -m
        while frontier:
            frontier = self.neighbourhood(frontier) & m & ~comp
            comp |= frontier
        return comp == m

    def is_union_of_cycles(self) -> bool:
        outd, ind = Counter(), Counter()
        for u, v in self.edges:
            outd[u] += 1
            ind[v] += 1
        return all(outd[v] == 1 and ind[v] == 1 for v in range(1, self.n + 1))

    def paths(self) -> list[tuple[int, ...]]:
        """Path components source-to-sink, ordered by smallest vertex.

        Raises GraphError if the graph is not a union of directed paths."""
        succ: dict[int, int] = {}
        pred: dict[int, int] = {}
        for u, v in self.edges:
            if u == v or u in succ or v in pred:
                raise GraphError("not a union of directed paths")
            succ[u] = v
            pred[v] = u
        out, seen = [], set()
        for s in range(1, self.n + 1):
            if s in pred:
                continue
            path = [s]
            while path[-1] in succ:
                path.append(succ[path[-1]])
            seen.update(path)
            out.append(tuple(path))
        if len(seen) != self.n:
            raise GraphError("not a union of directed paths (contains a cycle)")
        out.sort(key=min)
        return out

    def is_union_of_paths(self) -> bool:
        try:
            self.paths()
        except GraphError:
            return False
        return True

    def spec(self) -> str:
        """Canonical edge-list description, used as a cache key."""
        return f"n={self.n};" + ",".join(f"{u}>{v}" for u, v in self.edges)


def cycle_graph(k: int) -> DiGraph:
    if k < 1:
        raise GraphError("cycle needs k >= 1")
    return DiGraph(k, tuple((i, i % k + 1) for i in range(1, k + 1)))


def path_graph(k: int) -> DiGraph:
    if k < 1:
        raise GraphError("path needs k >= 1")
    return DiGraph(k, tuple((i, i + 1) for i in range(1, k)))


def disjoint_union(*graphs: DiGraph) -> DiGraph:
    n, edges = 0, []
    for g in graphs:
        edges += [(u + n, v + n) for u, v in g.edges]
        n += g.n
    return DiGraph(n, tuple(edges))


def dc_of_permutation(w: Sequence[int]) -> DiGraph:
    """DC_w: an edge i -> w(i) for every i (fixed points give loops)."""
    w = check_perm(w)
    return DiGraph(len(w), tuple((i, w[i - 1]) for i in range(1, len(w) + 1)))


def dp_set_of_permutation(w: Sequence[int]) -> list[DiGraph]:
    """DP_w: every way of deleting one edge from each cycle of DC_w."""
    w = check_perm(w)
    per_cycle = []
    for c in cycles(w):
        per_cycle.append([(c[i], c[(i + 1) % len(c)]) for i in range(len(c))])
    all_edges = [e for opts in per_cycle for e in opts]
    out = []
    for dropped in itertools.product(*per_cycle):
        keep = tuple(e for e in all_edges if e not in dropped)
        out.append(DiGraph(len(w), keep))
    return out


def dc_family(n: int, l: int | None = None) -> list[DiGraph]:
    """Graphs on 1..n that are unions of (exactly l) directed cycles."""
    return [dc_of_permutation(w) for w in all_perms(n) if l is None or cycle_count(w) == l]


def dp_family(n: int, l: int | None = None) -> list[DiGraph]:
    """Graphs on 1..n that are unions of (exactly l) directed paths, built by
    cutting every arrangement of 1..n into consecutive runs."""
    seen = set()
    out = []
    for w in all_perms(n):
        for alpha in compositions(n, l):
            edges, pos = [], 0
            for a in alpha:
                seg = w[pos:pos + a]
                pos += a
                edges += list(zip(seg, seg[1:]))
            g = DiGraph(n, tuple(edges))
            if g not in seen:
                seen.add(g)
                out.append(g)
    return out


# --- tubes and tubings ------------------------------------------------------

def graph_tube_masks(g: DiGraph) -> list[int]:
    """Connected vertex sets strictly inside their component, sorted."""
    out = []
    for comp in g.component_masks():
        members = list(bits(comp))
        for r in range(1, len(members)):
            for sub in itertools.combinations(members, r):
                m = 0
                for i in sub:
                    m |= 1 << i
                if g.is_connected_set(m):
                    out.append(m)
    out.sort(key=lambda m: (bin(m).count("1"), tuple(sorted(from_mask(m)))))
    return out


def compatible(g: DiGraph, a: int, b: int) -> bool:
    inter = a & b
    if inter == a or inter == b:
        return True
    if inter:
        return False
    return not (g.neighbourhood(a) & b)


class GraphTubeSystem:
    def __init__(self, g: DiGraph):
        self.graph = g
        self.tubes = graph_tube_masks(g)
        n = len(self.tubes)
        compat = [0] * n
        for i, a in enumerate(self.tubes):
            for j, b in enumerate(self.tubes):
                if i != j and compatible(g, a, b):
                    compat[i] |= 1 << j
        self.compat = compat

    def count(self) -> FaceCount:
        counts = Counter()
        compat = self.compat

        def rec(cand: int, k: int):
            counts[k] += 1
            while cand:
                low = cand & -cand
                cand ^= low
                rec(cand & compat[low.bit_length() - 1], k + 1)

        rec((1 << len(self.tubes)) - 1, 0)
        return dict(sorted(counts.items()))

    def iter_tubings(self) -> Iterator[tuple[int, ...]]:
        tubes, compat = self.tubes, self.compat
        stack = [((), (1 << len(tubes)) - 1)]
        while stack:
            chosen, cand = stack.pop()
            yield chosen
            while cand:
                low = cand & -cand
                cand ^= low
                j = low.bit_length() - 1
                stack.append((chosen + (tubes[j],), cand & compat[j]))


def enumerate_graph_tubings(g: DiGraph) -> FaceCount:
    return GraphTubeSystem(g).count()


def iter_graph_tubings(g: DiGraph) -> Iterator[frozenset[frozenset[int]]]:
    for t in GraphTubeSystem(g).iter_tubings():
        yield frozenset(from_mask(m) for m in t)


def is_graph_tubing(g: DiGraph, tubes: Iterable[Iterable[int]]) -> bool:
    masks = [to_mask(t) for t in tubes]
    comps = g.component_masks()
    for m in masks:
        if not g.is_connected_set(m):
            return False
        if not any(m & c == m and m != c for c in comps):
            return False
    return all(compatible(g, a, b) for a, b in itertools.combinations(masks, 2))


def _bottom_tubes(g: DiGraph) -> list[frozenset[int]]:
    try:
        paths = g.paths()
    except GraphError as e:
        raise GraphError("bottom-excluding tubings need a union of directed paths") from e
    return [frozenset(p[1:]) for p in paths if len(p) >= 2]


def is_bottom_excluding(g: DiGraph, tubes: Iterable[Iterable[int]]) -> bool:
    have = {frozenset(t) for t in tubes}
    return all(t in have for t in _bottom_tubes(g))


def count_bottom_excluding(g: DiGraph) -> FaceCount:
    required = [to_mask(t) for t in _bottom_tubes(g)]
    counts = Counter()
    for t in GraphTubeSystem(g).iter_tubings():
        if all(r in t for r in required):
            counts[len(t)] += 1
    return dict(sorted(counts.items()))


# --- the cycle/path bijection ----------------------------------------------

def dc_tubing_to_dp_pair(g: DiGraph, tubes: Iterable[Iterable[int]]):
    """Cut the in-edge of every lonely vertex; record the rewiring as sigma.

    Returns (g', tubes, sigma) with sigma in one-line notation on 1..r, where
    r is the number of resulting paths ordered by smallest vertex.
    """
    if not g.is_union_of_cycles():
        raise GraphError("expected a union of directed cycles")
    tubes = frozenset(frozenset(t) for t in tubes)
    covered = set().union(*tubes) if tubes else set()
    lonely = {v for v in range(1, g.n + 1) if v not in covered}
    kept = tuple((u, v) for u, v in g.edges if v not in lonely)
    gp = DiGraph(g.n, kept)
    paths = gp.paths()
    source_index = {p[0]: i for i, p in enumerate(paths, 1)}
    sigma = []
    for p in paths:
        (nxt,) = g.out_edges(p[-1])
        sigma.append(source_index[nxt])
    if not is_bottom_excluding(gp, tubes):
        raise GraphError("image tubing is not bottom-excluding")
    return gp, tubes, tuple(sigma)


def dp_pair_to_dc_tubing(gp: DiGraph, tubes: Iterable[Iterable[int]], sigma: Sequence[int]):
    """Inverse: join the sink of the i-th path to the source of the sigma_i-th."""
    paths = gp.paths()
    if len(sigma) != len(paths):
        raise GraphError(f"sigma has size {len(sigma)} but there are {len(paths)} paths")
    sigma = check_perm(sigma)
    tubes = frozenset(frozenset(t) for t in tubes)
    if not is_bottom_excluding(gp, tubes):
        raise GraphError("tubing is not bottom-excluding")
    extra = [(p[-1], paths[sigma[i] - 1][0]) for i, p in enumerate(paths)]
    g = DiGraph(gp.n, gp.edges + tuple(extra))
    if not is_graph_tubing(g, tubes):
        raise GraphError("rewired tubing is not valid")
    return g, tubes


# --- spec strings -----------------------------------------------------------

def parse_graph_spec(spec: str) -> DiGraph:
    """``cycle:k``, ``path:k``, ``perm-cycles:<one-line>``, ``union:<a>+<b>...``."""
    s = spec.strip()
    if s.startswith("union:"):
        parts = [p for p in s[len("union:"):].split("+") if p.strip()]
        if len(parts) < 1:
            raise GraphError(f"empty union in {spec!r}")
        return disjoint_union(*(parse_graph_spec(p) for p in parts))
    m = re.fullmatch(r"(cycle|path):(\d+)", s)
    if m:
        k = int(m.group(2))
        return cycle_graph(k) if m.group(1) == "cycle" else path_graph(k)
    m = re.fullmatch(r"perm-cycles:(.+)", s)
    if m:
        return dc_of_permutation(parse_perm(m.group(1)))
    raise GraphError(f"cannot parse graph spec {spec!r}")
