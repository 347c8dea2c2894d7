"""Finite posets on the labels 1..n.

Internally the order is stored as bitmasks: bit ``j-1`` of ``up[i-1]`` is set
iff ``i <= j``. Element sets handed to and from the public functions are
frozensets of labels.
"""

from __future__ import annotations

import itertools
import re
from typing import Iterable, Iterator

ElementSet = frozenset


def to_mask(s: Iterable[int]) -> int:
    m = 0
    for i in s:
        m |= 1 << (i - 1)
    return m


def from_mask(m: int) -> frozenset[int]:
    out = []
    i = 1
    while m:
        if m & 1:
            out.append(i)
        m >>= 1
        i += 1
    return frozenset(out)


def bits(m: int) -> Iterator[int]:
    """Yield the 0-based indices of set bits."""
    while m:
        low = m & -m
        yield low.bit_length() - 1
        m ^= low


class PosetError(ValueError):
    pass


class Poset:
    """Immutable finite poset on 1..n, built from strict relations ``a < b``.

    The transitive closure is taken on construction; a cycle (which would
    break antisymmetry) raises PosetError.
    """

    __slots__ = ("n", "up", "down", "_covers", "_hasse")

    def __init__(self, n: int, relations: Iterable[tuple[int, int]] = ()):
        if n < 1:
            raise PosetError("empty poset")
        up = [1 << i for i in range(n)]
        for a, b in relations:
            if not (1 <= a <= n and 1 <= b <= n):
                raise PosetError(f"relation {a} < {b} outside 1..{n}")
            if a == b:
                raise PosetError(f"strict relation {a} < {a}")
            up[a - 1] |= 1 << (b - 1)
        # Warshall on bitsets
        for k in range(n):
            kb = 1 << k
            uk = up[k]
            for i in range(n):
                if up[i] & kb:
                    up[i] |= uk
        down = [0] * n
        for i in range(n):
            for j in bits(up[i]):
                down[j] |= 1 << i
        for i in range(n):
            if (up[i] & down[i]) != (1 << i):
                j = next(b for b in bits(up[i] & down[i]) if b != i)
                raise PosetError(f"relations force {i + 1} = {j + 1} (cycle)")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "up", tuple(up))
        object.__setattr__(self, "down", tuple(down))
        object.__setattr__(self, "_covers", None)
        object.__setattr__(self, "_hasse", None)

    def __setattr__(self, name, value):
        raise AttributeError("Poset is immutable")

    @classmethod
    def from_leq(cls, n: int, leq) -> Poset:
        """Build from a predicate ``leq(a, b)`` on labels."""
        rel = [(a, b) for a in range(1, n + 1) for b in range(1, n + 1) if a != b and leq(a, b)]
        return cls(n, rel)

    @property
    def elements(self) -> range:
        return range(1, self.n + 1)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def leq(self, a: int, b: int) -> bool:
        return bool(self.up[a - 1] >> (b - 1) & 1)

    def lt(self, a: int, b: int) -> bool:
        return a != b and self.leq(a, b)

    def comparable(self, a: int, b: int) -> bool:
        return self.leq(a, b) or self.leq(b, a)

    def relations(self) -> list[tuple[int, int]]:
        """All strict pairs a < b."""
        return [(a, b) for a in self.elements for b in self.elements if self.lt(a, b)]

    @property
    def covers(self) -> tuple[tuple[int, int], ...]:
        """Cover relations (a, b), a < b with nothing in between, sorted."""
        if self._covers is None:
            cov = []
            for a in range(self.n):
                strict = self.up[a] & ~(1 << a)
                for b in bits(strict):
                    between = strict & self.down[b] & ~(1 << b)
                    if not between:
                        cov.append((a + 1, b + 1))
            object.__setattr__(self, "_covers", tuple(sorted(cov)))
        return self._covers

    @property
    def hasse_adj(self) -> tuple[int, ...]:
        """Undirected Hasse-diagram neighbours of each element, as bitmasks."""
        if self._hasse is None:
            adj = [0] * self.n
            for a, b in self.covers:
                adj[a - 1] |= 1 << (b - 1)
                adj[b - 1] |= 1 << (a - 1)
            object.__setattr__(self, "_hasse", tuple(adj))
        return self._hasse

    def minimal(self) -> list[int]:
        return [i + 1 for i in range(self.n) if self.down[i] == 1 << i]

    def maximal(self) -> list[int]:
        return [i + 1 for i in range(self.n) if self.up[i] == 1 << i]

    def __eq__(self, other):
        if not isinstance(other, Poset):
            return NotImplemented
        return self.n == other.n and self.up == other.up

    def __hash__(self):
        return hash((self.n, self.up))

    def __len__(self):
        return self.n

    def __repr__(self):
        cov = ", ".join(f"{a}<{b}" for a, b in self.covers)
        return f"Poset(n={self.n}, covers=[{cov}])"

    def to_text(self) -> str:
        lines = [f"n {self.n}"] + [f"{a} < {b}" for a, b in self.covers]
        return "\n".join(lines) + "\n"


# --- constructors ---------------------------------------------------------

def make_chain(n: int) -> Poset:
    if n < 1:
        raise PosetError("empty poset")
    return Poset(n, [(i, i + 1) for i in range(1, n)])


def make_antichain(n: int) -> Poset:
    if n < 1:
        raise PosetError("empty poset")
    return Poset(n)


def ordinal_sum(lower: Poset, *uppers: Poset) -> Poset:
    """lower (+) upper (+) ...; the lower block keeps labels 1..|lower|."""
    p = lower
    for upper in uppers:
        n1, n2 = p.n, upper.n
        rel = p.relations()
        rel += [(a + n1, b + n1) for a, b in upper.relations()]
        rel += [(a, n1 + b) for a in p.maximal() for b in upper.minimal()]
        p = Poset(n1 + n2, rel)
    return p


def claw(n: int) -> Poset:
    """A_1 (+) A_n."""
    return ordinal_sum(make_antichain(1), make_antichain(n))


def broom(n: int, k: int) -> Poset:
    """C_{n+1} (+) A_k (just the chain when k = 0)."""
    c = make_chain(n + 1)
    return ordinal_sum(c, make_antichain(k)) if k else c


# --- subposet predicates --------------------------------------------------

def _check_subset(p: Poset, s) -> int:
    m = to_mask(s)
    if m & ~p.full_mask:
        raise PosetError(f"{sorted(s)} is not a subset of 1..{p.n}")
    return m


def convex_mask(p: Poset, m: int) -> bool:
    above = below = 0
    for i in bits(m):
        above |= p.up[i]
        below |= p.down[i]
    return (above & below) & ~m == 0


def connected_mask(p: Poset, m: int) -> bool:
    if not m:
        return False
    adj = p.hasse_adj
    seen = m & -m
    frontier = seen
    while frontier:
        nxt = 0
        for i in bits(frontier):
            nxt |= adj[i]
        nxt &= m & ~seen
        seen |= nxt
        frontier = nxt
    return seen == m


def autonomous_mask(p: Poset, m: int) -> bool:
    outside = p.full_mask & ~m
    for z in bits(outside):
        u = p.up[z] & m
        d = p.down[z] & m
        if u not in (0, m) or d not in (0, m):
            return False
    return True


def is_convex(p: Poset, s) -> bool:
    return convex_mask(p, _check_subset(p, s))


def is_connected(p: Poset, s=None) -> bool:
    """Connectivity of the induced Hasse subgraph on s (default: all of p)."""
    m = p.full_mask if s is None else _check_subset(p, s)
    if not m:
        raise PosetError("connectivity of the empty set is undefined")
    return connected_mask(p, m)


def is_tube(p: Poset, s) -> bool:
    m = _check_subset(p, s)
    return bool(m) and connected_mask(p, m) and convex_mask(p, m)


def is_proper_tube(p: Poset, s) -> bool:
    return 1 < len(set(s)) < p.n and is_tube(p, s)


def is_autonomous(p: Poset, s) -> bool:
    m = _check_subset(p, s)
    if not m:
        raise PosetError("autonomy of the empty set is undefined")
    return autonomous_mask(p, m)


def is_chain(p: Poset, s) -> bool:
    s = sorted(s)
    return all(p.comparable(a, b) for a, b in itertools.combinations(s, 2))


def chain_failure(p: Poset, s) -> str | None:
    """Why s is not a proper autonomous chain of p, naming the offending pair;
    None if it is one."""
    s = sorted(set(s))
    if not s:
        return "the chain is empty"
    bad = [a for a in s if not 1 <= a <= p.n]
    if bad:
        return f"element {bad[0]} is not in 1..{p.n}"
    if len(s) == p.n:
        return "S is the whole poset (must be proper)"
    for a, b in itertools.combinations(s, 2):
        if not p.comparable(a, b):
            return f"elements {a} and {b} of S are incomparable (not a chain)"
    for z in p.elements:
        if z in s:
            continue
        for x, y in itertools.combinations(s, 2):
            if p.leq(x, z) != p.leq(y, z) or p.leq(z, x) != p.leq(z, y):
                return f"outside element {z} sees {x} and {y} differently (not autonomous)"
    return None


def sorted_chain(p: Poset, s) -> list[int]:
    """Elements of the chain s from bottom to top."""
    return sorted(s, key=lambda a: bin(p.down[a - 1]).count("1"))


def induced(p: Poset, s) -> Poset:
    """Induced subposet on s, relabelled 1..|s| in increasing label order."""
    elems = sorted(s)
    idx = {a: i + 1 for i, a in enumerate(elems)}
    rel = [(idx[a], idx[b]) for a in elems for b in elems if p.lt(a, b)]
    return Poset(len(elems), rel)


def substitute_with_map(p: Poset, s, replacement: Poset) -> tuple[Poset, dict[int, int], list[int]]:
    """Like ``substitute`` but also returns the relabelling of P - S and the
    labels occupied by the replacement (in replacement order)."""
    m = _check_subset(p, s)
    if not m:
        raise PosetError("cannot substitute the empty set")
    if m == p.full_mask:
        raise PosetError("substituted set must be proper")
    if not autonomous_mask(p, m):
        raise PosetError(f"{sorted(s)} is not autonomous")
    s = sorted(from_mask(m))
    anchor = s[0]
    outside = [a for a in p.elements if a not in s]
    new_label: dict[int, int] = {}
    nxt = 1
    block: list[int] = []
    for a in p.elements:
        if a == anchor:
            block = list(range(nxt, nxt + replacement.n))
            nxt += replacement.n
        elif a not in s:
            new_label[a] = nxt
            nxt += 1
    rel = [(new_label[a], new_label[b]) for a in outside for b in outside if p.lt(a, b)]
    rel += [(block[a - 1], block[b - 1]) for a, b in replacement.relations()]
    for z in outside:
        for r in block:
            if p.lt(z, anchor):
                rel.append((new_label[z], r))
            elif p.lt(anchor, z):
                rel.append((r, new_label[z]))
    return Poset(nxt - 1, rel), new_label, block


def substitute(p: Poset, s, replacement: Poset) -> Poset:
    """Replace the autonomous proper subset s by ``replacement``.

    The replacement block takes the position of min(s); everything else keeps
    its relative label order.
    """
    return substitute_with_map(p, s, replacement)[0]


def is_isomorphic(p: Poset, q: Poset) -> bool:
    """Brute-force bijection search; test support only (|P| <= 8)."""
    if p.n != q.n:
        return False
    if p.n > 8:
        raise PosetError("isomorphism search limited to 8 elements")
    key = lambda poset, i: (bin(poset.up[i]).count("1"), bin(poset.down[i]).count("1"))
    if sorted(key(p, i) for i in range(p.n)) != sorted(key(q, i) for i in range(q.n)):
        return False
    cands = [[j for j in range(q.n) if key(q, j) == key(p, i)] for i in range(p.n)]

    def extend(i, used, phi):
        if i == p.n:
            return True
        for j in cands[i]:
            if used >> j & 1:
                continue
            ok = all(
                bool(p.up[i] >> a & 1) == bool(q.up[j] >> phi[a] & 1)
                and bool(p.up[a] >> i & 1) == bool(q.up[phi[a]] >> j & 1)
                for a in range(i)
            )
            if ok:
                phi.append(j)
                if extend(i + 1, used | 1 << j, phi):
                    return True
                phi.pop()
        return False

    return extend(0, 0, [])


# --- text formats ---------------------------------------------------------

def parse_poset_text(text: str) -> Poset:
    """``n <count>`` then ``a < b`` lines; ``#`` starts a comment."""
    n = None
    rel = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            m = re.fullmatch(r"n\s+(\d+)", line)
            if not m:
                raise PosetError(f"line {lineno}: expected 'n <count>', got {raw!r}")
            n = int(m.group(1))
            continue
        m = re.fullmatch(r"(\d+)\s*<\s*(\d+)", line)
        if not m:
            raise PosetError(f"line {lineno}: expected 'a < b', got {raw!r}")
        rel.append((int(m.group(1)), int(m.group(2))))
    if n is None:
        raise PosetError("missing 'n <count>' header")
    return Poset(n, rel)


def _split_args(body: str) -> list[str]:
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(body[start:i].strip())
            start = i + 1
    parts.append(body[start:].strip())
    # "broom:2,1" splits into "broom:2" and "1"; glue bare integers back on
    merged: list[str] = []
    for part in parts:
        if part.isdigit() and merged:
            merged[-1] += "," + part
        else:
            merged.append(part)
    return merged


def build_poset(expr: str) -> Poset:
    """Builder grammar: ``chain:k``, ``antichain:k``, ``claw:k``,
    ``broom:n,k`` (= C_{n+1} (+) A_k) and ``osum(a, b, ...)``."""
    e = expr.strip()
    m = re.fullmatch(r"osum\((.*)\)", e, re.S)
    if m:
        args = [build_poset(a) for a in _split_args(m.group(1))]
        if len(args) < 2:
            raise PosetError(f"osum needs at least two arguments: {expr!r}")
        return ordinal_sum(*args)
    m = re.fullmatch(r"(chain|antichain|claw):(\d+)", e)
    if m:
        kind, k = m.group(1), int(m.group(2))
        return {"chain": make_chain, "antichain": make_antichain, "claw": claw}[kind](k)
    m = re.fullmatch(r"broom:(\d+),(\d+)", e)
    if m:
        return broom(int(m.group(1)), int(m.group(2)))
    raise PosetError(f"cannot parse poset expression {expr!r}")
