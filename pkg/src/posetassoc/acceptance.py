"""Exit criteria for the library, runnable from pytest and from ``posetassoc selftest``.

Every check is an exact integer equality; each criterion also has a wall-clock
budget and fails if it overruns.
"""

from __future__ import annotations

import itertools
import time
from collections import Counter
from dataclasses import dataclass
from math import factorial
from typing import Callable

from . import graphs, identities, perms, polyalg, tubings
from .poset import (
    Poset,
    autonomous_mask,
    broom,
    claw,
    from_mask,
    is_chain,
    make_antichain,
    make_chain,
    ordinal_sum,
)


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    elapsed: float
    budget: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"[{status}] criterion {self.number}: {self.name} "
            f"({self.elapsed:.2f}s / {self.budget:g}s) {self.detail}"
        )


def theorem_fixtures() -> list[tuple[str, Poset, frozenset[int]]]:
    return [
        ("C_4, S={2,3}", make_chain(4), frozenset({2, 3})),
        ("C_5, S={2,3,4}", make_chain(5), frozenset({2, 3, 4})),
        ("C_5, S={2,3}", make_chain(5), frozenset({2, 3})),
        ("C_3+A_2, S={1,2}", broom(2, 2), frozenset({1, 2})),
        (
            "A_1+C_2+A_2, S={2,3}",
            ordinal_sum(make_antichain(1), make_chain(2), make_antichain(2)),
            frozenset({2, 3}),
        ),
    ]


def autonomous_chains(p: Poset, max_size: int) -> list[frozenset[int]]:
    """Proper autonomous chains of size 1..max_size."""
    out = []
    for r in range(1, max_size + 1):
        for s in itertools.combinations(p.elements, r):
            m = sum(1 << (a - 1) for a in s)
            if m != p.full_mask and autonomous_mask(p, m) and is_chain(p, s):
                out.append(frozenset(s))
    return out


def catalan_by_ballots(n: int) -> int:
    """Count +-1 sequences of length 2n with nonnegative partial sums ending at 0."""
    count = 0
    for steps in itertools.product((1, -1), repeat=2 * n):
        height = 0
        for s in steps:
            height += s
            if height < 0:
                break
        else:
            count += height == 0
    return count


def _timed(number: int, name: str, budget: float, body: Callable[[], tuple[bool, str]]) -> CriterionResult:
    t0 = time.perf_counter()
    try:
        ok, detail = body()
    except Exception as e:  # a crash is a failed criterion, reported not raised
        ok, detail = False, f"error: {type(e).__name__}: {e}"
    elapsed = time.perf_counter() - t0
    if elapsed >= budget:
        ok = False
        detail += f" [over budget]"
    return CriterionResult(number, name, ok, detail, elapsed, budget)


def c1_associahedron_faces():
    bad = []
    for n in range(1, 6):
        census = tubings.enumerate_tubings(make_chain(n + 1))
        expected = polyalg.f_assoc(n).reverse(n)
        got = polyalg.IntPoly(census.get(k, 0) for k in range(max(census) + 1))
        if got != expected:
            bad.append(f"C_{n + 1}: {census} vs {expected}")
    c5 = tubings.enumerate_tubings(make_chain(5))
    if c5 != {0: 1, 1: 9, 2: 21, 3: 14}:
        bad.append(f"C_5 census {c5}")
    return not bad, "; ".join(bad) or "C_2..C_6 match F_n reversed"


def c2_h_identities():
    bad = []
    h = tubings.h_polynomial
    for n in range(1, 6):
        if h(make_chain(n + 1)) != polyalg.narayana_a(n):
            bad.append(f"h(C_{n + 1}) != N_{n}")
    for n in range(1, 5):
        if h(claw(n)) != perms.eulerian(n):
            bad.append(f"h(A_1+A_{n}) != E_{n}")
    for m in range(1, 5):
        for n in range(1, 6 - m):
            if h(ordinal_sum(make_antichain(m), make_antichain(n))) != perms.eulerian_restricted(m, n):
                bad.append(f"h(A_{m}+A_{n}) != E_{m},{n}")
    for n in range(1, 6):
        for k in range(0, 6 - n):
            if h(broom(n, k)) != perms.narayana_nk(n, k):
                bad.append(f"h(C_{n + 1}+A_{k}) != N_{n},{k}")
    return not bad, "; ".join(bad) or "N_n, E_n, E_{m,n}, N_{n,k} all match"


def c3_bivariate():
    bad = []
    for n in range(1, 8):
        if polyalg.eq2_lhs(n) != polyalg.eq2_rhs(n):
            bad.append(f"eq2 n={n}")
        if polyalg.eq3_lhs(n) != polyalg.eq3_rhs(n):
            bad.append(f"eq3 n={n}")
    printed2 = polyalg.parse_bipoly("t^3 + t^2(6 + 3x) + t(12 + 12x + 2x^2)")
    printed3 = polyalg.parse_bipoly("t^3 + t^2(3 + 6x) + t(2 + 12x + 12x^2)")
    if not (polyalg.eq2_lhs(3) == polyalg.eq2_rhs(3) == printed2):
        bad.append("eq2 n=3 differs from printed sides")
    if not (polyalg.eq3_lhs(3) == polyalg.eq3_rhs(3) == printed3):
        bad.append("eq3 n=3 differs from printed sides")
    return not bad, "; ".join(bad) or "eq2 and eq3 equal for n=1..7, n=3 matches print"


def c4_substitution():
    bad = []
    for label, p, s in theorem_fixtures():
        lhs, rhs = identities.substitution_sides(p, s)
        if lhs != rhs:
            bad.append(f"{label}: {lhs} vs {rhs}")
    return not bad, "; ".join(bad) or f"{len(theorem_fixtures())} fixtures equal"


def c5_nondegradable_count():
    bad, cases = [], 0
    for label, p, _ in theorem_fixtures():
        for s in autonomous_chains(p, 3):
            cases += 1
            for k, (lhs, rhs) in tubings.nondegradable_identity(p, s).items():
                if lhs != rhs:
                    bad.append(f"{label} S={sorted(s)} k={k}: {lhs} vs {rhs}")
    return not bad, "; ".join(bad) or f"{cases} (poset, S) cases equal for every k"


def c6_bijections():
    bad = []
    w, alpha = perms.parse_perm("965347128"), (3, 4, 2)
    omega, U = perms.comp_to_cycles(w, alpha)
    if omega != perms.parse_perm("324796185") or U != (
        frozenset({3, 4}), frozenset({1}), frozenset({2, 5})
    ):
        bad.append(f"worked example gave {perms.format_perm(omega)}, {U}")
    if perms.cycles_to_comp(omega, U) != (w, alpha):
        bad.append("worked example does not invert")
    for n in range(1, 6):
        images = set()
        for w in perms.all_perms(n):
            for alpha in perms.compositions(n):
                om, UU = perms.comp_to_cycles(w, alpha)
                if len(UU) != len(alpha) or perms.cycles_to_comp(om, UU) != (w, alpha):
                    bad.append(f"(w, alpha) round trip n={n} {w} {alpha}")
                images.add((om, UU))
        target = sum(
            1
            for om in perms.all_perms(n)
            for _ in perms.ordered_set_partitions(range(1, perms.cycle_count(om) + 1))
        )
        if len(images) != target:
            bad.append(f"n={n}: {len(images)} images vs {target} (omega, U) pairs")
    for n in range(1, 6):
        images = set()
        for g in graphs.dc_family(n):
            l = len(g.component_masks())
            for t in graphs.iter_graph_tubings(g):
                gp, tt, sigma = graphs.dc_tubing_to_dp_pair(g, t)
                if len(tt) != len(t) or perms.cycle_count(sigma) != l:
                    bad.append(f"DC->DP statistic mismatch n={n}")
                if graphs.dp_pair_to_dc_tubing(gp, tt, sigma) != (g, t):
                    bad.append(f"DC/DP round trip n={n}")
                images.add((gp, tt, sigma))
        pairs = sum(
            c * factorial(len(gp.paths()))
            for gp in graphs.dp_family(n)
            for c in graphs.count_bottom_excluding(gp).values()
        )
        if len(images) != pairs:
            bad.append(f"n={n}: {len(images)} images vs {pairs} (T, sigma) pairs")
    return not bad, "; ".join(bad[:5]) or "both bijections invert exhaustively for n<=5"


def c7_twelve():
    lhs = polyalg.eq3_lhs(3).coefficient(1, 1)
    rhs = polyalg.eq3_rhs(3).coefficient(1, 1)
    tubes_on_dc = sum(
        1 for g in graphs.dc_family(3, 1) for t in graphs.iter_graph_tubings(g) if len(t) == 1
    )
    pairs = 0
    for r in range(1, 4):
        one_cycle = sum(1 for s in perms.all_perms(r) if perms.cycle_count(s) == 1)
        for gp in graphs.dp_family(3, r):
            pairs += graphs.count_bottom_excluding(gp).get(1, 0) * one_cycle
    ok = lhs == rhs == tubes_on_dc == pairs == 12
    return ok, f"[t x] lhs={lhs} rhs={rhs} tubings={tubes_on_dc} pairs={pairs}"


def c8_narayana_eulerian():
    bad, cases = [], 0
    for n in range(1, 7):
        a, b = identities.narayana_via_eulerian(n)
        cases += 1
        if a != b:
            bad.append(f"5.1 n={n}")
    for name, f in identities.COROLLARIES.items():
        if name == "5.1":
            continue
        for n in range(1, 6):
            for k in range(1, 7 - n):
                a, b = f(n, k)
                cases += 1
                if a != b:
                    bad.append(f"{name} n={n} k={k}: {a} vs {b}")
    return not bad, "; ".join(bad) or f"{cases} instances equal"


def c9_two_leg_broom():
    bad, cases = [], 0
    for n in range(1, 5):
        for k in range(0, 6 - n):
            if n + k < 2:
                continue
            a, b, c = identities.two_leg_broom_sides(n, k)
            cases += 1
            if not a == b == c:
                bad.append(f"n={n} k={k}: {a} / {b} / {c}")
    return not bad, "; ".join(bad) or f"{cases} (n, k) pairs agree three ways"


def acceptance_posets() -> list[Poset]:
    ps = [make_chain(n) for n in range(2, 7)]
    ps += [claw(n) for n in range(1, 5)]
    ps += [ordinal_sum(make_antichain(m), make_antichain(n)) for m in range(1, 5) for n in range(1, 6 - m)]
    ps += [broom(n, k) for n in range(1, 6) for k in range(0, 6 - n)]
    ps += [p for _, p, _ in theorem_fixtures()]
    ps += [identities.two_leg_broom(n, k) for n in range(1, 5) for k in range(0, 6 - n) if n + k >= 2]
    for _, p, s in theorem_fixtures():
        ps += tubings.antichain_replacements(p, s)
    return list(dict.fromkeys(ps))


def c10_structural():
    bad = []
    for p in acceptance_posets():
        h = tubings.h_polynomial(p)
        d = p.n - 2
        if not h.is_palindromic(d) or h[0] != 1:
            bad.append(f"h not symmetric for {p}")
        else:
            polyalg.gamma_polynomial(h, d)
    rounds = 0
    for _, p, _ in theorem_fixtures():
        for s in autonomous_chains(p, p.n - 1):
            for t in tubings.iter_tubings(p):
                d = tubings.decompose_bad(p, s, t)
                if tubings.reconstruct_bad(p, s, d) != tubings.bad_tubes(p, s, t):
                    bad.append(f"decomposition round trip {p} S={sorted(s)} T={t}")
                rounds += 1
    for n in range(1, 7):
        got = len(perms.stack_preimage(perms.identity(n)))
        if got != catalan_by_ballots(n):
            bad.append(f"stack-sortable count n={n}: {got}")
    return not bad, "; ".join(bad[:5]) or f"symmetry ok, {rounds} decompositions round-trip, Catalan ok"


CRITERIA = [
    (1, "associahedron face census", 1.0, c1_associahedron_faces),
    (2, "h-polynomial identities", 30.0, c2_h_identities),
    (3, "bivariate identities eq2/eq3", 1.0, c3_bivariate),
    (4, "substitution theorem fixtures", 60.0, c4_substitution),
    (5, "non-degradable tubing count", 60.0, c5_nondegradable_count),
    (6, "bijection round trips", 120.0, c6_bijections),
    (7, "twelve one-tube tubings / pairs", 1.0, c7_twelve),
    (8, "Narayana/Eulerian identities", 60.0, c8_narayana_eulerian),
    (9, "two-leg broom identity", 120.0, c9_two_leg_broom),
    (10, "structural suites", 60.0, c10_structural),
]


def run_criterion(number: int) -> CriterionResult:
    for num, name, budget, body in CRITERIA:
        if num == number:
            return _timed(num, name, budget, body)
    raise KeyError(number)


def run_all(echo: Callable[[str], None] | None = print) -> list[CriterionResult]:
    results = []
    for num, name, budget, body in CRITERIA:
        r = _timed(num, name, budget, body)
        if echo:
            echo(r.line())
        results.append(r)
    return results
