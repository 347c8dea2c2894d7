"""Both sides of the h-polynomial substitution identity and of its Narayana /
Eulerian consequences, as exact IntPolys.

Sums over S_n run over cycle types weighted by class size; the 1/n! factors
are exact divisions.
"""

from __future__ import annotations

from math import comb, factorial
from typing import Callable

from .perms import descent_gf, eulerian, eulerian_restricted, narayana_nk, two_leg_broom_set
from .polyalg import IntPoly, class_size, narayana_a, narayana_b, partition_product, partitions
from .poset import Poset, PosetError, make_antichain, make_chain, ordinal_sum, to_mask
from .tubings import _check_autonomous_chain, antichain_replacements, enumerate_tubings, h_polynomial

ONE_PLUS_X = IntPoly([1, 1])


def _sum_sn(n: int, term: Callable[[tuple[int, ...]], IntPoly]) -> IntPoly:
    total = IntPoly()
    for lam in partitions(n):
        total = total + term(lam) * class_size(lam)
    return total


def _sum_sn_sk(n: int, k: int, term: Callable[[tuple[int, ...], tuple[int, ...]], IntPoly]) -> IntPoly:
    total = IntPoly()
    for lam in partitions(n):
        for mu in partitions(k):
            total = total + term(lam, mu) * (class_size(lam) * class_size(mu))
    return total


def B(lam) -> IntPoly:
    return partition_product(narayana_b, lam)


def substitution_sides(p: Poset, S, census: Callable[[Poset], dict] = enumerate_tubings) -> tuple[IntPoly, IntPoly]:
    """(h_P, (1/n!) sum_w B_w h_{P_{l_w}}) for an autonomous proper chain S."""
    _check_autonomous_chain(p, S)
    n = len(set(S))
    lhs = h_polynomial(p, census(p))
    h_i = [h_polynomial(q, census(q)) for q in antichain_replacements(p, S)]
    rhs = _sum_sn(n, lambda lam: B(lam) * h_i[len(lam) - 1]).exact_div(factorial(n))
    return lhs, rhs


def _need(cond: bool, msg: str):
    if not cond:
        raise ValueError(msg)


def narayana_via_eulerian(n: int) -> tuple[IntPoly, IntPoly]:
    """N_n = (1/n!) sum_{w in S_n} B_w E_{l_w}."""
    _need(n >= 1, "needs n >= 1")
    rhs = _sum_sn(n, lambda lam: B(lam) * eulerian(len(lam))).exact_div(factorial(n))
    return narayana_a(n), rhs


def narayana_via_brooms(n: int, k: int) -> tuple[IntPoly, IntPoly]:
    """N_{n+k} = (1/k!) sum_{w in S_k} B_w N_{n,l_w}."""
    _need(n >= 0 and k >= 1, "needs n >= 0, k >= 1")
    rhs = _sum_sn(k, lambda lam: B(lam) * narayana_nk(n, len(lam))).exact_div(factorial(k))
    return narayana_a(n + k), rhs


def broom_via_eulerian(n: int, k: int) -> tuple[IntPoly, IntPoly]:
    """N_{n,k} = (1/n!) sum_{w in S_n} B_w E_{l_w + k}."""
    _need(n >= 1 and k >= 0, "needs n >= 1, k >= 0")
    rhs = _sum_sn(n, lambda lam: B(lam) * eulerian(len(lam) + k)).exact_div(factorial(n))
    return narayana_nk(n, k), rhs


def narayana_via_eulerian_pairs(n: int, k: int) -> tuple[IntPoly, IntPoly]:
    """N_{n+k} = (1/(n!k!)) sum_{pi, sigma} B_pi B_sigma E_{l_pi + l_sigma}."""
    _need(n >= 1 and k >= 1, "needs n, k >= 1")
    rhs = _sum_sn_sk(n, k, lambda a, b: B(a) * B(b) * eulerian(len(a) + len(b)))
    return narayana_a(n + k), rhs.exact_div(factorial(n) * factorial(k))


def eulerian_pair_convolution(n: int, k: int) -> tuple[IntPoly, IntPoly]:
    """sum_{w in S_{n+k}} B_w E_{l_w} = C(n+k, n) sum_{pi, sigma} B_pi B_sigma E_{l_pi + l_sigma}."""
    _need(n >= 1 and k >= 1, "needs n, k >= 1")
    lhs = _sum_sn(n + k, lambda lam: B(lam) * eulerian(len(lam)))
    rhs = _sum_sn_sk(n, k, lambda a, b: B(a) * B(b) * eulerian(len(a) + len(b))) * comb(n + k, n)
    return lhs, rhs


def broom_via_restricted_eulerian(n: int, k: int) -> tuple[IntPoly, IntPoly]:
    """N_{n-1,k} = (1/n!) sum_{w in S_n} B_w E_{l_w, k}."""
    _need(n >= 1 and k >= 1, "needs n, k >= 1")
    rhs = _sum_sn(n, lambda lam: B(lam) * eulerian_restricted(len(lam), k)).exact_div(factorial(n))
    return narayana_nk(n - 1, k), rhs


def narayana_via_restricted_eulerian(n: int, k: int) -> tuple[IntPoly, IntPoly]:
    """N_{n+k-1} = (1/(n!k!)) sum_{pi, sigma} B_pi B_sigma E_{l_pi, l_sigma}."""
    _need(n >= 1 and k >= 1, "needs n, k >= 1")
    rhs = _sum_sn_sk(n, k, lambda a, b: B(a) * B(b) * eulerian_restricted(len(a), len(b)))
    return narayana_a(n + k - 1), rhs.exact_div(factorial(n) * factorial(k))


def two_leg_broom(n: int, k: int) -> Poset:
    """A_2 (+) C_{n-1} (+) A_k, dropping empty blocks."""
    parts = [make_antichain(2)]
    if n > 1:
        parts.append(make_chain(n - 1))
    if k:
        parts.append(make_antichain(k))
    if len(parts) == 1:
        raise PosetError("A_2 alone is disconnected")
    return ordinal_sum(*parts)


def two_leg_broom_sides(n: int, k: int, census: Callable[[Poset], dict] = enumerate_tubings):
    """(2N_{n,k} - (1+x)N_{n-1,k}, h(A_2 (+) C_{n-1} (+) A_k), descent gf of the
    restricted preimage set)."""
    _need(n >= 1 and k >= 0 and n + k >= 2, "needs n >= 1, k >= 0, n + k >= 2")
    formula = narayana_nk(n, k) * 2 - ONE_PLUS_X * narayana_nk(n - 1, k)
    p = two_leg_broom(n, k)
    tubing = h_polynomial(p, census(p))
    descents = descent_gf(two_leg_broom_set(n, k))
    return formula, tubing, descents


COROLLARIES: dict[str, Callable] = {
    "5.1": narayana_via_eulerian,
    "5.2": narayana_via_brooms,
    "5.3": broom_via_eulerian,
    "5.4": narayana_via_eulerian_pairs,
    "5.5": eulerian_pair_convolution,
    "5.6": broom_via_restricted_eulerian,
    "5.7": narayana_via_restricted_eulerian,
}
