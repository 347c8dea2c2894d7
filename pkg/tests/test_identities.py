from math import factorial

import pytest
from hypothesis import given, strategies as st

from conftest import connected_posets
from posetassoc import identities
from posetassoc.acceptance import autonomous_chains, theorem_fixtures
from posetassoc.perms import all_perms, cycle_type, descent_gf, eulerian, narayana_nk, stack_sort
from posetassoc.polyalg import IntPoly, narayana_a, narayana_b, parse_poly, partition_product
from posetassoc.poset import PosetError, claw, make_antichain, make_chain, ordinal_sum
from posetassoc.tubings import enumerate_tubings, h_polynomial

P = parse_poly
pairs6 = [(n, k) for n in range(1, 6) for k in range(1, 6) if n + k <= 6]


@pytest.mark.parametrize("name, p, S", theorem_fixtures(), ids=lambda v: v if isinstance(v, str) else "")
def test_theorem_fixtures(name, p, S):
    lhs, rhs = identities.substitution_sides(p, S)
    assert lhs == rhs


def test_theorem_two_element_chain_by_hand():
    # h_P = (h_{P_2} + (1 + x) h_{P_1}) / 2 for P = C_4, S = {2, 3}
    p1 = make_chain(3)
    p2 = ordinal_sum(make_chain(1), make_antichain(2), make_chain(1))
    expected = (h_polynomial(p2) + P("1 + x") * h_polynomial(p1)).exact_div(2)
    assert identities.substitution_sides(make_chain(4), {2, 3})[0] == expected == narayana_a(3)


def test_theorem_singleton_chain():
    lhs, rhs = identities.substitution_sides(make_chain(4), {2})
    assert lhs == rhs == narayana_a(3)


@given(connected_posets(min_size=3, max_size=6), st.data())
def test_theorem_on_random_posets(p, data):
    S = data.draw(st.sampled_from(autonomous_chains(p, 3)))
    lhs, rhs = identities.substitution_sides(p, S)
    assert lhs == rhs


def test_theorem_rejects_non_chain():
    with pytest.raises(PosetError):
        identities.substitution_sides(claw(3), {2, 3})


# --- corollaries ------------------------------------------------------------

def test_small_corollary_cases():
    lhs, rhs = identities.narayana_via_eulerian(2)
    assert lhs == rhs == P("1 + x")
    lhs, rhs = identities.narayana_via_brooms(1, 2)
    assert lhs == rhs == (narayana_nk(1, 2) + P("1 + x") * narayana_nk(1, 1)).exact_div(2)
    lhs, rhs = identities.eulerian_pair_convolution(1, 1)
    assert lhs == rhs == P("2 + 2x")


@pytest.mark.parametrize("n", range(1, 7))
def test_cor51(n):
    lhs, rhs = identities.narayana_via_eulerian(n)
    assert lhs == rhs


def test_cor51_by_permutation_sum():
    # direct sum over S_4 without grouping by cycle type
    total = IntPoly()
    for w in all_perms(4):
        lam = cycle_type(w)
        total = total + partition_product(narayana_b, lam) * eulerian(len(lam))
    assert total.exact_div(factorial(4)) == narayana_a(4)


@pytest.mark.parametrize("name", ["5.2", "5.3", "5.4", "5.5", "5.6", "5.7"])
@pytest.mark.parametrize("n, k", pairs6)
def test_corollaries(name, n, k):
    lhs, rhs = identities.COROLLARIES[name](n, k)
    assert lhs == rhs


def test_corollary_boundaries():
    assert identities.narayana_via_brooms(0, 3)[0] == identities.narayana_via_brooms(0, 3)[1]
    assert identities.broom_via_eulerian(3, 0)[0] == identities.broom_via_eulerian(3, 0)[1]
    with pytest.raises(ValueError):
        identities.narayana_via_eulerian_pairs(0, 2)


# --- the two-leg broom ------------------------------------------------------

@pytest.mark.parametrize("n, k", [(n, k) for n in range(1, 5) for k in range(0, 5) if 2 <= n + k <= 5])
def test_final_proposition(n, k):
    formula, tubing, descents = identities.two_leg_broom_sides(n, k)
    assert formula == tubing == descents


def test_two_leg_broom_shape():
    p = identities.two_leg_broom(2, 1)
    assert p.n == 4 and p.minimal() == [1, 2] and p.maximal() == [4]
    with pytest.raises(PosetError):
        identities.two_leg_broom(1, 0)


def test_final_proposition_descents_by_filter():
    n, k = 2, 2
    N = n + k + 1
    ws = [
        w for w in all_perms(N)
        if w[0] <= n + k - 1 and w[-1] >= n + k
        and all(v == i for i, v in enumerate(stack_sort(w), 1) if i > k)
    ]
    assert descent_gf(ws) == identities.two_leg_broom_sides(n, k)[2]


def test_census_hook_is_used():
    calls = []

    def counting(p):
        calls.append(p.n)
        return enumerate_tubings(p)

    identities.substitution_sides(make_chain(5), {2, 3, 4}, counting)
    assert sorted(calls) == [3, 4, 5, 5]
