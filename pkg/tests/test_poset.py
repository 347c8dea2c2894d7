import itertools

import pytest
from hypothesis import given, strategies as st

from conftest import posets
from posetassoc.poset import (
    Poset,
    PosetError,
    autonomous_mask,
    broom,
    build_poset,
    chain_failure,
    claw,
    from_mask,
    induced,
    is_autonomous,
    is_connected,
    is_convex,
    is_isomorphic,
    is_proper_tube,
    is_tube,
    make_antichain,
    make_chain,
    ordinal_sum,
    parse_poset_text,
    substitute,
    substitute_with_map,
)


def brute_leq(n, relations):
    """Reachability by repeated relaxation, independent of the bitmask closure."""
    leq = {(a, a) for a in range(1, n + 1)} | set(relations)
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(list(leq), repeat=2):
            if b == c and (a, d) not in leq:
                leq.add((a, d))
                changed = True
    return leq


def autonomous_subsets(p):
    for m in range(1, p.full_mask):
        if autonomous_mask(p, m):
            yield from_mask(m)


# --- constructors -------------------------------------------------------

def test_chain_and_antichain():
    assert make_chain(1).covers == ()
    assert make_chain(4).covers == ((1, 2), (2, 3), (3, 4))
    a3 = make_antichain(3)
    assert a3.covers == ()
    assert all(a3.leq(a, b) == (a == b) for a in range(1, 4) for b in range(1, 4))


def test_ordinal_sums():
    c = ordinal_sum(make_antichain(1), make_antichain(3))
    assert c.minimal() == [1] and c.maximal() == [2, 3, 4]
    assert c == claw(3)
    b = ordinal_sum(make_chain(2), make_antichain(2))
    assert b.covers == ((1, 2), (2, 3), (2, 4))
    assert b == broom(1, 2)


def test_cycles_rejected():
    with pytest.raises(PosetError):
        Poset(3, [(1, 2), (2, 3), (3, 1)])
    with pytest.raises(PosetError):
        Poset(2, [(1, 3)])


@given(posets())
def test_closure_matches_reachability(p):
    leq = brute_leq(p.n, p.relations())
    for a in p.elements:
        for b in p.elements:
            assert p.leq(a, b) == ((a, b) in leq)
    # covers regenerate the same order
    assert brute_leq(p.n, p.covers) == leq


@given(posets(), posets(max_size=4), posets(max_size=4))
def test_ordinal_sum_associative(a, b, c):
    left = ordinal_sum(ordinal_sum(a, b), c)
    right = ordinal_sum(a, ordinal_sum(b, c))
    assert left == right
    if left.n <= 8:
        assert is_isomorphic(left, right)


# --- predicates ---------------------------------------------------------

def test_convexity_examples():
    c4 = make_chain(4)
    assert not is_convex(c4, {1, 3})
    assert is_convex(c4, {2, 3})
    assert all(is_convex(c4, {a}) for a in range(1, 5))


def test_connectivity_examples():
    c4 = make_chain(4)
    assert is_connected(c4, {1, 2, 3})
    assert not is_connected(c4, {1, 3})
    assert not is_connected(make_antichain(3), {1, 2})


def test_connectivity_uses_hasse_diagram():
    # 1 < 3 only through 2; {1, 3} is comparable but not joined by a cover
    assert not is_connected(make_chain(3), {1, 3})


def test_tube_examples():
    c4 = make_chain(4)
    assert is_tube(c4, {2, 3}) and is_proper_tube(c4, {2, 3})
    assert is_tube(c4, {1, 2, 3, 4}) and not is_proper_tube(c4, {1, 2, 3, 4})
    assert not is_tube(claw(3), {2, 3})


def test_autonomy_examples():
    assert is_autonomous(make_chain(3), {1, 2})
    assert is_autonomous(make_chain(3), {3})
    assert is_autonomous(claw(3), {2, 3, 4})
    assert not is_autonomous(make_chain(3), {1, 3})


def test_chain_failure_names_pair():
    assert chain_failure(make_chain(4), {2, 3}) is None
    assert "2 and 3" in chain_failure(claw(3), {2, 3})
    assert "outside element 3" in chain_failure(make_chain(4), {2, 4})
    assert "proper" in chain_failure(make_chain(2), {1, 2})


@given(posets(max_size=5), st.data())
def test_autonomy_by_definition(p, data):
    m = data.draw(st.integers(1, p.full_mask))
    s = from_mask(m)
    expected = all(
        len({(p.leq(z, a), p.leq(a, z)) for a in s}) == 1 for z in p.elements if z not in s
    )
    assert is_autonomous(p, s) == expected


# --- substitution -------------------------------------------------------

def test_substitute_examples():
    q = substitute(make_chain(3), {1, 2}, make_antichain(2))
    assert q.covers == ((1, 3), (2, 3))
    assert q.minimal() == [1, 2] and q.maximal() == [3]
    for i in range(1, 4):
        assert is_isomorphic(substitute(make_chain(4), {2, 3, 4}, make_antichain(i)), claw(i))


def test_substitute_rejects_bad_sets():
    with pytest.raises(PosetError):
        substitute(make_chain(3), {1, 3}, make_antichain(2))
    with pytest.raises(PosetError):
        substitute(make_chain(3), {1, 2, 3}, make_antichain(2))


@given(posets(min_size=2, max_size=6), st.data())
def test_identity_substitution(p, data):
    subsets = [s for s in autonomous_subsets(p) if len(s) < p.n]
    s = data.draw(st.sampled_from(subsets))
    q = substitute(p, s, induced(p, s))
    assert is_isomorphic(q, p)


@given(posets(min_size=2, max_size=4), posets(max_size=3), st.data())
def test_substitution_preserves_image_autonomy(p, r, data):
    subsets = [s for s in autonomous_subsets(p) if len(s) < p.n]
    s = data.draw(st.sampled_from(subsets))
    q, _, block = substitute_with_map(p, s, r)
    assert q.n == p.n - len(s) + r.n
    assert is_autonomous(q, block)


@given(posets(min_size=2, max_size=4), posets(min_size=2, max_size=3), posets(max_size=2), st.data())
def test_substitution_compositional(p, r, r2, data):
    s = data.draw(st.sampled_from([s for s in autonomous_subsets(p) if len(s) < p.n]))
    t = data.draw(st.sampled_from([t for t in autonomous_subsets(r) if len(t) < r.n]))
    q, _, block = substitute_with_map(p, s, r)
    twice = substitute(q, {block[i - 1] for i in t}, r2)
    once = substitute(p, s, substitute(r, t, r2))
    assert is_isomorphic(twice, once)


@given(posets(min_size=2, max_size=4), st.data())
def test_substituting_twice_into_same_block(p, data):
    s = data.draw(st.sampled_from([s for s in autonomous_subsets(p) if len(s) < p.n]))
    q, _, block = substitute_with_map(p, s, make_antichain(2))
    assert is_isomorphic(substitute(q, block, make_chain(2)), substitute(p, s, make_chain(2)))


# --- text formats -------------------------------------------------------

def test_text_roundtrip_and_comments():
    text = "# a broom\nn 4\n1 < 2  # stem\n2 < 3\n2 < 4\n1 < 3\n"
    p = parse_poset_text(text)
    assert p == broom(1, 2)
    assert p.to_text() == "n 4\n1 < 2\n2 < 3\n2 < 4\n"


@given(posets())
def test_text_writer_roundtrip(p):
    assert parse_poset_text(p.to_text()) == p


@pytest.mark.parametrize("text", ["", "3\n", "n 3\n1 -> 2\n", "n 2\n1 < 5\n"])
def test_parse_errors(text):
    with pytest.raises(PosetError):
        parse_poset_text(text)


def test_builder_grammar():
    assert build_poset("chain:4") == make_chain(4)
    assert build_poset("osum(antichain:1,antichain:3)") == claw(3)
    assert build_poset("broom:2,2") == ordinal_sum(make_chain(3), make_antichain(2))
    assert build_poset("osum(antichain:2, chain:1, antichain:2)").n == 5
    assert build_poset("osum(broom:1,1,chain:2)").n == 5
    with pytest.raises(PosetError):
        build_poset("lattice:3")
