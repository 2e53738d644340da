from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

import _oracles as O
from engel_forge import (InvalidInputError, Permutation, PermGroup, TooLargeError, commutator, compose,
                         conjugate, coset_action, engel_commutator, quotient)
from engel_forge.corpus import alternating, direct_product, symmetric
from engel_forge.group import element_order, orbits


def perms(degree):
    return st.permutations(list(range(degree))).map(Permutation)


# permutations

@given(st.integers(2, 7).flatmap(lambda d: st.tuples(perms(d), perms(d), perms(d))))
def test_group_axioms(triple):
    p, q, r = triple
    e = Permutation.identity(len(p))
    assert (p * q) * r == p * (q * r)
    assert p * e == p == e * p
    assert p * p.inverse() == e
    assert (p * q).inverse() == q.inverse() * p.inverse()


@given(st.integers(2, 7).flatmap(lambda d: st.tuples(perms(d), perms(d))))
def test_conventions_match_reference(pair):
    p, q = pair
    assert tuple(compose(p, q)) == O.mul(p, q)
    for i in range(len(p)):
        assert (p * q)(i) == q(p(i))
    assert tuple(conjugate(p, q)) == O.conj(p, q)
    assert tuple(commutator(p, q)) == O.comm(p, q)


@given(st.integers(2, 6).flatmap(lambda d: st.tuples(perms(d), perms(d))), st.integers(0, 4))
def test_engel_word_recursion(pair, n):
    y, x = pair
    expected = y
    for _ in range(n):
        expected = O.comm(expected, x)
    assert tuple(engel_commutator(y, x, n)) == expected


@given(st.integers(1, 8).flatmap(perms))
def test_cycle_string_round_trip_and_order(p):
    from engel_forge.corpus import parse_cycles

    assert parse_cycles(p.cycle_string(), len(p)) == p
    assert p.order() == O.order_of(p) == element_order(p)
    assert p ** p.order() == Permutation.identity(len(p))


def test_permutation_validation():
    with pytest.raises(InvalidInputError):
        Permutation([0, 0, 1])
    with pytest.raises(InvalidInputError):
        Permutation([0, 1]) * Permutation([0, 1, 2])
    with pytest.raises(InvalidInputError):
        Permutation.from_cycles([(0, 3)], 3)
    assert Permutation.from_cycles([(0, 1, 2)], 4).cycle_string() == "(1,2,3)"
    assert Permutation.identity(3).cycle_string() == "()"


def test_commutator_convention_example():
    a = Permutation.from_cycles([(0, 1)], 3)
    b = Permutation.from_cycles([(1, 2)], 3)
    # [a, b] = a^-1 b^-1 a b with left-to-right composition
    assert commutator(a, b) == a.inverse() * b.inverse() * a * b
    assert commutator(a, b).order() == 3


# stabilizer chains

def test_symmetric_order():
    assert symmetric(8).group().order == 40320
    assert alternating(7).group().order == 2520


def test_membership_matches_closure(corpus):
    rng = random.Random(7)
    for gf in corpus.values():
        G = gf.group()
        if G.order > 10_000:
            continue
        elems = O.closure([tuple(s) for s in G.generators], gf.degree)
        assert len(elems) == G.order, gf.name
        assert set(G.element_list()) == elems
        for _ in range(40):
            x = tuple(rng.sample(range(gf.degree), gf.degree))
            assert G.contains(x) == (x in elems), gf.name


def test_random_generators_against_closure():
    rng = random.Random(3)
    for _ in range(40):
        d = rng.randint(2, 7)
        gens = [tuple(rng.sample(range(d), d)) for _ in range(rng.randint(1, 3))]
        G = PermGroup(d, gens)
        assert G.order == len(O.closure(gens, d))


def test_enumeration_threshold_is_enforced():
    G = symmetric(9).group()
    with pytest.raises(TooLargeError):
        list(G.elements(threshold=1000))


def test_subgroup_relations():
    S4 = symmetric(4).group()
    A4 = alternating(4).group()
    assert A4 <= S4 and A4 < S4 and not S4 <= A4
    assert A4 == PermGroup(4, [tuple(x) for x in A4.strong_generators])
    assert S4.extended([]) == S4


def test_random_element_is_member_and_deterministic():
    G = direct_product(alternating(5), symmetric(3)).group()
    xs = [G.random_element(random.Random(5)) for _ in range(2)]
    assert xs[0] == xs[1] and G.contains(xs[0])


# homomorphisms

def test_quotient_by_normal_subgroup():
    S4 = symmetric(4).group()
    V4 = PermGroup(4, [Permutation.from_cycles([(0, 1), (2, 3)], 4), Permutation.from_cycles([(0, 2), (1, 3)], 4)])
    hom = quotient(S4, V4)
    assert hom.image.order == 6 and hom.kernel == V4
    for x in S4.element_list():
        y = hom.preimage(hom(x))
        assert hom(y) == hom(x)
    assert hom.preimage_of(hom.image) == S4


def test_quotient_rejects_non_normal():
    S4 = symmetric(4).group()
    with pytest.raises(InvalidInputError):
        quotient(S4, PermGroup(4, [Permutation.from_cycles([(0, 1)], 4)]))


def test_coset_action_kernel_is_core():
    S4 = symmetric(4).group()
    H = PermGroup(4, [Permutation.from_cycles([(0, 1)], 4)])
    hom = coset_action(S4, H)
    assert hom.image.order * hom.kernel.order == 24
    assert hom.target_degree == 12 and hom.kernel.is_trivial()
    with pytest.raises(TooLargeError):
        coset_action(S4, H, threshold=5)


def test_orbits():
    G = direct_product(symmetric(3), symmetric(2)).group()
    assert sorted(map(sorted, orbits(G))) == [[0, 1, 2], [3, 4]]
