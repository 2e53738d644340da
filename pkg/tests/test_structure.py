from __future__ import annotations

from functools import reduce

import pytest

import _oracles as O
from engel_forge import InvalidInputError, NotSolubleError, Permutation, PermGroup
from engel_forge.structure import (components_and_layer, fitting_height, fitting_series, fitting_subgroup,
                                   generalized_fitting_height, generalized_fitting_series, is_quasisimple,
                                   is_simple, minimal_normal_subgroups, nonsoluble_length, nonsoluble_series,
                                   orbit_purity, p_core, simple_factor_decomposition, socle, soluble_radical)
from engel_forge.subgroups import is_normal, normal_closure, prime_factors

ORACLE_GROUPS = ["s3", "s4", "a4", "d8", "sl2_3", "c7sdc3", "c5sdc4", "c3wrc3", "s3wrc2", "c3sq_sdc4",
                 "c15_inv", "c3sq_inv1", "a5", "s5", "sl2_5"]


def elems(G):
    return frozenset(G.element_list())


@pytest.fixture(scope="module")
def lattice(group):
    cache = {}

    def get(name):
        if name not in cache:
            _, G = group(name)
            E = elems(G)
            cache[name] = (G, E, O.normal_subgroups(E))
        return cache[name]

    return get


@pytest.mark.parametrize("name", ORACLE_GROUPS)
def test_cores_and_minimal_normal(name, lattice):
    G, E, normals = lattice(name)
    assert elems(fitting_subgroup(G)) == O.fitting(E, normals)
    assert elems(soluble_radical(G)) == O.radical(E, normals)
    for p in prime_factors(G.order):
        assert elems(p_core(G, p)) == O.p_core(E, p, normals)
    mins, mode = minimal_normal_subgroups(G)
    assert mode == "exact"
    assert sorted(map(elems, mins), key=sorted) == sorted(O.minimal_normal(E, normals), key=sorted)
    expected_socle = reduce(O.join, O.minimal_normal(E, normals))
    assert elems(socle(G)) == expected_socle


@pytest.mark.parametrize("name", ORACLE_GROUPS)
def test_fitting_series_oracle(name, lattice):
    G, E, normals = lattice(name)
    rec = fitting_series(G)
    expected = O.fitting_series(E)
    assert [elems(H) for _, H in rec.terms] == expected
    if len(expected[-1]) == len(E):
        assert fitting_height(G) == len(expected) - 1
    else:
        with pytest.raises(NotSolubleError):
            fitting_height(G)


@pytest.mark.parametrize("name", ORACLE_GROUPS)
def test_nonsoluble_series_oracle(name, lattice):
    G, E, normals = lattice(name)
    rec = nonsoluble_series(G)
    D = O.radical(E, normals)
    expected = [1, len(D)]
    i = 0
    while len(D) < len(E):
        over = [N for N in normals if D < N]
        mins = [N for N in over if not any(M < N for M in over)]
        B = reduce(O.join, mins)
        D = O.largest_over(E, B, O.soluble_mod, normals)
        expected += [len(B), len(D)]
        i += 1
    assert rec.orders() == expected
    assert nonsoluble_length(G) == i


@pytest.mark.parametrize("name", ORACLE_GROUPS)
def test_generalized_fitting_properties(name, lattice):
    G, E, _ = lattice(name)
    rec = generalized_fitting_series(G)
    Fstar = rec.terms[1][1]
    assert is_normal(Fstar, G)
    assert fitting_subgroup(G) <= Fstar
    # F*(G) contains its centralizer
    assert O.centralizer(E, elems(Fstar)) <= elems(Fstar)
    if fitting_series(G).stabilized_at_G:
        assert rec.orders() == fitting_series(G).orders()
    orders = rec.orders()
    assert orders == sorted(orders) and len(set(orders)) == len(orders)


def test_known_values(group):
    _, S4 = group("s4")
    assert fitting_series(S4).orders() == [1, 4, 12, 24]
    assert fitting_height(S4) == 3
    _, S3 = group("s3")
    assert fitting_subgroup(S3).order == 3
    _, SL = group("sl2_5")
    assert generalized_fitting_height(SL) == 1
    layer = components_and_layer(SL)
    assert [Q.order for Q in layer.components] == [120] and layer.layer == SL
    _, S5 = group("s5")
    assert generalized_fitting_height(S5) == 2
    assert nonsoluble_length(S5) == 1


def test_components(group):
    _, G = group("a5xc6")
    layer = components_and_layer(G)
    assert [Q.order for Q in layer.components] == [60]
    assert is_simple(layer.components[0])
    _, G = group("a5xa5")
    assert sorted(Q.order for Q in components_and_layer(G).components) == [60, 60]
    _, G = group("s4")
    assert not components_and_layer(G).components


def test_simplicity_predicates(group):
    assert is_simple(group("a5")[1])
    assert not is_simple(group("s5")[1])
    assert is_quasisimple(group("sl2_5")[1])
    assert not is_quasisimple(group("s5")[1])
    assert not is_simple(group("c7sdc3")[1])


def test_series_tail_and_index(group):
    _, S5 = group("s5")
    rec = nonsoluble_series(S5)
    assert rec.labels() == ["B0", "D0", "B1", "D1"]
    assert rec.term(7) == S5
    assert rec.B(1).order == 60 and rec.D(0).is_trivial()
    t = Permutation.from_cycles([(0, 1)], 5)
    assert rec.min_index(t) == 1
    with pytest.raises(InvalidInputError):
        fitting_series(S5).D(0)


def test_large_wreath_structure(group):
    gf, G = group("a5wra5")
    assert nonsoluble_length(G) == 2
    base = gf.subgroup("base")
    assert is_normal(base, G)
    dec = simple_factor_decomposition(G, 1)
    assert len(dec.factors) == 5 and dec.kernel == base


def test_small_decompositions(group):
    _, S5 = group("s5")
    dec = simple_factor_decomposition(S5, 1)
    assert len(dec.factors) == 1 and dec.kernel == S5 and dec.kernel_within_radical
    gf, W = group("a5wrc2")
    dec = simple_factor_decomposition(W, 1)
    assert len(dec.factors) == 2 and dec.kernel == gf.subgroup("base")
    with pytest.raises(InvalidInputError):
        simple_factor_decomposition(W, 2)


def test_orbit_purity(group):
    gf, W = group("a5wrc2")
    dec = simple_factor_decomposition(W, 1)
    phi = gf.element("phi")
    assert dec.orbit_lengths(phi) == [2]
    assert orbit_purity(dec, phi, (0, 1))
    # phi times an involution in one coordinate squares to a nontrivial base element
    d = Permutation.from_cycles([(0, 1), (2, 3)], W.degree)
    twisted = d * phi
    assert dec.orbit_lengths(twisted) == [2]
    assert not orbit_purity(dec, twisted, (0, 1))
    with pytest.raises(InvalidInputError):
        orbit_purity(dec, phi, (0,))


def test_normal_closure_matches_lattice(lattice):
    G, E, normals = lattice("s4")
    for x in sorted(E)[:6]:
        assert elems(normal_closure(G, [x])) in normals


def test_trivial_group():
    T = PermGroup(3)
    assert fitting_series(T).orders() == [1] and fitting_height(T) == 0
    assert nonsoluble_length(T) == 0 and generalized_fitting_height(T) == 0
