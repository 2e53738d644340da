from __future__ import annotations

import itertools
import math
import random

import pytest
from hypothesis import assume, given, settings, strategies as st

from engel_forge import InvalidInputError, Permutation, PermGroup
from engel_forge.corpus import affine, alternating, find_group, parse_cycles, semidirect_power_map, symmetric
from engel_forge.verify import (SuiteConfig, bound_f, bound_f1, exponent_vector, factorize, omega,
                                prec_compare, replay, run_suite, verify_abelian_by_cyclic_identity,
                                verify_baer, verify_coprime_facts, verify_fitting_bound,
                                verify_full_commutator_cover, verify_generalized_fitting_bound,
                                verify_kernel_avoidance_bound, verify_nonsoluble_bound, verify_prec_order,
                                verify_subnormal_radicals, verify_wreath_generation)

# bounds and the exponent order


def test_bound_formulas():
    assert bound_f(1, 1) == 12
    assert bound_f1(1, 2) == 6
    for k in range(6):
        assert bound_f1(k, 0) == 0
        for m in range(6):
            assert bound_f(k, m) == ((k + 1) * m * (m + 1) + 2) * (k + 3) // 2
            assert bound_f1(k, m) == (k + 1) * m * (m + 1) // 2
    with pytest.raises(InvalidInputError):
        bound_f(-1, 0)


def test_factorize_and_omega():
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert omega(1) == 0 and omega(360) == 6 and omega(7) == 1
    for n in range(1, 300):
        assert math.prod(p ** e for p, e in factorize(n).items()) == n


def test_prec_examples():
    assert prec_compare(6, 12) == "less"
    assert prec_compare(18, 12) == "less"
    assert prec_compare(12, 18) == "greater"
    assert prec_compare(5, 5) == "equal"
    assert exponent_vector(18, [2, 3, 5]) == [1, 2, 0]
    with pytest.raises(InvalidInputError):
        prec_compare(0, 3)


def _reference_prec(a, b):
    primes = sorted(set(factorize(a)) | set(factorize(b)))
    va = [factorize(a).get(p, 0) for p in primes]
    vb = [factorize(b).get(p, 0) for p in primes]
    return "less" if va < vb else "greater" if va > vb else "equal"


@given(st.integers(1, 5000), st.integers(1, 5000), st.integers(1, 5000))
def test_prec_is_strict_order(a, b, c):
    assert prec_compare(a, b) == _reference_prec(a, b)
    assert prec_compare(a, a) == "equal"
    if prec_compare(a, b) == "less" and prec_compare(b, c) == "less":
        assert prec_compare(a, c) == "less"
    if prec_compare(a, b) == "less":
        assert prec_compare(b, a) == "greater"
    if b % a == 0 and a != b:
        assert prec_compare(a, b) == "less"


def test_prec_check_passes():
    assert verify_prec_order(200, 500).verdict == "pass"


# individual checks


def test_fitting_bound_examples(group):
    _, S3 = group("s3")
    rep = verify_fitting_bound(S3, parse_cycles("(1,2)", 3), 1)
    assert rep.verdict == "pass" and rep.computed["k"] == 1 and rep.computed["min_index"] == 2
    rep = verify_fitting_bound(S3, Permutation.identity(3), 1)
    assert rep.verdict == "pass" and rep.computed["k"] == 0
    _, S4 = group("s4")
    reps = [verify_fitting_bound(S4, g, n) for g in S4.element_list() for n in (1, 2, 3)]
    assert len(reps) == 72 and all(r.verdict == "pass" for r in reps)
    _, S5 = group("s5")
    assert verify_fitting_bound(S5, Permutation.identity(5), 1).verdict_text == "skipped(not-soluble)"


def test_nonsoluble_bound_examples(group):
    _, S5 = group("s5")
    rep = verify_nonsoluble_bound(S5, parse_cycles("(1,2)", 5), 1)
    assert rep.verdict == "pass" and rep.computed["k"] in (0, 1) and rep.computed["bound"] in (1, 2)
    _, S4 = group("s4")
    for g in S4.element_list():
        rep = verify_nonsoluble_bound(S4, g, 2)
        assert rep.verdict == "pass" and rep.computed["k"] == 0 and rep.computed["min_index"] == 0


def test_mutated_bound_fails_on_identity(group):
    _, S5 = group("s5")
    rep = verify_nonsoluble_bound(S5, Permutation.identity(5), 1, f1_offset=-1)
    assert rep.verdict == "fail" and rep.computed["bound"] == -1


def test_generalized_fitting_examples(group):
    for name in ("s5", "sl2_5", "a5xa5"):
        _, G = group(name)
        for g in G.element_list()[::11]:
            assert verify_generalized_fitting_bound(G, g, 1).verdict == "pass"


def test_probabilistic_skip(group):
    _, G = group("a5wra5")
    rep = verify_generalized_fitting_bound(G, G.generators[0], 2)
    assert rep.verdict_text == "skipped(probabilistic)"


def test_baer_examples(group):
    _, S4 = group("s4")
    assert verify_baer(S4, parse_cycles("(1,2)(3,4)", 4)).computed["in_fitting"] == 1
    rep = verify_baer(S4, parse_cycles("(1,2)", 4))
    assert rep.verdict == "pass" and rep.computed["left_engel"] == 0


def test_full_commutator_cover(group):
    for name in ("c7sdc3", "c3sq_sdc4"):
        gf, G = group(name)
        N, alpha = gf.subgroup("normal"), gf.element("alpha")
        for n in (1, 2, 3):
            rep = verify_full_commutator_cover(N, alpha, n, ambient=G)
            assert rep.verdict == "pass", rep
    S4 = symmetric(4).group()
    rep = verify_full_commutator_cover(S4, Permutation.identity(4), 1)
    assert rep.verdict_text == "skipped(hypothesis-fails)"


def test_kernel_avoidance_prerequisites(group):
    _, S5 = group("s5")
    rep = verify_kernel_avoidance_bound(S5, parse_cycles("(1,2,3)(4,5)", 5), 1, 1)
    # K_2 does not exist in S5, and <g> meets K_1 = S5
    assert rep.verdict == "skipped"
    rep = verify_kernel_avoidance_bound(S5, parse_cycles("(1,2)", 5), 1, 1)
    assert rep.verdict_text == "skipped(hypothesis-fails)"


def test_subnormal_radicals(group):
    for name, sub in (("s4", "v4"), ("s4", "a4"), ("s4", "c2_in_v4"), ("s5", "a5"), ("a5xa5", "factor1")):
        gf, G = group(name)
        rep = verify_subnormal_radicals(G, gf.subgroup(sub))
        assert rep.verdict == "pass", rep
    _, S4 = group("s4")
    rep = verify_subnormal_radicals(S4, PermGroup(4, [parse_cycles("(1,2)", 4)]))
    assert rep.verdict_text == "skipped(not-subnormal)"


def test_wreath_generation():
    A5 = alternating(5).group()
    for r in (2, 3):
        for n in (1, 2):
            reps = verify_wreath_generation(A5, r, n)
            assert [rep.check_id for rep in reps] == ["L2.3", "L2.4"]
            assert all(rep.verdict == "pass" for rep in reps), reps
    assert all(rep.verdict_text == "skipped(degenerate)" for rep in verify_wreath_generation(A5, 1, 1))


# randomized identity and coprime instances


def _units(n):
    return [u for u in range(1, n) if math.gcd(u, n) == 1]


def _invertible(p):
    out = []
    for a, b, c, d in itertools.product(range(p), repeat=4):
        if (a * d - b * c) % p:
            out.append([[a, b], [c, d]])
    return out


@st.composite
def abelian_instances(draw):
    if draw(st.booleans()):
        n = draw(st.integers(3, 19))
        c = semidirect_power_map(n, multiplier=draw(st.sampled_from(_units(n))))
    else:
        p = draw(st.sampled_from([2, 3]))
        c = affine(p, draw(st.sampled_from(_invertible(p))))
    G, A = c.group(), c.subgroup("normal")
    rng = random.Random(draw(st.integers(0, 2 ** 32)))
    return A, G.random_element(rng), A.random_element(rng), draw(st.integers(1, 3))


@settings(max_examples=150)
@given(abelian_instances())
def test_abelian_by_cyclic_identity(instance):
    A, g, a, n = instance
    assert verify_abelian_by_cyclic_identity(A, g, a, n).verdict == "pass"


@st.composite
def coprime_instances(draw):
    if draw(st.booleans()):
        n = draw(st.integers(3, 40))
        units = [u for u in _units(n) if math.gcd(_mult_order(u, n), n) == 1]
        c = semidirect_power_map(n, multiplier=draw(st.sampled_from(units)))
    else:
        p = draw(st.sampled_from([2, 3, 5]))
        m = draw(st.sampled_from([[[0, p - 1], [1, 0]], [[0, 1], [1, 1]], [[1, 0], [0, 1]], [[p - 1, 0], [0, p - 1]]]))
        c = affine(p, m)
    return c.subgroup("normal"), c.elements["alpha"]


def _mult_order(u, n):
    k, x = 1, u % n
    while x != 1:
        x, k = x * u % n, k + 1
    return k


@settings(max_examples=40)
@given(coprime_instances())
def test_coprime_facts(instance):
    G, alpha = instance
    rep = verify_coprime_facts(G, alpha)
    assume(rep.verdict != "skipped")
    assert rep.verdict == "pass", rep


def test_coprime_skip_reasons():
    c = semidirect_power_map(9, multiplier=4)
    assert verify_coprime_facts(c.subgroup("normal"), c.elements["alpha"]).verdict_text == "skipped(not-coprime)"


# suite


SMALL = ["s3", "s4", "c7sdc3", "a5"]


def _small_corpus():
    return [find_group(name) for name in SMALL]


def test_suite_determinism_and_jobs():
    cfg = SuiteConfig(n_values=(1, 2), seed=42)
    a = run_suite(_small_corpus(), cfg).dumps()
    b = run_suite(_small_corpus(), cfg).dumps()
    c = run_suite(_small_corpus(), SuiteConfig(n_values=(1, 2), seed=42, jobs=2)).dumps()
    assert a == b == c


def test_suite_counts_and_tightness():
    res = run_suite(_small_corpus(), SuiteConfig(n_values=(1,), seed=0))
    assert not res.failures
    assert "T1.1" in res.counts and "T1.3" in res.tightness
    doc = res.to_dict()
    assert set(doc) == {"config", "summary", "reports"}
    for rep in doc["reports"]:
        assert {"check_id", "group", "element", "n", "computed", "verdict", "mode", "seed", "runtime_ms"} <= set(rep)
        assert rep["runtime_ms"] is None


def test_mutation_and_replay():
    res = run_suite(_small_corpus(), SuiteConfig(n_values=(1,), seed=3, f1_offset=-1, checks=("T1.3",)))
    assert res.failures
    for rep in res.failures:
        again = replay(rep.witness)
        assert [r.to_dict() for r in again] == [rep.to_dict()]


def test_check_filter():
    res = run_suite(_small_corpus(), SuiteConfig(n_values=(1,), checks=("BAER",)))
    assert set(res.counts) == {"BAER"}


def test_identity_check_rejects_bad_input():
    A3 = alternating(3).group()
    with pytest.raises(InvalidInputError):
        verify_abelian_by_cyclic_identity(A3, parse_cycles("(1,2)", 3), parse_cycles("(1,2,3)", 3), 0)
    with pytest.raises(InvalidInputError):
        verify_abelian_by_cyclic_identity(symmetric(3).group(), Permutation.identity(3),
                                          parse_cycles("(1,2)", 3), 1)


def test_element_sweep_covers_all_small(group):
    gf, _ = group("s4")
    res = run_suite([gf], SuiteConfig(n_values=(1, 2, 3), checks=("T1.1",)))
    assert res.counts["T1.1"]["pass"] == 72
    assert list(itertools.islice(res.reports, 1))[0].check_id == "T1.1"
