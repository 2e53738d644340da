"""Acceptance criteria, each run at its stated tolerance and time limit.

Every test records a one-line verdict; the lines are printed together at the
end of the pytest run (and directly when this file is executed as a script).
"""

from __future__ import annotations

import io
import json
import math
import random
import time
from collections import Counter

import _oracles as O
from engel_forge.cli import main as cli_main
from engel_forge.corpus import affine, alternating, find_group, load_corpus, semidirect_power_map, symmetric
from engel_forge.group import quotient
from engel_forge.structure import (components_and_layer, fitting_height, fitting_series, fitting_subgroup,
                                   generalized_fitting_height, is_simple, nonsoluble_series,
                                   simple_factor_decomposition)
from engel_forge.subgroups import class_representatives, is_normal, is_soluble
from engel_forge.verify import (SuiteConfig, replay, run_suite, verify_abelian_by_cyclic_identity, verify_baer,
                                verify_coprime_facts, verify_fitting_bound, verify_full_commutator_cover,
                                verify_generalized_fitting_bound, verify_nonsoluble_bound,
                                verify_subnormal_radicals, verify_wreath_generation)

RESULTS: list[str] = []


def record(number: int, title: str, ok: bool, elapsed: float, limit: float | None, detail: str = "") -> None:
    timed_ok = limit is None or elapsed < limit
    verdict = "PASS" if ok and timed_ok else "FAIL"
    budget = f" (limit {limit:.0f}s)" if limit is not None else ""
    line = f"criterion {number:>2} {verdict}: {title}; {elapsed:.1f}s{budget}"
    if detail:
        line += f"; {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line
    assert timed_ok, line


def test_criterion_01_kernel():
    t0 = time.perf_counter()
    ok = symmetric(8).group().order == 40320
    checked = 0
    rng = random.Random(1)
    for gf in load_corpus():
        G = gf.group()
        if G.order > 10_000:
            continue
        elems = O.closure([tuple(s) for s in G.generators], gf.degree)
        ok &= len(elems) == G.order and all(G.contains(x) for x in elems)
        for _ in range(200):
            x = tuple(rng.sample(range(gf.degree), gf.degree))
            ok &= G.contains(x) == (x in elems)
        checked += 1
    record(1, "stabilizer chain order and membership vs exhaustive closure", ok,
           time.perf_counter() - t0, 30, f"{checked} groups")


def test_criterion_02_structure():
    t0 = time.perf_counter()
    problems = []
    slowest = 0.0

    def timed(label, fn):
        nonlocal slowest
        s = time.perf_counter()
        if not fn():
            problems.append(label)
        slowest = max(slowest, time.perf_counter() - s)

    S4 = find_group("s4").group()
    timed("F(S4)", lambda: fitting_series(S4).orders() == [1, 4, 12, 24] and fitting_height(S4) == 3
          and fitting_series(S4).terms[1][1] == find_group("s4").subgroup("v4")
          and fitting_series(S4).terms[2][1] == find_group("s4").subgroup("a4"))
    S3 = find_group("s3")
    timed("F(S3)", lambda: fitting_subgroup(S3.group()) == S3.subgroup("a3"))
    SL = find_group("sl2_5").group()
    timed("h*(SL(2,5))", lambda: generalized_fitting_height(SL) == 1
          and [Q for Q in components_and_layer(SL).components] == [SL])
    S5 = find_group("s5").group()
    timed("h*(S5)", lambda: generalized_fitting_height(S5) == 2)
    timed("lambda(S5)", lambda: nonsoluble_series(S5).height_or_length == 1)

    def wreath_lambda():
        gf = find_group("a5wra5")
        G, base = gf.group(), gf.subgroup("base")
        rec = nonsoluble_series(G)
        dec = simple_factor_decomposition(G, 1)
        top = quotient(G, base).image
        certified = (is_normal(base, G) and rec.B(1) == base and rec.D(1) == base
                     and len(dec.factors) == 5 and all(is_simple(T) for T in dec.factors)
                     and top.order == 60 and is_simple(top) and rec.term(2) == G)
        return rec.height_or_length == 2 and certified

    timed("lambda(A5 wr A5)", wreath_lambda)
    record(2, "structure exactness on named groups", not problems and slowest < 10,
           time.perf_counter() - t0, None, f"slowest check {slowest:.1f}s (limit 10s each)"
           + (f"; wrong: {problems}" if problems else ""))


def test_criterion_03_soluble_sweep():
    t0 = time.perf_counter()
    counts = Counter()
    for gf in load_corpus():
        G = gf.group()
        if not is_soluble(G):
            continue
        for g in G.element_list():
            for n in (1, 2, 3):
                counts["T1.1:" + verify_fitting_bound(G, g, n, label=gf.name).verdict] += 1
            counts["BAER:" + verify_baer(G, g, 6, label=gf.name).verdict] += 1
    ok = counts["T1.1:fail"] == 0 and counts["BAER:fail"] == 0 and not any(k.endswith("skipped") for k in counts)
    record(3, "fitting-height bound and Baer check on every soluble corpus group", ok,
           time.perf_counter() - t0, 120, ", ".join(f"{k} {v}" for k, v in sorted(counts.items())))


def test_criterion_04_nonsoluble_sweep():
    t0 = time.perf_counter()
    counts = Counter()
    slack = {"T1.2": Counter(), "T1.3": Counter()}
    for name in ("s5", "a5xa5", "a5wrc2", "sl2_5", "s4xa5"):
        G = find_group(name).group()
        elements = G.element_list() if G.order <= 128 else [tuple(r) for r in class_representatives(G)]
        for g in elements:
            for n in (1, 2):
                for rep in (verify_generalized_fitting_bound(G, g, n, label=name),
                            verify_nonsoluble_bound(G, g, n, label=name)):
                    counts[f"{rep.check_id}:{rep.verdict}"] += 1
                    if rep.verdict != "skipped":
                        slack[rep.check_id][rep.computed["bound"] - rep.computed["min_index"]] += 1
    ok = not any(k.endswith(("fail", "skipped")) for k in counts)
    hist = "; ".join(f"{cid} slack histogram {dict(sorted(h.items()))}" for cid, h in slack.items())
    record(4, "generalized Fitting and nonsoluble bounds on the nonsoluble groups", ok,
           time.perf_counter() - t0, 180, ", ".join(f"{k} {v}" for k, v in sorted(counts.items())) + "; " + hist)


def test_criterion_05_wreath():
    t0 = time.perf_counter()
    A5 = alternating(5).group()
    verdicts = Counter()
    orders = []
    for r in (2, 3):
        for n in (1, 2):
            for rep in verify_wreath_generation(A5, r, n):
                verdicts[rep.verdict] += 1
                if rep.check_id == "L2.4":
                    orders.append(rep.computed.get("r_order"))
    ok = verdicts == Counter({"pass": 8}) and orders == [3600, 3600, 216000, 216000]
    record(5, "coordinate values and Engel subgroup of the cycling automorphism equal S^r for A5", ok,
           time.perf_counter() - t0, None, f"{dict(verdicts)}, Engel subgroup orders {orders}")


def test_criterion_06_full_commutator():
    t0 = time.perf_counter()
    verdicts = Counter()
    for name in ("c7sdc3", "c3sq_sdc4"):
        gf = find_group(name)
        G, N, alpha = gf.group(), gf.subgroup("normal"), gf.element("alpha")
        for n in (1, 2, 3):
            verdicts[verify_full_commutator_cover(N, alpha, n, ambient=G, label=name).verdict] += 1
    c7 = semidirect_power_map(7, alpha_order=3)
    ok = verdicts == Counter({"pass": 6}) and c7.elements["alpha"].order() == 3
    record(6, "R_{G<alpha>,n}(alpha) = G when [G, alpha] = G", ok, time.perf_counter() - t0, 5, str(dict(verdicts)))


def test_criterion_07_subnormal():
    t0 = time.perf_counter()
    verdicts = Counter()
    for gf in load_corpus():
        G = gf.group()
        for name in ["whole"] + sorted(gf.named_subgroups):
            N = G if name == "whole" else gf.subgroup(name)
            verdicts[verify_subnormal_radicals(G, N, label=gf.name, subgroup_label=name).verdict] += 1
    ok = verdicts["fail"] == 0 and verdicts["pass"] >= 10
    record(7, "series of subnormal subgroups are intersections with the ambient series", ok,
           time.perf_counter() - t0, None, str(dict(verdicts)))


def _units(n):
    return [u for u in range(1, n) if math.gcd(u, n) == 1]


def test_criterion_08_identities():
    t0 = time.perf_counter()
    rng = random.Random(8)
    identity = Counter()
    while sum(identity.values()) < 120:
        if rng.random() < 0.5:
            n = rng.randint(3, 19)
            c = semidirect_power_map(n, multiplier=rng.choice(_units(n)))
        else:
            p = rng.choice([2, 3])
            while True:
                m = [[rng.randrange(p) for _ in range(2)] for _ in range(2)]
                if (m[0][0] * m[1][1] - m[0][1] * m[1][0]) % p:
                    break
            c = affine(p, m)
        G, A = c.group(), c.subgroup("normal")
        rep = verify_abelian_by_cyclic_identity(A, G.random_element(rng), A.random_element(rng), rng.randint(1, 3))
        identity[rep.verdict] += 1
    coprime = Counter()
    n = 3
    while coprime["pass"] + coprime["fail"] < 24:
        n += 1
        for u in _units(n):
            c = semidirect_power_map(n, multiplier=u)
            rep = verify_coprime_facts(c.subgroup("normal"), c.elements["alpha"])
            coprime[rep.verdict] += 1
    ok = identity == Counter({"pass": 120}) and coprime["fail"] == 0 and coprime["pass"] >= 20
    record(8, "abelian-by-cyclic identity and coprime action facts on random instances", ok,
           time.perf_counter() - t0, None, f"identity {dict(identity)}, coprime {dict(coprime)}")


def _cli(*argv):
    out = io.StringIO()
    return cli_main(list(argv), out), out.getvalue()


def test_criterion_09_and_10_harness(tmp_path):
    from engel_forge.verify import suite

    # full default suite from a cold cache, then again with two workers
    suite._GROUPS.clear()
    timings, blobs, codes = {}, {}, {}
    for jobs in ("1", "2"):
        path = tmp_path / f"jobs{jobs}.json"
        s = time.perf_counter()
        codes[jobs], _ = _cli("verify", "--seed", "42", "--jobs", jobs, "--output", str(path))
        timings[jobs] = time.perf_counter() - s
        blobs[jobs] = path.read_bytes()
    summary = json.loads(blobs["1"])["summary"]
    fail_count = sum(c.get("fail", 0) for c in summary["counts"].values())
    # mutation self-test and witness replay
    t0 = time.perf_counter()
    mutated = run_suite(load_corpus(), SuiteConfig(n_values=(1, 2), f1_offset=-1, checks=("T1.3",)))
    fails = mutated.failures
    replay_ok = all(json.dumps([r.to_dict() for r in replay(rep.witness)], sort_keys=True)
                    == json.dumps([rep.to_dict()], sort_keys=True) for rep in fails)
    identical = blobs["1"] == blobs["2"]
    try:
        record(9, "mutation produces fails, witnesses replay, output independent of --jobs",
               len(fails) >= 1 and replay_ok and identical, time.perf_counter() - t0, None,
               f"{len(fails)} mutation fails, replay identical {replay_ok}, jobs 1 vs 2 identical {identical}")
    finally:
        record(10, "full default suite wall-clock (cold caches, one worker)", codes["1"] == 0 and fail_count == 0,
               timings["1"], 300, f"{fail_count} fails; two-worker rerun {timings['2']:.1f}s")


if __name__ == "__main__":
    import sys

    import pytest

    code = pytest.main([__file__, "-q"])
    print("\n".join(RESULTS))
    sys.exit(code)
