"""Deterministic sweeps of every applicable check over a corpus.

A sweep is planned as a list of tasks, each a small JSON-able dict naming the
check, group, element, ``n`` and extra parameters.  Tasks are grouped into
chunks that share a group (so per-group caches are reused), optionally run in
worker processes, and the reports are sorted by a canonical key.  A failing
report carries its task, its group file and the configuration, which is all
:func:`replay` needs to reproduce it.
"""

from __future__ import annotations

import json
import random
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable

from ..config import get_thresholds
from ..corpus import GroupFile, parse_cycles
from ..group import PermGroup
from ..perm import Permutation, _conj, _inv, _order
from ..subgroups import class_representatives, is_soluble
from .bounds import omega
from .checks import (FAIL, SKIPPED, VerificationReport, verify_abelian_by_cyclic_identity, verify_baer,
                     verify_coprime_facts, verify_fitting_bound, verify_full_commutator_cover,
                     verify_generalized_fitting_bound, verify_kernel_avoidance_bound, verify_nonsoluble_bound,
                     verify_prec_order, verify_subnormal_radicals, verify_wreath_generation)

BOUND_CHECKS = ("T1.1", "T1.2", "T1.3")


@dataclass(frozen=True)
class SuiteConfig:
    n_values: tuple[int, ...] = (1, 2, 3, 4, 5)
    seed: int = 0
    jobs: int = 1
    f1_offset: int = 0
    timings: bool = False
    all_elements_limit: int = 128
    sample_size: int = 6
    baer_n_max: int = 6
    identity_instances: int = 8
    checks: tuple[str, ...] | None = None

    def wants(self, check_id: str) -> bool:
        return self.checks is None or check_id in self.checks or check_id[:2] in self.checks

    def replay_fields(self) -> dict:
        return {"seed": self.seed, "f1_offset": self.f1_offset, "baer_n_max": self.baer_n_max}


@dataclass
class SuiteResult:
    reports: list[VerificationReport]
    config: SuiteConfig
    counts: dict = field(default_factory=dict)
    tightness: dict = field(default_factory=dict)

    @property
    def failures(self) -> list[VerificationReport]:
        return [r for r in self.reports if r.verdict == FAIL]

    def to_dict(self) -> dict:
        cfg = asdict(self.config)
        cfg.pop("jobs")
        cfg.pop("timings")
        return {
            "config": cfg,
            "summary": {"counts": self.counts, "tightness": self.tightness},
            "reports": [r.to_dict(self.config.timings) for r in self.reports],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


# planning


def _cycle(p) -> str:
    return Permutation._trusted(tuple(p)).cycle_string()


def _sweep_elements(G: PermGroup, gf: GroupFile, config: SuiteConfig) -> tuple[list[tuple], bool]:
    """Elements to test and whether they were sampled rather than exhaustive.

    Conjugacy class representatives suffice for every element check because
    the Engel subgroups of conjugate elements are conjugate and every series
    term is normal.
    """
    limit = get_thresholds().enumeration
    if "no-enumeration" not in gf.tags and G.order <= limit:
        if G.order <= config.all_elements_limit:
            return sorted(G._iter_tuples()), False
        return sorted(tuple(r) for r in class_representatives(G)), False
    rng = random.Random(f"{config.seed}:{gf.name}:elements")
    picked = {tuple(range(G.degree))} | {tuple(s) for s in G.generators}
    picked |= {tuple(G.random_element(rng)) for _ in range(config.sample_size)}
    return sorted(picked), True


def _task(check: str, group: str, element=None, n=None, **params) -> dict:
    return {"check": check, "group": group, "element": _cycle(element) if element is not None else None,
            "n": n, "params": params}


def _identity_instances(G: PermGroup, gf: GroupFile, count: int, seed: int) -> list[dict]:
    """Random ``(A, g, a, n)`` with ``A = <a^<g>>`` abelian."""
    rng = random.Random(f"{seed}:{gf.name}:identity")
    out = []
    tries = 0
    while len(out) < count and tries < 50 * count:
        tries += 1
        g = tuple(G.random_element(rng))
        a = tuple(G.random_element(rng))
        gi = _inv(g)
        orbit = [a]
        c = _conj(a, g, gi)
        while c != a and len(orbit) < 64:
            orbit.append(c)
            c = _conj(c, g, gi)
        A = PermGroup(G.degree, orbit)
        if not A.is_abelian():
            continue
        out.append(_task("L2.2", gf.name, g, rng.randint(1, 3), a=_cycle(a),
                         gens=[_cycle(x) for x in A.generators]))
    return out


def plan_tasks(corpus: Iterable[GroupFile], config: SuiteConfig) -> list[tuple[GroupFile, list[dict]]]:
    """Chunks of tasks, each chunk sharing one group."""
    chunks: list[tuple[GroupFile, list[dict]]] = []
    ns = tuple(config.n_values)
    for gf in corpus:
        G = gf.group()
        elements, sampled = _sweep_elements(G, gf, config)
        soluble = is_soluble(G)
        flag = {"sampled": True} if sampled else {}
        for n in ns:
            chunk = []
            for g in elements:
                if soluble and config.wants("T1.1"):
                    chunk.append(_task("T1.1", gf.name, g, n, **flag))
                if config.wants("T1.2"):
                    chunk.append(_task("T1.2", gf.name, g, n, **flag))
                if config.wants("T1.3"):
                    chunk.append(_task("T1.3", gf.name, g, n, **flag))
                if not soluble and config.wants("P4.1") and omega(_order(g)) > 1:
                    chunk.append(_task("P4.1", gf.name, g, n, s=1, **flag))
            if chunk:
                chunks.append((gf, chunk))
        misc = []
        if config.wants("BAER") and not sampled:
            misc += [_task("BAER", gf.name, g, config.baer_n_max) for g in elements]
        if config.wants("L2.1"):
            misc.append(_task("L2.1", gf.name, subgroup="whole"))
            misc += [_task("L2.1", gf.name, subgroup=name) for name in sorted(gf.named_subgroups)]
        if "alpha" in gf.named_elements and "normal" in gf.named_subgroups:
            alpha = gf.element("alpha")
            if config.wants("P3.1"):
                misc += [_task("P3.1", gf.name, alpha, n) for n in ns]
            if config.wants("COPRIME"):
                misc.append(_task("COPRIME", gf.name, alpha))
        if config.wants("L2.2") and not sampled and config.identity_instances > 0:
            misc += _identity_instances(G, gf, config.identity_instances, config.seed)
        if "simple" in gf.tags and (config.wants("L2.3") or config.wants("L2.4")):
            misc += [_task("WREATH", gf.name, None, n, r=r) for r in (2, 3) for n in ns]
        if misc:
            chunks.append((gf, misc))
    if config.wants("PREC"):
        chunks.append((None, [_task("PREC", "", limit=200)]))
    return chunks


# execution

_GROUPS: dict[str, PermGroup] = {}


def _group_for(gf: GroupFile) -> PermGroup:
    key = gf.dumps()
    G = _GROUPS.get(key)
    if G is None:
        G = gf.group()
        _GROUPS[key] = G
    return G


def run_task(task: dict, gf: GroupFile | None, cfg: dict) -> list[VerificationReport]:
    """Run one task; ``cfg`` holds ``seed``, ``f1_offset`` and ``baer_n_max``."""
    check, params, n = task["check"], task["params"], task["n"]
    seed = cfg["seed"]
    if check == "PREC":
        return [verify_prec_order(params["limit"], seed=seed)]
    G = _group_for(gf)
    label = gf.name
    g = parse_cycles(task["element"], gf.degree) if task["element"] is not None else None
    if check == "T1.1":
        reps = [verify_fitting_bound(G, g, n, label=label, seed=seed)]
    elif check == "T1.2":
        reps = [verify_generalized_fitting_bound(G, g, n, label=label, seed=seed)]
    elif check == "T1.3":
        reps = [verify_nonsoluble_bound(G, g, n, label=label, seed=seed, f1_offset=cfg["f1_offset"])]
    elif check == "P4.1":
        reps = [verify_kernel_avoidance_bound(G, g, n, params["s"], label=label, seed=seed)]
    elif check == "BAER":
        reps = [verify_baer(G, g, n, label=label, seed=seed)]
    elif check == "L2.1":
        name = params["subgroup"]
        N = G if name == "whole" else gf.subgroup(name)
        reps = [verify_subnormal_radicals(G, N, label=label, subgroup_label=name, seed=seed)]
    elif check == "P3.1":
        reps = [verify_full_commutator_cover(gf.subgroup("normal"), g, n, ambient=G, label=label, seed=seed)]
    elif check == "COPRIME":
        reps = [verify_coprime_facts(gf.subgroup("normal"), g, label=label, seed=seed)]
    elif check == "L2.2":
        A = PermGroup(gf.degree, [parse_cycles(x, gf.degree) for x in params["gens"]])
        a = parse_cycles(params["a"], gf.degree)
        reps = [verify_abelian_by_cyclic_identity(A, g, a, n, label=label, seed=seed)]
    elif check == "WREATH":
        reps = verify_wreath_generation(G, params["r"], n, label=label, seed=seed)
    else:
        raise ValueError(f"unknown check {check!r}")
    for rep in reps:
        if "sampled" in params and rep.verdict != SKIPPED:
            rep.mode = "probabilistic"
        if rep.verdict == FAIL:
            rep.witness = {"task": task, "group_file": gf.to_dict() if gf else None, "config": dict(cfg)}
    return reps


def _run_chunk(args) -> list[dict]:
    gf_dict, tasks, cfg, timings = args
    gf = GroupFile.from_dict(gf_dict) if gf_dict is not None else None
    out = []
    for task in tasks:
        out += [r.to_dict(timings) for r in run_task(task, gf, cfg)]
    return out


def _from_dict(d: dict) -> VerificationReport:
    verdict, reason = d["verdict"], None
    if verdict.startswith("skipped("):
        verdict, reason = SKIPPED, verdict[len("skipped("):-1]
    computed = {k: v for k, v in d["computed"].items()}
    return VerificationReport(d["check_id"], d["group"], d["element"], d["n"], computed, verdict, reason,
                              d["mode"], d["seed"], d["runtime_ms"], d.get("witness"))


def _summarize(reports: list[VerificationReport]) -> tuple[dict, dict]:
    counts: dict = defaultdict(Counter)
    tight: dict = defaultdict(Counter)
    for r in reports:
        counts[r.check_id][r.verdict] += 1
        if r.verdict == SKIPPED:
            counts[r.check_id][f"skipped:{r.reason}"] += 1
        if r.check_id in BOUND_CHECKS and r.verdict != SKIPPED:
            slack = r.computed["bound"] - r.computed["min_index"] if r.computed.get("min_index") is not None else None
            tight[r.check_id][str(slack)] += 1
    counts_out = {k: dict(sorted(v.items())) for k, v in sorted(counts.items())}
    tight_out = {k: dict(sorted(v.items(), key=lambda kv: (len(kv[0]), kv[0]))) for k, v in sorted(tight.items())}
    return counts_out, tight_out


def run_suite(corpus: Iterable[GroupFile], config: SuiteConfig | None = None) -> SuiteResult:
    """Plan, run and canonically order every applicable check over ``corpus``."""
    config = config or SuiteConfig()
    corpus = list(corpus)
    chunks = plan_tasks(corpus, config)
    cfg = config.replay_fields()
    jobs_args = [(gf.to_dict() if gf else None, tasks, cfg, config.timings) for gf, tasks in chunks]
    if config.jobs > 1 and len(jobs_args) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(_run_chunk, jobs_args))
    else:
        results = [_run_chunk(a) for a in jobs_args]
    reports = [_from_dict(d) for chunk in results for d in chunk]
    reports.sort(key=lambda r: (r.sort_key(), json.dumps(r.to_dict(), sort_keys=True)))
    counts, tight = _summarize(reports)
    return SuiteResult(reports, config, counts, tight)


def replay(witness: dict) -> list[VerificationReport]:
    """Re-run the task recorded in a failing report's witness."""
    gf = GroupFile.from_dict(witness["group_file"]) if witness.get("group_file") else None
    return run_task(witness["task"], gf, witness["config"])
