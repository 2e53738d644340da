"""Pass/fail checks of the Engel-word bounds on series lengths and the facts they rest on.

Every check returns a :class:`VerificationReport`.  Skips are explicit, with
a reason.  Series indices past the last computed term refer to the stabilized
top term, and an index bound is met when the least index of a term containing
``g`` does not exceed it.
"""

from __future__ import annotations

import functools
import math
import random
import time
from dataclasses import dataclass, field, replace
from typing import Sequence

from ..config import get_thresholds
from ..engel import (EXACT, PROBABILISTIC, abelian_cyclic_identity_check, is_left_engel,
                     right_engel_subgroup)
from ..errors import TooLargeError
from ..group import PermGroup
from ..perm import Permutation, _comm, _conj, _engel_right, _inv, _mul, _order, _pow
from ..structure import (combine_modes, fitting_series, fitting_subgroup, generalized_fitting_series,
                         nonsoluble_series, simple_factor_decomposition)
from ..subgroups import (commutator_with_element, intersection, is_soluble, is_subnormal,
                         normal_closure, prime_factors)
from .bounds import EQUAL, GREATER, LESS, bound_f, bound_f1, omega, prec_compare

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"


@dataclass
class VerificationReport:
    check_id: str
    group: str
    element: str | None = None
    n: int | None = None
    computed: dict = field(default_factory=dict)
    verdict: str = PASS
    reason: str | None = None
    mode: str = EXACT
    seed: int | None = None
    runtime_ms: float | None = None
    witness: dict | None = None

    @property
    def verdict_text(self) -> str:
        if self.verdict == SKIPPED:
            return f"skipped({self.reason})"
        return self.verdict

    def to_dict(self, timings: bool = False) -> dict:
        computed = {"k": None, "m": None, "bound": None, "min_index": None}
        computed.update(self.computed)
        out = {
            "check_id": self.check_id,
            "group": self.group,
            "element": self.element,
            "n": self.n,
            "computed": computed,
            "verdict": self.verdict_text,
            "mode": self.mode,
            "seed": self.seed,
            "runtime_ms": round(self.runtime_ms, 3) if timings and self.runtime_ms is not None else None,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        return out

    def sort_key(self) -> tuple:
        return (self.check_id, self.group, self.element or "", self.n if self.n is not None else -1,
                repr(sorted(self.computed.items(), key=lambda kv: kv[0])))


def _report(check_id: str, label: str, g, n, seed, **kw) -> VerificationReport:
    element = Permutation._trusted(tuple(g)).cycle_string() if g is not None else None
    return VerificationReport(check_id, label, element, n, seed=seed, **kw)


def _timed(check_id: str):
    """Record the runtime and turn threshold overflows into skips."""

    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            t0 = time.perf_counter()
            try:
                rep = fn(*args, **kwargs)
            except TooLargeError:
                rep = VerificationReport(check_id, kwargs.get("label", "G"), verdict=SKIPPED,
                                         reason="too-large", seed=kwargs.get("seed", 0))
            rep.runtime_ms = (time.perf_counter() - t0) * 1000.0
            return rep

        return wrapper

    return decorate


def engel_sink(G: PermGroup, g: Sequence[int], n: int, seed: int = 0):
    """``R_n(g)`` in ``G``, memoized on the group."""
    store = G._cache.setdefault("engel_sinks", {})
    key = (tuple(g), n, seed)
    if key not in store:
        R = right_engel_subgroup(G, g, n, seed=seed)
        store[key] = replace(R, subgroup=_intern(G, R.subgroup))
    return store[key]


def _intern(G: PermGroup, H: PermGroup) -> PermGroup:
    """A previously seen subgroup equal to ``H`` (or ``G`` itself), so structure caches are shared."""
    if H.order == G.order:
        return G
    seen = G._cache.setdefault("interned", {}).setdefault(H.order, [])
    for K in seen:
        if all(K._chain.contains(tuple(s)) for s in H.generators):
            return K
    seen.append(H)
    return H


def engel_would_sample(G: PermGroup, n: int) -> bool:
    return n >= 2 and G.order > get_thresholds().enumeration


def _element_order(g: Sequence[int]) -> int:
    return _order(tuple(g))


def _index_bound(check_id: str, G: PermGroup, g, n: int, label: str, seed: int,
                 series_of, height_of, bound_of) -> VerificationReport:
    g = tuple(g)
    if engel_would_sample(G, n):
        return _report(check_id, label, g, n, seed, verdict=SKIPPED, reason="probabilistic",
                       mode=PROBABILISTIC)
    R = engel_sink(G, g, n, seed)
    if R.mode != EXACT:
        return _report(check_id, label, g, n, seed, verdict=SKIPPED, reason="probabilistic",
                       mode=PROBABILISTIC)
    sub_series = series_of(R.subgroup, seed)
    k = height_of(sub_series)
    m = omega(_element_order(g))
    bound = bound_of(k, m)
    series = series_of(G, seed)
    min_index = series.min_index(g)
    ok = min_index is not None and min_index <= bound
    computed = {"k": k, "m": m, "bound": bound, "min_index": min_index, "r_order": R.subgroup.order}
    return _report(check_id, label, g, n, seed, computed=computed, verdict=PASS if ok else FAIL,
                   mode=combine_modes(sub_series.mode, series.mode))


@_timed("T1.1")
def verify_fitting_bound(G: PermGroup, g: Sequence[int], n: int, *, label: str = "G",
                         seed: int = 0) -> VerificationReport:
    """Soluble ``G``: ``g`` lies in ``F_{k+1}(G)`` where ``k = h(R_n(g))``."""
    if not is_soluble(G):
        return _report("T1.1", label, g, n, seed, verdict=SKIPPED, reason="not-soluble")
    return _index_bound("T1.1", G, g, n, label, seed, fitting_series,
                        lambda s: s.height_or_length, lambda k, m: k + 1)


@_timed("T1.2")
def verify_generalized_fitting_bound(G: PermGroup, g: Sequence[int], n: int, *, label: str = "G",
                                     seed: int = 0) -> VerificationReport:
    """``g`` lies in ``F*_{f(k,m)}(G)`` where ``k = h*(R_n(g))`` and ``|g|`` has ``m`` prime factors."""
    return _index_bound("T1.2", G, g, n, label, seed, generalized_fitting_series,
                        lambda s: s.height_or_length, bound_f)


@_timed("T1.3")
def verify_nonsoluble_bound(G: PermGroup, g: Sequence[int], n: int, *, label: str = "G",
                            seed: int = 0, f1_offset: int = 0) -> VerificationReport:
    """``g`` lies in ``D_{f1(k,m)}(G)`` where ``k`` is the nonsoluble length of ``R_n(g)``.

    ``f1_offset`` shifts the bound; a negative offset is a deliberately wrong
    bound used to confirm that the harness can fail.
    """
    return _index_bound("T1.3", G, g, n, label, seed, nonsoluble_series,
                        lambda s: s.height_or_length, lambda k, m: bound_f1(k, m) + f1_offset)


@_timed("BAER")
def verify_baer(G: PermGroup, g: Sequence[int], n_max: int = 6, *, label: str = "G",
                seed: int = 0) -> VerificationReport:
    """``E_n(g) = 1`` for some ``n <= n_max`` exactly when ``g`` lies in ``F(G)``."""
    g = tuple(g)
    if G.order > get_thresholds().enumeration:
        return _report("BAER", label, g, n_max, seed, verdict=SKIPPED, reason="too-large")
    engel, least = is_left_engel(G, g, n_max)
    F = fitting_subgroup(G, seed)
    in_f = F._chain.contains(g)
    return _report("BAER", label, g, n_max, seed,
                   computed={"least_n": least, "in_fitting": int(in_f), "left_engel": int(engel)},
                   verdict=PASS if engel == in_f else FAIL)


@_timed("P3.1")
def verify_full_commutator_cover(G: PermGroup, alpha: Sequence[int], n: int, *, ambient: PermGroup | None = None,
                                 label: str = "G", seed: int = 0) -> VerificationReport:
    """Soluble ``G`` with ``[G, alpha] = G``: ``R_{G<alpha>, n}(alpha) = G``."""
    alpha = tuple(alpha)
    if not is_soluble(G):
        return _report("P3.1", label, alpha, n, seed, verdict=SKIPPED, reason="not-soluble")
    H = ambient if ambient is not None else G.extended([alpha])
    if not all(H._chain.contains(tuple(s)) for s in G.generators) or not H._chain.contains(alpha):
        return _report("P3.1", label, alpha, n, seed, verdict=SKIPPED, reason="bad-ambient")
    C = commutator_with_element(G, alpha)
    if C.order != G.order:
        return _report("P3.1", label, alpha, n, seed, verdict=SKIPPED, reason="hypothesis-fails",
                       computed={"commutator_order": C.order, "group_order": G.order})
    if engel_would_sample(H, n):
        return _report("P3.1", label, alpha, n, seed, verdict=SKIPPED, reason="probabilistic",
                       mode=PROBABILISTIC)
    R = right_engel_subgroup(H, alpha, n, seed=seed)
    ok = R.subgroup == G
    return _report("P3.1", label, alpha, n, seed, verdict=PASS if ok else FAIL, mode=R.mode,
                   computed={"r_order": R.subgroup.order, "group_order": G.order})


def _kernel_meets(K: PermGroup, g: tuple) -> bool:
    o = _order(g)
    return any(K._chain.contains(_pow(g, o // p)) for p in prime_factors(o))


@_timed("P4.1")
def verify_kernel_avoidance_bound(G: PermGroup, g: Sequence[int], n: int, s: int, *, label: str = "G",
                                  seed: int = 0) -> VerificationReport:
    """If ``<g>`` meets ``K_{ms}`` trivially, where ``|g|`` has ``m > 1`` prime factors,
    then the nonsoluble length of ``R_n(g)`` is at least ``s``."""
    g = tuple(g)
    m = omega(_element_order(g))
    base = {"m": m, "s": s}
    if m <= 1:
        return _report("P4.1", label, g, n, seed, verdict=SKIPPED, reason="hypothesis-fails", computed=base)
    series = nonsoluble_series(G, seed)
    lam = series.height_or_length
    if s < 1 or m * s > lam:
        return _report("P4.1", label, g, n, seed, verdict=SKIPPED, reason="hypothesis-fails",
                       computed=dict(base, lambda_=lam))
    dec = simple_factor_decomposition(G, m * s, seed)
    if _kernel_meets(dec.kernel, g):
        return _report("P4.1", label, g, n, seed, verdict=SKIPPED, reason="hypothesis-fails",
                       computed=dict(base, bound=m * s), mode=dec.mode)
    if engel_would_sample(G, n):
        return _report("P4.1", label, g, n, seed, verdict=SKIPPED, reason="probabilistic",
                       mode=PROBABILISTIC)
    R = engel_sink(G, g, n, seed)
    rs = nonsoluble_series(R.subgroup, seed)
    k = rs.height_or_length
    return _report("P4.1", label, g, n, seed, verdict=PASS if k >= s else FAIL,
                   computed=dict(base, k=k, bound=m * s), mode=combine_modes(rs.mode, dec.mode))


def _fits(*orders: int) -> bool:
    return min(orders) <= get_thresholds().enumeration


def _series_profile(X: PermGroup, seed: int):
    return fitting_series(X, seed), generalized_fitting_series(X, seed), nonsoluble_series(X, seed)


@_timed("L2.1")
def verify_subnormal_radicals(G: PermGroup, N: PermGroup, *, label: str = "G", subgroup_label: str = "N",
                              seed: int = 0) -> VerificationReport:
    """For subnormal ``N``: ``F_i(N) = N ∩ F_i(G)`` and likewise for ``F*_i`` and ``D_i``;
    the series parameters of ``N`` are bounded by those of ``G`` and equal those of
    the normal closure of ``N``."""
    check = "L2.1"
    if not N.is_subgroup_of(G) or not is_subnormal(N, G):
        return _report(check, f"{label}/{subgroup_label}", None, None, seed, verdict=SKIPPED,
                       reason="not-subnormal")
    if not _fits(N.order):
        return _report(check, f"{label}/{subgroup_label}", None, None, seed, verdict=SKIPPED,
                       reason="too-large")
    C = normal_closure(G, N)
    prof_n, prof_g, prof_c = (_series_profile(X, seed) for X in (N, G, C))
    problems = []
    for series_n, series_g, name in zip(prof_n, prof_g, ("F", "F*", "D")):
        depth = max(len(series_n.terms), len(series_g.terms)) + 1
        for i in range(depth):
            lhs = series_n.term(i)
            rhs = series_g.term(i)
            meet = intersection(N, rhs)
            if not (lhs.order == meet.order and lhs.is_subgroup_of(rhs)):
                problems.append(f"{name}{i}")
    sol_g, sol_n = is_soluble(G), is_soluble(N)
    params = {}
    for key, idx in (("h", 0), ("hstar", 1), ("lambda", 2)):
        params[key] = tuple(p[idx].height_or_length for p in (prof_n, prof_g, prof_c))
    h_n, h_g, h_c = params["h"]
    if sol_g and h_n > h_g:
        problems.append("h(N)>h(G)")
    if sol_n and h_n != h_c:
        problems.append("h(N)!=h(closure)")
    for key in ("hstar", "lambda"):
        a, b, c = params[key]
        if a > b:
            problems.append(f"{key}(N)>{key}(G)")
        if a != c:
            problems.append(f"{key}(N)!={key}(closure)")
    computed = {"h_N": h_n, "h_G": h_g, "hstar_N": params["hstar"][0], "hstar_G": params["hstar"][1],
                "lambda_N": params["lambda"][0], "lambda_G": params["lambda"][1],
                "closure_order": C.order, "subgroup_order": N.order}
    computed = {k: v for k, v in computed.items() if v is not None}
    modes = [s.mode for p in (prof_n, prof_g, prof_c) for s in p]
    rep = _report(check, f"{label}/{subgroup_label}", None, None, seed, computed=computed,
                  verdict=FAIL if problems else PASS, mode=combine_modes(*modes))
    if problems:
        rep.reason = ",".join(problems)
    return rep


@_timed("L2.2")
def verify_abelian_by_cyclic_identity(A: PermGroup, g: Sequence[int], a: Sequence[int], n: int, *,
                                      label: str = "A", seed: int = 0) -> VerificationReport:
    """``[g, _n ga] = [a^-1, _n g]`` for abelian ``A`` normalized by ``g`` and ``a`` in ``A``."""
    ok = abelian_cyclic_identity_check(A, g, a, n)
    return _report("L2.2", label, g, n, seed, verdict=PASS if ok else FAIL,
                   computed={"a_order": _element_order(a)})


def _coordinate_values(factor: PermGroup, phi: tuple, n: int, r: int):
    """``([x, _n phi], [phi, _n phi x^-1])`` for ``x`` over every coordinate copy."""
    phi_i = _inv(phi)
    out = []
    for i in range(r):
        shift = _pow(phi, i)
        si = _inv(shift)
        for x in factor._iter_tuples():
            xi_ = _conj(x, shift, si)
            left = xi_
            for _ in range(n):
                left = _comm(left, phi, phi_i)
            y = _mul(phi, _inv(xi_))
            right = _engel_right(phi, y, n, _inv(y))
            out.append((left, right))
    return out


def verify_wreath_generation(S: PermGroup, r: int, n: int, *, label: str = "S", seed: int = 0
                         ) -> list[VerificationReport]:
    """For ``S^r`` with the coordinate-cycling ``phi``: the values ``[x, _n phi]``,
    ``x`` in the coordinate copies, generate ``S^r`` (``r`` prime), and
    ``R_{S^r<phi>, n}(phi) = S^r``.

    The second claim is decided by enumerating ``S^r<phi>`` when it fits the
    threshold.  Otherwise it is decided exactly by a sandwich: each
    ``[phi, _n phi x^-1]`` with ``x`` in a coordinate copy is a generator of
    the Engel subgroup, and the Engel subgroup lies in ``S^r`` because
    ``S^r<phi> / S^r`` is abelian.
    """
    from ..corpus import Construction, wreath_cyclic
    from ..engel import _generate

    t0 = time.perf_counter()
    tag = f"{label}^{r}"
    if r < 2:
        reps = [_report(cid, tag, None, n, seed, verdict=SKIPPED, reason="degenerate") for cid in ("L2.3", "L2.4")]
        for rep in reps:
            rep.runtime_ms = (time.perf_counter() - t0) * 1000.0
        return reps
    c = wreath_cyclic(Construction(label, S.degree, list(S.generators)), r)
    W = c.group()
    base = c.subgroup("base")
    phi = tuple(c.elements["phi"])
    factor = c.subgroup("factor1")
    if factor.order > get_thresholds().enumeration:
        raise TooLargeError("coordinate copy too large to enumerate")
    values = _coordinate_values(factor, phi, n, r)
    identity_ok = all(a == b for a, b in values)
    F = _generate(W.degree, sorted({a for a, _ in values}))
    reports = []
    if prime_factors(r) == [r]:
        ok = F == base
        reports.append(_report("L2.3", tag, phi, n, seed, verdict=PASS if ok else FAIL,
                               computed={"f_order": F.order, "base_order": base.order}))
    else:
        reports.append(_report("L2.3", tag, phi, n, seed, verdict=SKIPPED, reason="r-not-prime"))
    if W.order <= get_thresholds().enumeration:
        R = right_engel_subgroup(W, phi, n, method="enumerate" if n > 1 else None).subgroup
        method = "enumerate" if n > 1 else "closure"
        ok = R == base and identity_ok
        reports.append(_report("L2.4", tag, phi, n, seed, verdict=PASS if ok else FAIL,
                               computed={"r_order": R.order, "base_order": base.order, "method": method}))
    else:
        lower = _generate(W.degree, sorted({b for _, b in values}))
        if not identity_ok:
            reports.append(_report("L2.4", tag, phi, n, seed, verdict=FAIL, computed={"identity": 0}))
        elif lower == base:
            reports.append(_report("L2.4", tag, phi, n, seed, verdict=PASS,
                                   computed={"r_order": lower.order, "base_order": base.order,
                                             "method": "coordinate"}))
        else:
            reports.append(_report("L2.4", tag, phi, n, seed, verdict=SKIPPED, reason="inconclusive",
                                   computed={"lower_order": lower.order}))
    elapsed = (time.perf_counter() - t0) * 1000.0
    for rep in reports:
        rep.runtime_ms = elapsed / len(reports)
    return reports


def _automorphism_order(G: PermGroup, alpha: tuple) -> int:
    """Order of the automorphism of ``G`` induced by conjugation with ``alpha``."""
    gens = [tuple(s) for s in G.generators]
    k, power = 1, alpha
    while True:
        pi = _inv(power)
        if all(_conj(s, power, pi) == s for s in gens):
            return k
        power = _mul(power, alpha)
        k += 1


@_timed("COPRIME")
def verify_coprime_facts(G: PermGroup, alpha: Sequence[int], *, label: str = "G",
                         seed: int = 0) -> VerificationReport:
    """Coprime ``alpha``: ``[G, alpha] = [[G, alpha], alpha]``, and for abelian ``G``
    also ``G = [G, alpha] x C_G(alpha)``."""
    alpha = tuple(alpha)
    ai = _inv(alpha)
    if not all(G._chain.contains(_conj(tuple(s), alpha, ai)) for s in G.generators):
        return _report("COPRIME", label, alpha, None, seed, verdict=SKIPPED, reason="not-normalizing")
    e = _automorphism_order(G, alpha)
    if math.gcd(e, G.order) != 1:
        return _report("COPRIME", label, alpha, None, seed, verdict=SKIPPED, reason="not-coprime",
                       computed={"automorphism_order": e})
    if G.order > get_thresholds().enumeration:
        return _report("COPRIME", label, alpha, None, seed, verdict=SKIPPED, reason="too-large")
    C1 = commutator_with_element(G, alpha)
    C2 = commutator_with_element(C1, alpha)
    problems = []
    if C1 != C2:
        problems.append("[G,a]!=[[G,a],a]")
    computed = {"automorphism_order": e, "commutator_order": C1.order}
    if G.is_abelian():
        cent = PermGroup(G.degree, [x for x in G._iter_tuples() if _conj(x, alpha, ai) == x])
        meet = intersection(C1, cent)
        computed["centralizer_order"] = cent.order
        if not meet.is_trivial() or C1.order * cent.order != G.order:
            problems.append("not-direct")
    rep = _report("COPRIME", label, alpha, None, seed, computed=computed,
                  verdict=FAIL if problems else PASS)
    if problems:
        rep.reason = ",".join(problems)
    return rep


@_timed("PREC")
def verify_prec_order(limit: int = 200, samples: int = 2000, *, seed: int = 0) -> VerificationReport:
    """On ``1..limit``: ``prec`` is irreflexive, antisymmetric and transitive on sampled
    triples, and every proper divisor precedes its multiple."""
    rng = random.Random(seed)
    problems = []
    for a in range(1, limit + 1):
        if prec_compare(a, a) != EQUAL:
            problems.append(f"reflexive:{a}")
        for b in range(2 * a, limit + 1, a):
            if prec_compare(a, b) != LESS or prec_compare(b, a) != GREATER:
                problems.append(f"divisor:{a},{b}")
    for _ in range(samples):
        a, b, c = (rng.randint(1, limit) for _ in range(3))
        if prec_compare(a, b) == LESS and prec_compare(b, c) == LESS and prec_compare(a, c) != LESS:
            problems.append(f"transitive:{a},{b},{c}")
        if prec_compare(a, b) == LESS and prec_compare(b, a) != GREATER:
            problems.append(f"antisymmetric:{a},{b}")
    rep = VerificationReport("PREC", f"1..{limit}", computed={"triples": samples},
                             verdict=FAIL if problems else PASS, seed=seed)
    if problems:
        rep.reason = ",".join(problems[:10])
    return rep
