"""Fitting, generalized Fitting and upper nonsoluble series.

Every computation "in G/N" is carried out on preimages in ``G``: a normal
subgroup of ``G/N`` is stored as the normal subgroup of ``G`` containing
``N`` that maps onto it.  The workhorse is the relative normal closure
``<N, x^G>`` of an element ``x`` of prime order modulo ``N``.  The minimal
normal subgroups of ``G/N`` are exactly the inclusion-minimal such closures,
and conjugacy class representatives of ``G`` (powered down to prime order
modulo ``N``) reach every one of them.  Above the enumeration threshold the
class representatives are replaced by seeded random elements and results are
flagged ``probabilistic``.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from typing import Sequence

from .config import get_thresholds
from .errors import InvalidInputError, NotSolubleError
from .group import GroupHom, PermGroup, action_hom
from .perm import Permutation, _comm, _conj, _inv, _pow
from .subgroups import (class_representatives, join, order_modulo, perfect_core,
                        prime_factors, _is_prime_power)

EXACT = "exact"
PROBABILISTIC = "probabilistic"

_RANDOM_CANDIDATES = 48
_REFINE_SAMPLES = 24


class _Probe:
    """Collects whether any step had to fall back to random sampling."""

    __slots__ = ("exact",)

    def __init__(self):
        self.exact = True

    @property
    def mode(self) -> str:
        return EXACT if self.exact else PROBABILISTIC


def combine_modes(*modes: str) -> str:
    return EXACT if all(m == EXACT for m in modes) else PROBABILISTIC


def fingerprint(G: PermGroup) -> str:
    """Stable digest of a group's generators (independent of process and hash seed)."""
    h = hashlib.sha256(str(G.degree).encode())
    for g in sorted(tuple(x) for x in G.generators):
        h.update(bytes(str(g), "ascii"))
    return h.hexdigest()[:16]


def _rng(G: PermGroup, N: PermGroup, seed: int, salt: str = "") -> random.Random:
    key = f"{seed}:{fingerprint(G)}:{fingerprint(N)}:{salt}"
    return random.Random(int(hashlib.sha256(key.encode()).hexdigest()[:16], 16))


def _trivial(G: PermGroup) -> PermGroup:
    return PermGroup(G.degree)


def _cached(G: PermGroup, key, compute):
    """Per-group write-once cache.  Keys may include subgroups, kept alive in the entry."""
    store = G._cache.setdefault("structure", {})
    hit = store.get(key)
    if hit is None:
        hit = compute()
        store[key] = hit
    return hit


def _key(*groups: PermGroup) -> tuple:
    return tuple(id(g) for g in groups)


# candidates and relative closures


def _candidates(G: PermGroup, N: PermGroup, probe: _Probe, seed: int) -> list[tuple[tuple, int]]:
    """Elements ``x`` with ``x`` of prime order ``p`` modulo ``N``, as ``(x, p)`` pairs."""

    def compute():
        if G.order <= get_thresholds().enumeration:
            pool = [tuple(r) for r in class_representatives(G)]
            exact = True
        else:
            rng = _rng(G, N, seed, "candidates")
            gens = [tuple(s) for s in G.generators]
            pool = list(gens)
            pool += [tuple(a * b) for i, a in enumerate(G.generators) for b in G.generators[i + 1:]]
            pool += [tuple(G.random_element(rng)) for _ in range(_RANDOM_CANDIDATES)]
            exact = False
        out = []
        seen = set()
        for y in pool:
            if N._chain.contains(y):
                continue
            e = order_modulo(y, N)
            for p in prime_factors(e):
                x = _pow(y, e // p)
                if x not in seen:
                    seen.add(x)
                    out.append((x, p))
        return (N, out, exact)

    _, out, exact = _cached(G, ("cand", seed) + _key(N), compute)
    if not exact:
        probe.exact = False
    return out


def _closure_over(G: PermGroup, N: PermGroup, x: tuple, prime: int | None = None) -> PermGroup | None:
    """``<N, x^G>``; with ``prime`` set, None unless the index over ``N`` is a power of it."""
    from .subgroups import closure_under_conjugation

    acting = [tuple(s) for s in G.generators]
    if prime is None:
        return closure_under_conjugation(acting, [x], N)
    base = N.order

    def abort(order: int) -> bool:
        q = order // base
        while q % prime == 0:
            q //= prime
        return q != 1

    return closure_under_conjugation(acting, [x], N, abort)


def _grow_by_prime_power_closures(G: PermGroup, N: PermGroup, primes, probe: _Probe,
                                  seed: int) -> PermGroup:
    """Largest normal ``L >= N`` reached by adding closures of prime-power index.

    With ``primes`` a single prime this is the preimage of ``O_p(G/N)``; with
    every prime it is the preimage of the soluble radical of ``G/N``.
    """
    L = N
    while True:
        grew = False
        for x, p in _candidates(G, L, probe, seed):
            if primes is not None and p not in primes:
                continue
            if L._chain.contains(x):
                continue
            C = _closure_over(G, L, x, p)
            if C is not None and C.order > L.order:
                L = C
                grew = True
        if not grew:
            return L


def _minimal_over(G: PermGroup, N: PermGroup, probe: _Probe, seed: int) -> list[PermGroup]:
    """Preimages of the minimal normal subgroups of ``G/N``, ordered by (order, generators)."""

    def compute():
        local = _Probe()
        pool: list[PermGroup] = []
        for x, _ in _candidates(G, N, local, seed):
            pool.append(_closure_over(G, N, x))
        minimal = _inclusion_minimal(pool, N)
        if not local.exact:
            minimal = _refine(G, N, minimal, seed)
        return (N, minimal, local.exact)

    _, minimal, exact = _cached(G, ("minover", seed) + _key(N), compute)
    if not exact:
        probe.exact = False
    return minimal


def _inclusion_minimal(pool: list[PermGroup], N: PermGroup) -> list[PermGroup]:
    pool = sorted((M for M in pool if M.order > N.order), key=lambda M: M.order)
    out: list[PermGroup] = []
    for M in pool:
        if any(K.order <= M.order and K.is_subgroup_of(M) for K in out):
            continue
        out.append(M)
    return out


def _refine(G: PermGroup, N: PermGroup, found: list[PermGroup], seed: int) -> list[PermGroup]:
    """Search inside sampled closures for smaller relative closures."""
    current = list(found)
    rounds = 0
    while rounds < 8:
        rounds += 1
        extra = []
        for M in current:
            rng = _rng(M, N, seed, "refine")
            for _ in range(_REFINE_SAMPLES):
                y = tuple(M.random_element(rng))
                if N._chain.contains(y):
                    continue
                e = order_modulo(y, N)
                for p in prime_factors(e):
                    C = _closure_over(G, N, _pow(y, e // p))
                    if C.order < M.order:
                        extra.append(C)
        if not extra:
            break
        current = _inclusion_minimal(current + extra, N)
    return current


# public building blocks


def _check_prime(p: int) -> None:
    if p < 2 or prime_factors(p) != [p]:
        raise InvalidInputError(f"{p} is not a prime")


def p_core(G: PermGroup, p: int, over: PermGroup | None = None, seed: int = 0) -> PermGroup:
    """``O_p(G)``, or with ``over=N`` the preimage of ``O_p(G/N)``."""
    _check_prime(p)
    N = over if over is not None else _lookup_trivial(G)
    return _cached(G, ("pcore", p, seed) + _key(N),
                   lambda: _grow_by_prime_power_closures(G, N, {p}, _Probe(), seed))


def fitting_over(G: PermGroup, N: PermGroup, seed: int = 0, probe: _Probe | None = None) -> PermGroup:
    """Preimage of ``F(G/N)``: the product of the relative p-cores."""
    probe = probe or _Probe()

    def compute():
        local = _Probe()
        cores = [_grow_by_prime_power_closures(G, N, {p}, local, seed)
                 for p in prime_factors(G.order // N.order)]
        return (N, join(N, *cores) if cores else N, local.exact)

    _, F, exact = _cached(G, ("fitover", seed) + _key(N), compute)
    if not exact:
        probe.exact = False
    return F


def fitting_subgroup(G: PermGroup, seed: int = 0) -> PermGroup:
    return fitting_over(G, _lookup_trivial(G), seed)


def radical_over(G: PermGroup, N: PermGroup, seed: int = 0, probe: _Probe | None = None) -> PermGroup:
    """Preimage of the soluble radical of ``G/N``."""
    probe = probe or _Probe()

    def compute():
        local = _Probe()
        return (N, _grow_by_prime_power_closures(G, N, None, local, seed), local.exact)

    _, R, exact = _cached(G, ("radover", seed) + _key(N), compute)
    if not exact:
        probe.exact = False
    return R


def soluble_radical(G: PermGroup, seed: int = 0) -> PermGroup:
    return radical_over(G, _lookup_trivial(G), seed)


def minimal_normal_over(G: PermGroup, N: PermGroup, seed: int = 0,
                        probe: _Probe | None = None) -> list[PermGroup]:
    return _minimal_over(G, N, probe or _Probe(), seed)


def minimal_normal_subgroups(G: PermGroup, seed: int = 0) -> tuple[list[PermGroup], str]:
    """All minimal normal subgroups and the mode (exact or probabilistic)."""
    probe = _Probe()
    mins = _minimal_over(G, _lookup_trivial(G), probe, seed)
    return list(mins), probe.mode


def socle_over(G: PermGroup, N: PermGroup, seed: int = 0, probe: _Probe | None = None) -> PermGroup:
    mins = _minimal_over(G, N, probe or _Probe(), seed)
    return join(N, *mins) if mins else N


def socle(G: PermGroup, seed: int = 0) -> PermGroup:
    return socle_over(G, _lookup_trivial(G), seed)


def _lookup_trivial(G: PermGroup) -> PermGroup:
    """One shared trivial subgroup per group, so relative caches hit."""
    T = G._cache.get("trivial")
    if T is None:
        T = _trivial(G)
        G._cache["trivial"] = T
    return T


def _commutes_modulo(A: PermGroup, B: PermGroup, N: PermGroup) -> bool:
    ch = N._chain
    return all(ch.contains(_comm(tuple(a), tuple(b))) for a in A.generators for b in B.generators)


def generalized_fitting_over(G: PermGroup, N: PermGroup, seed: int = 0,
                             probe: _Probe | None = None) -> PermGroup:
    """Preimage of ``F*(G/N)``.

    ``F*(Q)/F(Q)`` is the product of the minimal normal subgroups ``M/F(Q)`` of
    ``Q/F(Q)`` whose perfect core centralizes ``F(Q)``; those cores are the
    central products of the components.
    """
    probe = probe or _Probe()

    def compute():
        local = _Probe()
        F = fitting_over(G, N, seed, local)
        parts = []
        for M in _minimal_over(G, F, local, seed):
            if _is_prime_power(M.order // F.order):
                continue
            if _commutes_modulo(perfect_core(M), F, N):
                parts.append(M)
        return (N, join(F, *parts) if parts else F, local.exact)

    _, Fs, exact = _cached(G, ("gfitover", seed) + _key(N), compute)
    if not exact:
        probe.exact = False
    return Fs


def is_simple(G: PermGroup, seed: int = 0) -> bool:
    """Nontrivial with no proper nontrivial normal subgroup."""
    if G.is_trivial():
        return False
    mins, _ = minimal_normal_subgroups(G, seed)
    return len(mins) == 1 and mins[0].order == G.order


def is_quasisimple(Q: PermGroup, seed: int = 0) -> bool:
    from .subgroups import is_perfect

    if Q.is_trivial() or not is_perfect(Q):
        return False
    Z = soluble_radical(Q, seed)
    mins = minimal_normal_over(Q, Z, seed)
    return len(mins) == 1 and mins[0].order == Q.order


@dataclass(frozen=True, eq=False)
class Layer:
    components: tuple[PermGroup, ...]
    layer: PermGroup
    mode: str


def components_and_layer(G: PermGroup, seed: int = 0) -> Layer:
    """Components (subnormal quasisimple subgroups) and their product ``E(G)``."""

    def compute():
        probe = _Probe()
        one = _lookup_trivial(G)
        F = fitting_over(G, one, seed, probe)
        comps: list[PermGroup] = []
        for M in _minimal_over(G, F, probe, seed):
            if _is_prime_power(M.order // F.order):
                continue
            P = perfect_core(M)
            if not _commutes_modulo(P, F, one):
                continue
            Z = radical_over(P, _lookup_trivial(P), seed, probe)
            for T in _minimal_over(P, Z, probe, seed):
                comps.append(perfect_core(T))
        comps.sort(key=lambda Q: (Q.order, sorted(tuple(g) for g in Q.generators)))
        E = join(one, *comps) if comps else one
        return Layer(tuple(comps), E, probe.mode)

    return _cached(G, ("layer", seed), compute)


# series


@dataclass(frozen=True, eq=False)
class SeriesRecord:
    """An ascending normal series with labelled terms.

    For ``kind == "nonsoluble"`` the labels alternate ``B0, D0, B1, D1, ...``;
    otherwise they are ``F0, F1, ...`` (or ``F*0, ...``).  Indices beyond the
    last computed term refer to the stabilized top term.
    """

    kind: str
    terms: tuple[tuple[str, PermGroup], ...]
    height_or_length: int | None
    stabilized_at_G: bool
    mode: str = EXACT

    def labels(self) -> list[str]:
        return [label for label, _ in self.terms]

    def orders(self) -> list[int]:
        return [H.order for _, H in self.terms]

    def _indexed(self, prefix: str) -> list[PermGroup]:
        return [H for label, H in self.terms if label.startswith(prefix)
                and label[len(prefix):].isdigit()]

    def term(self, i: int) -> PermGroup:
        """``F_i`` (or ``F*_i``; ``D_i`` for the nonsoluble series), stabilized tail."""
        if i < 0:
            raise InvalidInputError("series index must be non-negative")
        seq = self._indexed("D") if self.kind == "nonsoluble" else [H for _, H in self.terms]
        return seq[min(i, len(seq) - 1)]

    def D(self, i: int) -> PermGroup:
        if self.kind != "nonsoluble":
            raise InvalidInputError("D terms belong to the nonsoluble series")
        return self.term(i)

    def B(self, i: int) -> PermGroup:
        if self.kind != "nonsoluble":
            raise InvalidInputError("B terms belong to the nonsoluble series")
        seq = self._indexed("B")
        if i < len(seq):
            return seq[i]
        return self._indexed("D")[-1]

    def min_index(self, g: Sequence[int]) -> int | None:
        """Least ``i`` with ``g`` in ``term(i)``, or None when it never appears."""
        seq = self._indexed("D") if self.kind == "nonsoluble" else [H for _, H in self.terms]
        g = tuple(g)
        for i, H in enumerate(seq):
            if H._chain.contains(g):
                return i
        return None


def fitting_series(G: PermGroup, seed: int = 0) -> SeriesRecord:
    def compute():
        probe = _Probe()
        terms = [_lookup_trivial(G)]
        while terms[-1].order < G.order:
            nxt = fitting_over(G, terms[-1], seed, probe)
            if nxt.order == terms[-1].order:
                break
            terms.append(nxt)
        reached = terms[-1].order == G.order
        labelled = tuple((f"F{i}", H) for i, H in enumerate(terms))
        return SeriesRecord("fitting", labelled, len(terms) - 1 if reached else None, reached, probe.mode)

    return _cached(G, ("fseries", seed), compute)


def fitting_height(G: PermGroup, seed: int = 0) -> int:
    rec = fitting_series(G, seed)
    if rec.height_or_length is None:
        raise NotSolubleError("Fitting height is defined for soluble groups only")
    return rec.height_or_length


def generalized_fitting_series(G: PermGroup, seed: int = 0) -> SeriesRecord:
    def compute():
        probe = _Probe()
        terms = [_lookup_trivial(G)]
        while terms[-1].order < G.order:
            nxt = generalized_fitting_over(G, terms[-1], seed, probe)
            if nxt.order == terms[-1].order:
                raise RuntimeError("generalized Fitting series failed to grow")
            terms.append(nxt)
        labelled = tuple((f"F*{i}", H) for i, H in enumerate(terms))
        return SeriesRecord("generalized_fitting", labelled, len(terms) - 1, True, probe.mode)

    return _cached(G, ("gfseries", seed), compute)


def generalized_fitting_height(G: PermGroup, seed: int = 0) -> int:
    return generalized_fitting_series(G, seed).height_or_length


def nonsoluble_series(G: PermGroup, seed: int = 0) -> SeriesRecord:
    def compute():
        probe = _Probe()
        B = _lookup_trivial(G)
        D = radical_over(G, B, seed, probe)
        terms = [("B0", B), ("D0", D)]
        i = 0
        while D.order < G.order:
            i += 1
            B = socle_over(G, D, seed, probe)
            if B.order == D.order:
                raise RuntimeError("upper nonsoluble series failed to grow")
            D = radical_over(G, B, seed, probe)
            terms += [(f"B{i}", B), (f"D{i}", D)]
        return SeriesRecord("nonsoluble", tuple(terms), i, True, probe.mode)

    return _cached(G, ("nsseries", seed), compute)


def nonsoluble_length(G: PermGroup, seed: int = 0) -> int:
    return nonsoluble_series(G, seed).height_or_length


# simple factors of the nonsoluble sections


@dataclass(frozen=True, eq=False)
class SimpleFactorDecomposition:
    """Simple factors of ``U_j = B_j / D_{j-1}`` and the action of ``G`` on them.

    ``factors`` are preimages in ``G`` (each contains ``lower = D_{j-1}``).
    """

    level: int
    group: PermGroup
    lower: PermGroup
    upper: PermGroup
    factors: tuple[PermGroup, ...]
    kernel: PermGroup
    action: GroupHom
    kernel_within_radical: bool
    mode: str
    _witnesses: tuple[tuple, ...] = field(repr=False, default=())

    def factor_permutation(self, g: Sequence[int]) -> Permutation:
        """Where conjugation by ``g`` sends each factor (``i -> index of S_i^g``)."""
        g = tuple(g)
        gi = _inv(g)
        images = []
        for w in self._witnesses:
            c = _conj(w, g, gi)
            for k, T in enumerate(self.factors):
                if T._chain.contains(c):
                    images.append(k)
                    break
            else:
                raise InvalidInputError("element does not permute the simple factors")
        return Permutation._trusted(tuple(images))

    def orbits(self, g: Sequence[int]) -> list[tuple[int, ...]]:
        perm = self.factor_permutation(g)
        seen: set[int] = set()
        out = []
        for i in range(len(perm)):
            if i in seen:
                continue
            orbit = [i]
            j = perm[i]
            while j != i:
                orbit.append(j)
                j = perm[j]
            seen.update(orbit)
            out.append(tuple(orbit))
        return out

    def orbit_lengths(self, g: Sequence[int]) -> list[int]:
        return sorted(len(o) for o in self.orbits(g))


def simple_factor_decomposition(G: PermGroup, level: int, seed: int = 0) -> SimpleFactorDecomposition:
    series = nonsoluble_series(G, seed)
    lam = series.height_or_length
    if not 1 <= level <= lam:
        raise InvalidInputError(f"level must lie in 1..{lam}")

    def compute():
        probe = _Probe()
        lower, upper = series.D(level - 1), series.B(level)
        factors = tuple(sorted(_minimal_over(upper, lower, probe, seed),
                               key=lambda T: sorted(tuple(g) for g in T.generators)))
        witnesses = []
        for T in factors:
            w = next(tuple(s) for s in T.generators if not lower._chain.contains(tuple(s)))
            witnesses.append(w)
        dec_partial = SimpleFactorDecomposition(level, G, lower, upper, factors, _trivial(G),
                                                None, True, probe.mode, tuple(witnesses))
        images = [tuple(dec_partial.factor_permutation(s)) for s in G.generators]
        hom = action_hom(G, images, len(factors),
                         lambda x: tuple(dec_partial.factor_permutation(x)))
        K = hom.kernel
        within = upper.is_subgroup_of(K) and K.is_subgroup_of(series.D(level))
        return SimpleFactorDecomposition(level, G, lower, upper, factors, K, hom, within,
                                         combine_modes(probe.mode, series.mode), tuple(witnesses))

    return _cached(G, ("sfd", level, seed), compute)


def orbit_purity(dec: SimpleFactorDecomposition, g: Sequence[int], orbit: Sequence[int]) -> bool:
    """Whether the automorphism induced by ``g`` on the product of the orbit's
    factors has order equal to the orbit length."""
    g = tuple(g)
    orbit = tuple(orbit)
    perm = dec.factor_permutation(g)
    if not orbit or any(perm[i] not in orbit for i in orbit):
        raise InvalidInputError("not a g-invariant set of factors")
    r = len(orbit)
    gr = _pow(g, r)
    low = dec.lower._chain
    return all(low.contains(_comm(gr, tuple(s)))
               for i in orbit for s in dec.factors[i].generators)
