"""Engel words and the subgroups they generate.

``R_{H,n}(g)`` is generated by the right values ``[g, _n x]`` and ``E_n(g)``
by the left values ``[x, _n g]``, with ``x`` running over ``H``.  For ``n = 1``
the right subgroup is the normal closure in ``H`` of the commutators of ``g``
with the generators of ``H``, because ``[g, xy] = [g, y] [g, x]^y``; that path
is exact at every size.  Otherwise ``H`` is enumerated when it fits the
enumeration threshold and sampled above it.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .config import get_thresholds
from .errors import InvalidInputError, TooLargeError
from .group import PermGroup, _Chain
from .perm import Permutation, _comm, _conj, _engel_right, _inv, engel_commutator
from .subgroups import closure_under_conjugation

__all__ = [
    "EngelSubgroupResult",
    "engel_commutator",
    "right_engel_subgroup",
    "left_engel_subgroup",
    "is_right_engel",
    "is_left_engel",
    "abelian_cyclic_identity_check",
    "default_window",
]

EXACT = "exact"
PROBABILISTIC = "probabilistic"


@dataclass(frozen=True, eq=False)
class EngelSubgroupResult:
    subgroup: PermGroup
    mode: str
    samples_used: int
    n: int
    g: Permutation
    ambient_label: str = ""
    side: str = "right"
    seed: int | None = None

    @property
    def order(self) -> int:
        return self.subgroup.order


def default_window(order: int) -> int:
    """Consecutive non-growing samples needed before sampling stops."""
    return 64 * max(1, math.ceil(math.log2(max(order, 2))))


def _left_value(g: tuple, x: tuple, n: int, gi: tuple) -> tuple:
    """[x, _n g]."""
    c = x
    for _ in range(n):
        c = _comm(c, g, gi)
    return c


def _check_args(H: PermGroup, g: Sequence[int], n: int) -> tuple:
    if n < 1:
        raise InvalidInputError("Engel length must be at least 1")
    g = tuple(g)
    if len(g) != H.degree:
        raise InvalidInputError(f"element of degree {len(g)} for a group of degree {H.degree}")
    gi = _inv(g)
    if not all(H._chain.contains(_conj(tuple(s), g, gi)) for s in H.generators):
        raise InvalidInputError("g does not normalize H")
    return g


def _generate(degree: int, values: Iterable[tuple]) -> PermGroup:
    """Subgroup generated by ``values``, adding only values not yet contained."""
    chain = _Chain(degree)
    gens: list[tuple] = []
    for v in values:
        if not chain.contains(v):
            chain.extend([v])
            gens.append(v)
    return PermGroup._from_chain(degree, gens, chain)


def _sample_stream(H: PermGroup, seed: int, salt: str) -> random.Random:
    gens = "|".join(sorted(str(tuple(s)) for s in H.generators))
    digest = hashlib.sha256(f"{seed}:{H.degree}:{gens}:{salt}".encode()).hexdigest()
    return random.Random(int(digest[:16], 16))


def _engel_subgroup(H: PermGroup, g: tuple, n: int, value: Callable[[tuple], tuple],
                    side: str, *, method: str | None, seed: int, window: int | None,
                    label: str) -> EngelSubgroupResult:
    limit = get_thresholds().enumeration
    if method is None:
        method = "enumerate" if H.order <= limit else "sample"
    if method == "enumerate":
        if H.order > limit:
            raise TooLargeError(f"group of order {H.order} exceeds the enumeration threshold {limit}")
        values = {value(x) for x in H._iter_tuples()}
        values.discard(tuple(range(H.degree)))
        sub = _generate(H.degree, sorted(values))
        return EngelSubgroupResult(sub, EXACT, H.order, n, Permutation._trusted(g), label, side, None)
    if method != "sample":
        raise InvalidInputError(f"unknown method {method!r}")
    W = window if window is not None else default_window(H.order)
    rng = _sample_stream(H, seed, f"{side}:{n}:{g}")
    chain = _Chain(H.degree)
    gens: list[tuple] = []
    used = 0

    def offer(x: tuple) -> bool:
        v = value(x)
        if chain.contains(v):
            return False
        chain.extend([v])
        gens.append(v)
        return True

    for s in H.generators:
        offer(tuple(s))
        used += 1
    streak = 0
    while streak < W:
        used += 1
        streak = 0 if offer(tuple(H.random_element(rng))) else streak + 1
    sub = PermGroup._from_chain(H.degree, gens, chain)
    return EngelSubgroupResult(sub, PROBABILISTIC, used, n, Permutation._trusted(g), label, side, seed)


def right_engel_subgroup(H: PermGroup, g: Sequence[int], n: int, *, method: str | None = None,
                         seed: int = 0, window: int | None = None,
                         label: str = "") -> EngelSubgroupResult:
    """``R_{H,n}(g) = <[g, _n x] : x in H>`` for ``g`` normalizing ``H``.

    ``method`` is ``"closure"`` (``n == 1`` only), ``"enumerate"`` or
    ``"sample"``; by default ``n == 1`` uses the closure and larger ``n``
    enumerates when ``H`` fits the enumeration threshold.
    """
    g = _check_args(H, g, n)
    if method is None and n == 1:
        method = "closure"
    if method == "closure":
        if n != 1:
            raise InvalidInputError("the closure method only applies to n = 1")
        seeds = [_comm(g, tuple(s)) for s in H.generators]
        sub = closure_under_conjugation([tuple(s) for s in H.generators], seeds, PermGroup(H.degree))
        return EngelSubgroupResult(sub, EXACT, len(seeds), n, Permutation._trusted(g), label, "right", None)
    return _engel_subgroup(H, g, n, lambda x: _engel_right(g, x, n, _inv(x)), "right",
                           method=method, seed=seed, window=window, label=label)


def left_engel_subgroup(H: PermGroup, g: Sequence[int], n: int, *, method: str | None = None,
                        seed: int = 0, window: int | None = None,
                        label: str = "") -> EngelSubgroupResult:
    """``E_n(g) = <[x, _n g] : x in H>``."""
    g = _check_args(H, g, n)
    gi = _inv(g)
    return _engel_subgroup(H, g, n, lambda x: _left_value(g, x, n, gi), "left",
                           method=method, seed=seed, window=window, label=label)


def _least_trivial_n(G: PermGroup, step: Callable[[tuple], tuple], start: Callable[[tuple], tuple],
                     n_max: int) -> tuple[bool, int | None]:
    if n_max < 1:
        raise InvalidInputError("n_max must be at least 1")
    limit = get_thresholds().enumeration
    if G.order > limit:
        raise TooLargeError(f"group of order {G.order} exceeds the enumeration threshold {limit}")
    ident = tuple(range(G.degree))
    worst = 1
    for x in G._iter_tuples():
        c = start(x)
        k = 1
        while c != ident:
            if k == n_max:
                return False, None
            c = step(c, x)
            k += 1
        worst = max(worst, k)
    return True, worst


def is_right_engel(G: PermGroup, g: Sequence[int], n_max: int) -> tuple[bool, int | None]:
    """Whether ``[g, _n x] = 1`` for every ``x`` and some ``n <= n_max``; returns the least ``n``."""
    g = _check_args(G, g, 1)
    return _least_trivial_n(G, lambda c, x: _comm(c, x), lambda x: _comm(g, x), n_max)


def is_left_engel(G: PermGroup, g: Sequence[int], n_max: int) -> tuple[bool, int | None]:
    """Whether ``[x, _n g] = 1`` for every ``x`` and some ``n <= n_max``; returns the least ``n``."""
    g = _check_args(G, g, 1)
    gi = _inv(g)
    return _least_trivial_n(G, lambda c, x: _comm(c, g, gi), lambda x: _comm(x, g, gi), n_max)


def abelian_cyclic_identity_check(A: PermGroup, g: Sequence[int], a: Sequence[int], n: int) -> bool:
    """Check ``[g, _n ga] == [a^-1, _n g]`` for abelian ``A`` normalized by ``g`` and ``a`` in ``A``."""
    if n < 1:
        raise InvalidInputError("the identity needs Engel length at least 1")
    g, a = tuple(g), tuple(a)
    if len(g) != A.degree or len(a) != A.degree:
        raise InvalidInputError("degree mismatch")
    if not A.is_abelian():
        raise InvalidInputError("A is not abelian")
    if not A._chain.contains(a):
        raise InvalidInputError("a is not in A")
    gi = _inv(g)
    if not all(A._chain.contains(_conj(tuple(s), g, gi)) for s in A.generators):
        raise InvalidInputError("g does not normalize A")
    lhs = engel_commutator(g, Permutation._trusted(g) * Permutation._trusted(a), n)
    rhs = engel_commutator(_inv(a), g, n)
    return lhs == rhs
