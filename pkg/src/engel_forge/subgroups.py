"""Subgroup algebra: closures, commutators, centralizers, derived and central series."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .config import get_thresholds
from .errors import InvalidInputError, TooLargeError
from .group import PermGroup, _chain_from
from .perm import Permutation, _comm, _conj, _inv, _mul, _order, _pow


@dataclass(frozen=True)
class SubgroupChain:
    """A descending chain of subgroups; ``terms[0]`` is the starting group."""

    terms: tuple[PermGroup, ...]
    stabilized: bool
    depth_at_stabilization: int

    @property
    def terminus(self) -> PermGroup:
        return self.terms[-1]

    def orders(self) -> list[int]:
        return [t.order for t in self.terms]


def _require_degree(*items) -> int:
    degrees = {len(x) if not isinstance(x, PermGroup) else x.degree for x in items}
    if len(degrees) != 1:
        raise InvalidInputError(f"degree mismatch: {sorted(degrees)}")
    return degrees.pop()


def _require_subgroup(H: PermGroup, G: PermGroup, what: str = "H") -> None:
    _require_degree(H, G)
    if not H.is_subgroup_of(G):
        raise InvalidInputError(f"{what} is not contained in the ambient group")


def closure_under_conjugation(acting: Sequence[tuple], seeds: Iterable[tuple],
                              start: PermGroup, abort=None) -> PermGroup | None:
    """Smallest group containing ``start`` and ``seeds`` normalized by ``acting``.

    ``start`` must already be normalized by ``acting``.  ``abort(order)`` is
    consulted whenever the group grows; returning true stops and yields None.
    """
    chain = start._chain.copy()
    new_gens: list[tuple] = []
    queue: list[tuple] = []
    for s in seeds:
        s = tuple(s)
        if not chain.contains(s):
            chain.extend([s])
            new_gens.append(s)
            queue.append(s)
            if abort is not None and abort(chain.order()):
                return None
    acting_inv = [_inv(a) for a in acting]
    i = 0
    while i < len(queue):
        h = queue[i]
        i += 1
        for a, ai in zip(acting, acting_inv):
            c = _conj(h, a, ai)
            if not chain.contains(c):
                chain.extend([c])
                new_gens.append(c)
                queue.append(c)
                if abort is not None and abort(chain.order()):
                    return None
    if not new_gens:
        return start
    return PermGroup._from_chain(start.degree, [tuple(g) for g in start.generators] + new_gens, chain)


def normal_closure(G: PermGroup, H: PermGroup | Iterable[Sequence[int]],
                   over: PermGroup | None = None) -> PermGroup:
    """Normal closure of ``H`` (a subgroup, or a list of elements) in ``G``.

    With ``over`` (a normal subgroup of ``G``) the result is ``<over, H^G>``.
    """
    if isinstance(H, PermGroup):
        _require_subgroup(H, G)
        seeds = [tuple(h) for h in H.generators]
    else:
        seeds = [tuple(h) for h in H]
        for h in seeds:
            if len(h) != G.degree:
                raise InvalidInputError("degree mismatch")
            if not G._chain.contains(h):
                raise InvalidInputError("element is not in the ambient group")
    start = over if over is not None else PermGroup(G.degree)
    return closure_under_conjugation([tuple(s) for s in G.generators], seeds, start)


def is_normal(N: PermGroup, G: PermGroup) -> bool:
    """Whether ``N`` is normalized by every generator of ``G`` (``N`` need not lie in ``G``)."""
    _require_degree(N, G)
    chain = N._chain
    return all(chain.contains(_conj(tuple(n), tuple(s))) for s in G.generators for n in N.generators)


def normalizes(g: Sequence[int], H: PermGroup) -> bool:
    g = tuple(g)
    gi = _inv(g)
    return all(H._chain.contains(_conj(tuple(h), g, gi)) for h in H.generators)


def join(*groups: PermGroup) -> PermGroup:
    if not groups:
        raise InvalidInputError("join of no groups")
    _require_degree(*groups)
    first = max(groups, key=lambda g: g.order)
    return first.extended(g for H in groups if H is not first for g in H.generators)


def commutator_subgroup(A: PermGroup, B: PermGroup, ambient: PermGroup | None = None) -> PermGroup:
    """``[A, B]``: the normal closure in ``<A, B>`` of the generator commutators."""
    _require_degree(A, B)
    if ambient is not None:
        _require_subgroup(A, ambient, "A")
        _require_subgroup(B, ambient, "B")
    seeds = [_comm(tuple(a), tuple(b)) for a in A.generators for b in B.generators]
    acting = [tuple(g) for g in A.generators] + [tuple(g) for g in B.generators]
    return closure_under_conjugation(acting, seeds, PermGroup(A.degree))


def commutator_with_element(H: PermGroup, g: Sequence[int]) -> PermGroup:
    """``[H, <g>]``, computed inside ``<H, g>``."""
    _require_degree(H, g)
    g = tuple(g)
    seeds = [_comm(tuple(h), g) for h in H.generators]
    acting = [tuple(h) for h in H.generators] + [g]
    return closure_under_conjugation(acting, seeds, PermGroup(H.degree))


def derived_subgroup(G: PermGroup) -> PermGroup:
    cached = G._cache.get("derived")
    if cached is None:
        cached = commutator_subgroup(G, G)
        G._cache["derived"] = cached
    return cached


def _cap() -> int:
    return get_thresholds().chain_cap


def derived_series(G: PermGroup) -> SubgroupChain:
    """``G >= G' >= G'' >= ...`` until it stabilizes."""
    terms = [G]
    while True:
        nxt = derived_subgroup(terms[-1])
        if nxt.order == terms[-1].order:
            break
        terms.append(nxt)
        if len(terms) > _cap():
            raise RuntimeError("derived series exceeded the chain cap")
    return SubgroupChain(tuple(terms), True, len(terms) - 1)


def is_soluble(G: PermGroup) -> bool:
    cached = G._cache.get("soluble")
    if cached is None:
        cached = derived_series(G).terminus.is_trivial()
        G._cache["soluble"] = cached
    return cached


is_solvable = is_soluble


def perfect_core(G: PermGroup) -> PermGroup:
    """Last term of the derived series."""
    return derived_series(G).terminus


def is_perfect(G: PermGroup) -> bool:
    return derived_subgroup(G).order == G.order


def lower_central_series(G: PermGroup) -> SubgroupChain:
    terms = [G]
    while True:
        nxt = commutator_subgroup(terms[-1], G)
        if nxt.order == terms[-1].order:
            break
        terms.append(nxt)
        if len(terms) > _cap():
            raise RuntimeError("lower central series exceeded the chain cap")
    return SubgroupChain(tuple(terms), True, len(terms) - 1)


def is_nilpotent(G: PermGroup) -> bool:
    cached = G._cache.get("nilpotent")
    if cached is None:
        if _is_prime_power(G.order):
            cached = True
        else:
            cached = lower_central_series(G).terminus.is_trivial()
        G._cache["nilpotent"] = cached
    return cached


def is_subnormal(N: PermGroup, G: PermGroup) -> bool:
    """Descend through successive normal closures of ``N``."""
    _require_subgroup(N, G, "N")
    H = G
    while True:
        K = normal_closure(H, N)
        if K.order == N.order:
            return True
        if K.order == H.order:
            return False
        H = K


def iterated_commutator_chain(G: PermGroup, g: Sequence[int]) -> SubgroupChain:
    """``G >= [G,g] >= [[G,g],g] >= ...`` down to ``H`` with ``[H,g] = H``."""
    terms = [G]
    while True:
        nxt = commutator_with_element(terms[-1], g)
        if nxt.order == terms[-1].order:
            break
        terms.append(nxt)
        if len(terms) > _cap():
            raise RuntimeError("commutator chain exceeded the chain cap")
    return SubgroupChain(tuple(terms), True, len(terms) - 1)


def centralizer_of_element(G: PermGroup, g: Sequence[int], method: str | None = None) -> PermGroup:
    """``C_G(g) = {x in G : [g, x] = 1}``; ``g`` may lie outside ``G``.

    ``method`` is ``"enumerate"``, ``"backtrack"`` or None (enumerate when
    ``|G|`` is within the enumeration threshold).
    """
    _require_degree(G, g)
    g = tuple(g)
    if method is None:
        method = "enumerate" if G.order <= get_thresholds().enumeration else "backtrack"
    if method == "enumerate":
        found = PermGroup(G.degree)
        for x in G.element_list():
            if _mul(g, x) == _mul(x, g) and not found._chain.contains(x):
                found = found.extended([x])
        return found
    if method == "backtrack":
        return _centralizer_backtrack(G, g)
    raise InvalidInputError(f"unknown centralizer method {method!r}")


def _centralizer_backtrack(G: PermGroup, g: tuple) -> PermGroup:
    # Rebuild the chain with a base that walks the cycles of g: within a cycle
    # the image of each base point is forced by the image of its predecessor.
    degree = G.degree
    order_pts: list[int] = []
    seen = [False] * degree
    cycle_len = [1] * degree
    for a in range(degree):
        if seen[a]:
            continue
        cyc = [a]
        seen[a] = True
        b = g[a]
        while b != a:
            seen[b] = True
            cyc.append(b)
            b = g[b]
        for c in cyc:
            cycle_len[c] = len(cyc)
        order_pts.extend(cyc)
    chain = _chain_from(degree, [tuple(s) for s in G.generators], base_prefix=order_pts)
    base, trans = chain.base, chain.trans
    depth = len(base)
    prev_in_cycle = {}
    for i in range(1, depth):
        if g[base[i - 1]] == base[i]:
            prev_in_cycle[i] = base[i - 1]
    found = PermGroup(degree)

    def search(level: int, suffix: tuple):
        nonlocal found
        if level == depth:
            if _mul(g, suffix) == _mul(suffix, g) and not found._chain.contains(suffix):
                found = found.extended([suffix])
            return
        b = base[level]
        prev = prev_in_cycle.get(level)
        want = None if prev is None else g[suffix[prev]]
        for beta, u in trans[level].items():
            img = suffix[beta]
            if want is not None:
                if img != want:
                    continue
            elif cycle_len[img] != cycle_len[b]:
                continue
            search(level + 1, _mul(u, suffix))

    search(0, chain.ident)
    return found


def intersection(A: PermGroup, B: PermGroup) -> PermGroup:
    """``A ∩ B`` by enumerating the smaller group."""
    _require_degree(A, B)
    small, big = (A, B) if A.order <= B.order else (B, A)
    if small.is_subgroup_of(big):
        return small
    if small.order > get_thresholds().enumeration:
        raise TooLargeError("intersection needs enumeration of a group above the threshold")
    found = PermGroup(A.degree)
    chain = big._chain
    for x in small.element_list():
        if chain.contains(x) and not found._chain.contains(x):
            found = found.extended([x])
    return found


def conjugacy_classes(G: PermGroup) -> list[tuple[Permutation, int]]:
    """(representative, size) pairs; the representative is the lexicographically least element."""
    cached = G._cache.get("classes")
    if cached is not None:
        return cached
    elems = G.element_list()
    gens = [tuple(s) for s in G.generators]
    gens_inv = [_inv(s) for s in gens]
    seen: set = set()
    out = []
    for e in elems:
        if e in seen:
            continue
        orbit = [e]
        seen.add(e)
        i = 0
        while i < len(orbit):
            y = orbit[i]
            i += 1
            for s, si in zip(gens, gens_inv):
                c = _conj(y, s, si)
                if c not in seen:
                    seen.add(c)
                    orbit.append(c)
        out.append((Permutation._trusted(min(orbit)), len(orbit)))
    out.sort()
    G._cache["classes"] = out
    return out


def class_representatives(G: PermGroup) -> list[Permutation]:
    return [rep for rep, _ in conjugacy_classes(G)]


def order_modulo(x: Sequence[int], N: PermGroup) -> int:
    """Least ``e >= 1`` with ``x^e`` in ``N``."""
    x = tuple(x)
    o = _order(x)
    for e in _divisors(o):
        if N._chain.contains(_pow(x, e)):
            return e
    return o


def _divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _is_prime_power(n: int) -> bool:
    return n == 1 or len(prime_factors(n)) == 1


def is_p_group(G: PermGroup, p: int | None = None) -> bool:
    ps = prime_factors(G.order)
    return len(ps) <= 1 and (p is None or not ps or ps[0] == p)
