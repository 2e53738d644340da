"""Permutation groups via base and strong generating set.

:class:`PermGroup` wraps a completed stabilizer chain built by the
deterministic Schreier-Sims algorithm.  New base points are always the
smallest point moved by the residue that needs one, so chains (and thus
enumeration order, random streams and reports) are reproducible.

Homomorphisms are realised through the graph ``{(phi(x), x)}`` as a
permutation group on ``target_degree + degree`` points whose base starts with
the target points.  Sifting the target half of an element through the leading
levels yields a preimage, and the pointwise stabilizer of the target points is
the kernel.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

from .config import get_thresholds
from .errors import InvalidInputError, TooLargeError
from .perm import Permutation, _identity, _inv, _mul, _order


class _Chain:
    """Mutable stabilizer chain; levels are indexed from 0."""

    __slots__ = ("degree", "base", "gens", "trans", "itrans", "ident", "done")

    def __init__(self, degree: int, base_prefix: Sequence[int] = ()):
        self.degree = degree
        self.ident = _identity(degree)
        self.base: list[int] = []
        self.gens: list[list[tuple]] = []
        self.trans: list[dict[int, tuple]] = []
        self.itrans: list[dict[int, tuple]] = []
        # done[level][beta]: how many level generators have had their Schreier
        # generator at beta verified; verified ones stay valid as the chain grows
        self.done: list[dict[int, int]] = []
        for b in base_prefix:
            self._new_level(b)

    def copy(self) -> "_Chain":
        c = _Chain.__new__(_Chain)
        c.degree = self.degree
        c.ident = self.ident
        c.base = list(self.base)
        c.gens = [list(g) for g in self.gens]
        c.trans = [dict(t) for t in self.trans]
        c.itrans = [dict(t) for t in self.itrans]
        c.done = [dict(t) for t in self.done]
        return c

    def _new_level(self, point: int) -> None:
        self.base.append(point)
        self.gens.append([])
        self.trans.append({point: self.ident})
        self.itrans.append({point: self.ident})
        self.done.append({})

    def order(self) -> int:
        n = 1
        for t in self.trans:
            n *= len(t)
        return n

    def sift(self, g: tuple, start: int = 0) -> tuple[tuple, int]:
        base, itrans = self.base, self.itrans
        for level in range(start, len(base)):
            beta = g[base[level]]
            inv = itrans[level].get(beta)
            if inv is None:
                return g, level
            g = _mul(g, inv)
        return g, len(base)

    def contains(self, g: tuple) -> bool:
        h, level = self.sift(g)
        return level == len(self.base) and h == self.ident

    def _grow_orbit(self, level: int) -> None:
        gens = self.gens[level]
        trans, itrans = self.trans[level], self.itrans[level]
        queue = list(trans)
        i = 0
        while i < len(queue):
            beta = queue[i]
            i += 1
            u = trans[beta]
            for y in gens:
                gamma = y[beta]
                if gamma not in trans:
                    v = _mul(u, y)
                    trans[gamma] = v
                    itrans[gamma] = _inv(v)
                    queue.append(gamma)

    def _place(self, h: tuple, lo: int, hi: int) -> int:
        """Add residue ``h`` (fixing base[:hi]) as strong generator of levels lo..hi."""
        if hi == len(self.base):
            moved = next(i for i, j in enumerate(h) if i != j)
            self._new_level(moved)
        for level in range(lo, hi + 1):
            self.gens[level].append(h)
            self._grow_orbit(level)
        return hi

    def extend(self, new_gens: Iterable[tuple]) -> bool:
        """Add generators and restore the chain; returns whether the group grew."""
        grew = False
        for g in new_gens:
            h, level = self.sift(g)
            if level == len(self.base) and h == self.ident:
                continue
            self._place(h, 0, level)
            grew = True
        if grew:
            self._complete()
        return grew

    def _complete(self) -> None:
        level = len(self.base) - 1
        while level >= 0:
            restart = self._check_level(level)
            if restart is None:
                level -= 1
            else:
                level = restart

    def _check_level(self, level: int) -> int | None:
        trans, itrans, done = self.trans[level], self.itrans[level], self.done[level]
        gens = self.gens[level]
        ident = self.ident
        for beta in list(trans):
            start = done.get(beta, 0)
            if start == len(gens):
                continue
            u = trans[beta]
            for j in range(start, len(gens)):
                y = gens[j]
                s = _mul(_mul(u, y), itrans[y[beta]])
                if s == ident:
                    continue
                h, stop = self.sift(s, level + 1)
                if stop < len(self.base) or h != ident:
                    done[beta] = j
                    return self._place(h, level + 1, stop)
            done[beta] = len(gens)
        return None


def _chain_from(degree: int, gens: Iterable[tuple], base_prefix: Sequence[int] = ()) -> _Chain:
    chain = _Chain(degree, base_prefix)
    chain.extend(gens)
    return chain


class PermGroup:
    """An immutable permutation group of a fixed degree.

    Equality is equality of subgroups of ``Sym(degree)``; hashing uses only
    ``(degree, order)``.
    """

    def __init__(self, degree: int, generators: Iterable[Sequence[int]] = (), *,
                 _chain: _Chain | None = None):
        if degree < 1:
            raise InvalidInputError("degree must be positive")
        gens = []
        for g in generators:
            p = g if isinstance(g, Permutation) else Permutation(g)
            if len(p) != degree:
                raise InvalidInputError(f"generator of degree {len(p)} in a group of degree {degree}")
            if not p.is_identity() and p not in gens:
                gens.append(p)
        self._degree = degree
        self._gens = tuple(gens)
        self._chain = _chain if _chain is not None else _chain_from(degree, map(tuple, gens))
        self._order = self._chain.order()
        self._cache: dict = {}

    @classmethod
    def _from_chain(cls, degree: int, gens: Iterable[tuple], chain: _Chain) -> "PermGroup":
        return cls(degree, [Permutation._trusted(tuple(g)) for g in gens], _chain=chain)

    # basic data

    @property
    def degree(self) -> int:
        return self._degree

    @property
    def generators(self) -> tuple[Permutation, ...]:
        return self._gens

    @property
    def order(self) -> int:
        return self._order

    def __len__(self) -> int:
        return self._order

    @property
    def base(self) -> tuple[int, ...]:
        return tuple(b for b, t in zip(self._chain.base, self._chain.trans) if len(t) > 1)

    @property
    def strong_generators(self) -> tuple[Permutation, ...]:
        seen: dict[tuple, None] = {}
        for level in self._chain.gens:
            for g in level:
                seen.setdefault(g)
        return tuple(Permutation._trusted(g) for g in seen)

    def basic_orbits(self) -> list[list[int]]:
        return [sorted(t) for t in self._chain.trans if len(t) > 1]

    def identity(self) -> Permutation:
        return Permutation.identity(self._degree)

    def is_trivial(self) -> bool:
        return self._order == 1

    def is_abelian(self) -> bool:
        gens = self._gens
        return all(_mul(a, b) == _mul(b, a) for i, a in enumerate(gens) for b in gens[i + 1:])

    # membership and comparison

    def contains(self, p: Sequence[int]) -> bool:
        if len(p) != self._degree:
            raise InvalidInputError(f"degree mismatch: {len(p)} vs {self._degree}")
        return self._chain.contains(tuple(p))

    def __contains__(self, p) -> bool:
        return len(p) == self._degree and self._chain.contains(tuple(p))

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        if other._degree != self._degree or other._order % self._order:
            return False
        return all(other._chain.contains(g) for g in self._gens)

    def __le__(self, other: "PermGroup") -> bool:
        return self.is_subgroup_of(other)

    def __lt__(self, other: "PermGroup") -> bool:
        return self._order < other._order and self.is_subgroup_of(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PermGroup):
            return NotImplemented
        return (self._degree == other._degree and self._order == other._order
                and self.is_subgroup_of(other))

    def __hash__(self) -> int:
        return hash((self._degree, self._order))

    def __repr__(self) -> str:
        return f"<PermGroup degree={self._degree} order={self._order} gens={len(self._gens)}>"

    # enumeration and sampling

    def elements(self, threshold: int | None = None) -> Iterator[Permutation]:
        """Yield every element exactly once (deterministic order)."""
        limit = get_thresholds().enumeration if threshold is None else threshold
        if self._order > limit:
            raise TooLargeError(f"group of order {self._order} exceeds enumeration threshold {limit}")
        wrap = Permutation._trusted
        for t in self._iter_tuples():
            yield wrap(t)

    def _iter_tuples(self) -> Iterator[tuple]:
        levels = [list(t.values()) for t in self._chain.trans if len(t) > 1]
        depth = len(levels)
        if depth == 0:
            yield self._chain.ident
            return

        def rec(level: int, right: tuple):
            if level == depth - 1:
                for u in levels[level]:
                    yield _mul(u, right)
                return
            for u in levels[level]:
                yield from rec(level + 1, _mul(u, right))

        yield from rec(0, self._chain.ident)

    def element_list(self) -> list[tuple]:
        """All elements as plain tuples, cached; subject to the enumeration threshold."""
        cached = self._cache.get("elements")
        if cached is None:
            limit = get_thresholds().enumeration
            if self._order > limit:
                raise TooLargeError(f"group of order {self._order} exceeds enumeration threshold {limit}")
            cached = list(self._iter_tuples())
            self._cache["elements"] = cached
        return cached

    def random_element(self, rng: random.Random) -> Permutation:
        levels = self._cache.get("levels")
        if levels is None:
            levels = [list(t.values()) for t in self._chain.trans if len(t) > 1]
            self._cache["levels"] = levels
        g = self._chain.ident
        for values in levels:
            g = _mul(values[rng.randrange(len(values))], g)
        return Permutation._trusted(g)

    # construction helpers

    def extended(self, extra: Iterable[Sequence[int]]) -> "PermGroup":
        """The subgroup generated by this group and ``extra``."""
        extra = [tuple(e) for e in extra]
        for e in extra:
            if len(e) != self._degree:
                raise InvalidInputError("degree mismatch")
        chain = self._chain.copy()
        new = [e for e in extra if not chain.contains(e)]
        if not new:
            return self
        # keep only the extras that actually enlarge the group
        kept = []
        for e in new:
            if chain.extend([e]):
                kept.append(e)
        return PermGroup._from_chain(self._degree, list(self._gens) + kept, chain)


def build_group(generators: Iterable[Sequence[int]], degree: int) -> PermGroup:
    """Group generated by ``generators``; an empty list gives the trivial group."""
    return PermGroup(degree, generators)


def trivial_group(degree: int) -> PermGroup:
    return PermGroup(degree, ())


def contains(G: PermGroup, p: Sequence[int]) -> bool:
    return G.contains(p)


def enumerate_elements(G: PermGroup, threshold: int | None = None) -> Iterator[Permutation]:
    return G.elements(threshold)


def random_element(G: PermGroup, rng: random.Random) -> Permutation:
    return G.random_element(rng)


def element_order(p: Sequence[int]) -> int:
    return _order(p)


# homomorphisms


@dataclass(eq=False)
class GroupHom:
    """A homomorphism from ``source`` into ``Sym(target_degree)``.

    ``mapper`` sends a source element to its image; ``image`` and ``kernel``
    are computed subgroups with ``|source| == |image| * |kernel|``.
    """

    source: PermGroup
    target_degree: int
    image: PermGroup
    kernel: PermGroup
    mapper: Callable[[tuple], tuple]
    _graph: _Chain = field(repr=False)

    def __call__(self, x: Sequence[int]) -> Permutation:
        if len(x) != self.source.degree:
            raise InvalidInputError("degree mismatch")
        return Permutation._trusted(tuple(self.mapper(tuple(x))))

    def preimage(self, q: Sequence[int]) -> Permutation:
        """Some source element mapping to ``q``."""
        t, d = self.target_degree, self.source.degree
        cur = tuple(q) + tuple(range(t, t + d))
        used = []
        chain = self._graph
        for level in range(len(chain.base)):
            b = chain.base[level]
            if b >= t:
                break
            beta = cur[b]
            inv = chain.itrans[level].get(beta)
            if inv is None:
                raise InvalidInputError("element is not in the image")
            used.append(chain.trans[level][beta])
            cur = _mul(cur, inv)
        if any(cur[i] != i for i in range(t)):
            raise InvalidInputError("element is not in the image")
        acc = tuple(range(d))
        for u in reversed(used):
            acc = _mul(acc, tuple(v - t for v in u[t:]))
        return Permutation._trusted(acc)

    def image_of(self, H: PermGroup) -> PermGroup:
        return PermGroup(self.target_degree, [self(g) for g in H.generators])

    def preimage_of(self, Q: PermGroup) -> PermGroup:
        """Full preimage of a subgroup of the image."""
        return self.kernel.extended(self.preimage(q) for q in Q.generators)


def _graph_chain(G: PermGroup, images: Sequence[tuple], t: int) -> _Chain:
    d = G.degree
    combined = [tuple(q) + tuple(t + j for j in g) for q, g in zip(images, G.generators)]
    return _chain_from(t + d, combined, base_prefix=range(t))


def action_hom(G: PermGroup, images: Sequence[Sequence[int]], target_degree: int,
               mapper: Callable[[tuple], tuple] | None = None) -> GroupHom:
    """Homomorphism given by images of ``G.generators`` (assumed consistent)."""
    images = [tuple(q) for q in images]
    if len(images) != len(G.generators):
        raise InvalidInputError("need one image per generator")
    t = target_degree
    graph = _graph_chain(G, images, t) if images else _Chain(t + G.degree, range(t))
    split = sum(1 for b in graph.base if b < t)
    kgens = graph.gens[split] if split < len(graph.base) else []
    kernel = PermGroup(G.degree, [tuple(v - t for v in k[t:]) for k in kgens])
    image = PermGroup(t, images)
    if image.order * kernel.order != G.order:
        raise InvalidInputError("generator images do not define a homomorphism")
    if mapper is None:
        mapper = _graph_mapper(G, images, t)
    return GroupHom(G, t, image, kernel, mapper, graph)


def _graph_mapper(G: PermGroup, images: list[tuple], t: int) -> Callable[[tuple], tuple]:
    d = G.degree
    combined = [tuple(q) + tuple(t + j for j in g) for q, g in zip(images, G.generators)]
    chain = _chain_from(t + d, combined, base_prefix=range(t, t + d))

    def mapper(x: tuple) -> tuple:
        cur = tuple(range(t)) + tuple(t + j for j in x)
        used = []
        for level in range(len(chain.base)):
            b = chain.base[level]
            if b < t:
                break
            beta = cur[b]
            used.append(chain.trans[level][beta])
            cur = _mul(cur, chain.itrans[level][beta])
        acc = tuple(range(t))
        for u in reversed(used):
            acc = _mul(acc, u[:t])
        return acc

    return mapper


def _canonical_coset_rep(H: PermGroup, x: tuple) -> tuple:
    """Canonical representative of the right coset ``H x``."""
    chain = H._chain
    for level, trans in enumerate(chain.trans):
        if len(trans) == 1:
            continue
        best = min(trans, key=x.__getitem__)
        x = _mul(trans[best], x)
    return x


def coset_action(G: PermGroup, H: PermGroup, threshold: int | None = None) -> GroupHom:
    """Action of ``G`` on the right cosets of ``H`` by right multiplication."""
    if not H.is_subgroup_of(G):
        raise InvalidInputError("H is not a subgroup of G")
    limit = get_thresholds().quotient if threshold is None else threshold
    index = G.order // H.order
    if index > limit:
        raise TooLargeError(f"index {index} exceeds quotient threshold {limit}")
    start = _canonical_coset_rep(H, _identity(G.degree))
    reps = [start]
    where = {start: 0}
    gens = [tuple(s) for s in G.generators]
    i = 0
    while i < len(reps):
        r = reps[i]
        i += 1
        for s in gens:
            c = _canonical_coset_rep(H, _mul(r, s))
            if c not in where:
                where[c] = len(reps)
                reps.append(c)
    images = [tuple(where[_canonical_coset_rep(H, _mul(r, s))] for r in reps) for s in gens]

    def mapper(x: tuple) -> tuple:
        return tuple(where[_canonical_coset_rep(H, _mul(r, x))] for r in reps)

    return action_hom(G, images, len(reps), mapper)


def quotient(G: PermGroup, N: PermGroup, threshold: int | None = None) -> GroupHom:
    """A homomorphism with kernel ``N`` (which must be normal in ``G``).

    Tries the action on the orbits of ``N`` first (these are blocks for ``G``)
    and falls back to the coset action when that action has a larger kernel.
    """
    for s in G.generators:
        for n in N.generators:
            if not N.contains(n.conjugate(s)):
                raise InvalidInputError("N is not normal in G")
    blocks = _orbits(N)
    if len(blocks) > 1:
        where = {}
        for i, block in enumerate(blocks):
            for a in block:
                where[a] = i
        first = [block[0] for block in blocks]

        def mapper(x: tuple) -> tuple:
            return tuple(where[x[a]] for a in first)

        images = [mapper(tuple(s)) for s in G.generators]
        hom = action_hom(G, images, len(blocks), mapper)
        if hom.kernel.order == N.order:
            return hom
    return coset_action(G, N, threshold)


def _orbits(G: PermGroup) -> list[list[int]]:
    seen = [False] * G.degree
    out = []
    gens = G.generators
    for a in range(G.degree):
        if seen[a]:
            continue
        orbit = [a]
        seen[a] = True
        i = 0
        while i < len(orbit):
            b = orbit[i]
            i += 1
            for s in gens:
                c = s[b]
                if not seen[c]:
                    seen[c] = True
                    orbit.append(c)
        out.append(orbit)
    return out


def orbits(G: PermGroup) -> list[list[int]]:
    return _orbits(G)
