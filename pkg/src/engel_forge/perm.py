"""Permutations of {0, ..., d-1} stored as image tables.

Products are read left to right: ``p * q`` applies ``p`` first and then
``q``, so ``(p * q)[i] == q[p[i]]``.  Conjugation is ``g ** x == x^-1 g x``
(written ``g.conjugate(x)``) and the commutator is ``[g, x] = g^-1 x^-1 g x``.

The hot loops of the group algorithms work on plain tuples through the
underscore helpers below; :class:`Permutation` is a tuple subclass, so both
kinds compare and hash identically.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

from .errors import InvalidInputError


def _mul(p: tuple, q: tuple) -> tuple:
    return tuple(map(q.__getitem__, p))


def _inv(p: tuple) -> tuple:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def _conj(g: tuple, x: tuple, xi: tuple | None = None) -> tuple:
    """x^-1 g x."""
    if xi is None:
        xi = _inv(x)
    return tuple(map(x.__getitem__, map(g.__getitem__, xi)))


def _comm(g: tuple, x: tuple, xi: tuple | None = None) -> tuple:
    """[g, x] = g^-1 x^-1 g x."""
    if xi is None:
        xi = _inv(x)
    gi = _inv(g)
    return tuple(map(x.__getitem__, map(g.__getitem__, map(xi.__getitem__, gi))))


def _engel_right(g: tuple, x: tuple, n: int, xi: tuple | None = None) -> tuple:
    """[g, _n x]."""
    if xi is None:
        xi = _inv(x)
    c = g
    for _ in range(n):
        c = _comm(c, x, xi)
    return c


def _pow(p: tuple, e: int) -> tuple:
    if e < 0:
        p, e = _inv(p), -e
    result = tuple(range(len(p)))
    base = p
    while e:
        if e & 1:
            result = _mul(result, base)
        e >>= 1
        if e:
            base = _mul(base, base)
    return result


def _identity(degree: int) -> tuple:
    return tuple(range(degree))


def _is_identity(p: tuple) -> bool:
    return all(i == j for i, j in enumerate(p))


def _cycles(p: Sequence[int]) -> list[tuple[int, ...]]:
    """Nontrivial cycles, each starting at its least point, sorted by that point."""
    seen = [False] * len(p)
    out = []
    for start in range(len(p)):
        if seen[start] or p[start] == start:
            continue
        cycle = [start]
        seen[start] = True
        j = p[start]
        while j != start:
            seen[j] = True
            cycle.append(j)
            j = p[j]
        out.append(tuple(cycle))
    return out


def _order(p: Sequence[int]) -> int:
    return math.lcm(1, *(len(c) for c in _cycles(p)))


class Permutation(tuple):
    """A bijection of ``{0, ..., degree-1}``; ``self[i]`` is the image of ``i``."""

    __slots__ = ()

    def __new__(cls, images: Iterable[int]):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise InvalidInputError(f"not a permutation of 0..{len(images) - 1}: {images}")
        return tuple.__new__(cls, images)

    @classmethod
    def _trusted(cls, images: tuple) -> "Permutation":
        return tuple.__new__(cls, images)

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        if degree < 1:
            raise InvalidInputError("degree must be positive")
        return tuple.__new__(cls, range(degree))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> "Permutation":
        """Build from 0-based disjoint cycles."""
        images = list(range(degree))
        seen = set()
        for cycle in cycles:
            for a in cycle:
                if not 0 <= a < degree:
                    raise InvalidInputError(f"point {a} outside 0..{degree - 1}")
                if a in seen:
                    raise InvalidInputError(f"point {a} repeated")
                seen.add(a)
            for a, b in zip(cycle, tuple(cycle[1:]) + tuple(cycle[:1])):
                images[a] = b
        return tuple.__new__(cls, images)

    @property
    def degree(self) -> int:
        return len(self)

    @property
    def images(self) -> tuple[int, ...]:
        return tuple(self)

    def _check(self, other) -> None:
        if len(other) != len(self):
            raise InvalidInputError(f"degree mismatch: {len(self)} vs {len(other)}")

    def __mul__(self, other):
        if not isinstance(other, tuple):
            return NotImplemented
        self._check(other)
        return Permutation._trusted(_mul(self, other))

    def __rmul__(self, other):
        if not isinstance(other, tuple):
            return NotImplemented
        self._check(other)
        return Permutation._trusted(_mul(other, self))

    def __pow__(self, e: int) -> "Permutation":
        return Permutation._trusted(_pow(self, e))

    def __invert__(self) -> "Permutation":
        return self.inverse()

    def __call__(self, point: int) -> int:
        return self[point]

    def inverse(self) -> "Permutation":
        return Permutation._trusted(_inv(self))

    def conjugate(self, x: Sequence[int]) -> "Permutation":
        """``x^-1 * self * x``."""
        self._check(x)
        return Permutation._trusted(_conj(self, tuple(x)))

    def commutator(self, x: Sequence[int]) -> "Permutation":
        """``[self, x] = self^-1 x^-1 self x``."""
        self._check(x)
        return Permutation._trusted(_comm(self, tuple(x)))

    def is_identity(self) -> bool:
        return _is_identity(self)

    def order(self) -> int:
        return _order(self)

    def cycles(self) -> list[tuple[int, ...]]:
        return _cycles(self)

    def support(self) -> list[int]:
        return [i for i, j in enumerate(self) if i != j]

    def cycle_string(self) -> str:
        """Canonical 1-based cycle notation, e.g. ``(1,2,3)(4,5)``."""
        cyc = _cycles(self)
        if not cyc:
            return "()"
        return "".join("(" + ",".join(str(a + 1) for a in c) + ")" for c in cyc)

    def __str__(self) -> str:
        return self.cycle_string()

    def __repr__(self) -> str:
        return f"Permutation({self.cycle_string()!r}, degree={len(self)})"


def as_perm(p: Sequence[int]) -> Permutation:
    if isinstance(p, Permutation):
        return p
    return Permutation(p)


def compose(p: Sequence[int], q: Sequence[int]) -> Permutation:
    """Apply ``p`` then ``q``."""
    return as_perm(p) * as_perm(q)


def inverse(p: Sequence[int]) -> Permutation:
    return as_perm(p).inverse()


def conjugate(g: Sequence[int], x: Sequence[int]) -> Permutation:
    """``g^x = x^-1 g x``."""
    return as_perm(g).conjugate(x)


def commutator(g: Sequence[int], x: Sequence[int]) -> Permutation:
    """``[g, x] = g^-1 x^-1 g x``."""
    return as_perm(g).commutator(x)


def engel_commutator(y: Sequence[int], x: Sequence[int], n: int) -> Permutation:
    """The Engel word ``[y, _n x]``: ``[y,_0 x] = y``, ``[y,_(i+1) x] = [[y,_i x], x]``."""
    if n < 0:
        raise InvalidInputError("Engel length must be non-negative")
    y, x = as_perm(y), as_perm(x)
    y._check(x)
    return Permutation._trusted(_engel_right(tuple(y), tuple(x), n))
