"""Integer helpers for the bound formulas: prime counting, f, f1 and the prec order."""

from __future__ import annotations

from ..errors import InvalidInputError

LESS = "less"
GREATER = "greater"
EQUAL = "equal"


def factorize(n: int) -> dict[int, int]:
    """Prime exponents of ``n`` by trial division."""
    if n < 1:
        raise InvalidInputError("factorization needs a positive integer")
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def omega(n: int) -> int:
    """Number of prime factors counted with multiplicity."""
    if not isinstance(n, int) or n < 1:
        raise InvalidInputError("omega needs a positive integer")
    return sum(factorize(n).values())


def _non_negative(*values: int) -> None:
    if any(v < 0 for v in values):
        raise InvalidInputError("bound parameters must be non-negative")


def bound_f(k: int, m: int) -> int:
    """((k+1) m (m+1) + 2)(k+3) / 2."""
    _non_negative(k, m)
    return ((k + 1) * m * (m + 1) + 2) * (k + 3) // 2


def bound_f1(k: int, m: int) -> int:
    """(k+1) m (m+1) / 2."""
    _non_negative(k, m)
    return (k + 1) * m * (m + 1) // 2


def exponent_vector(n: int, primes: list[int]) -> list[int]:
    f = factorize(n)
    return [f.get(p, 0) for p in primes]


def prec_compare(a: int, b: int) -> str:
    """Compare exponent vectors ``(i_2, i_3, i_5, ...)`` lexicographically by ascending prime."""
    if a < 1 or b < 1:
        raise InvalidInputError("prec order is defined on positive integers")
    primes = sorted(set(factorize(a)) | set(factorize(b)))
    va, vb = exponent_vector(a, primes), exponent_vector(b, primes)
    if va == vb:
        return EQUAL
    return LESS if va < vb else GREATER
