"""Local invariants of diagonal quadratic forms over Q.

Hilbert symbols at the real place, at odd primes, and at 2; the Hasse-Witt
invariant as the product of pairwise symbols; square-free discriminant
classes; and a place-by-place equivalence test comparing rank, discriminant
square class, and the Hasse-Witt invariant.

At an odd prime p, for a = p^n * u and b = p^m * v with units u, v:

    (a, b)_p = (-1|p)^(n*m) * (u|p)^m * (v|p)^n

At 2, for a = 2^n * u and b = 2^m * v with odd u, v:

    (a, b)_2 = (-1)^(eps(u) eps(v) + n omega(v) + m omega(u))

with eps(u) = (u - 1)/2 and omega(u) = (u^2 - 1)/8 taken mod 2.  At the real
place the symbol is -1 exactly when both arguments are negative.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact_arith import (
    Rational,
    is_prime,
    legendre_symbol,
    padic_valuation,
    squarefree_part,
)


@dataclass(frozen=True)
class Place:
    """A place of Q: the real place, an odd prime, or the dyadic place."""

    kind: str  # "real" | "odd_prime" | "dyadic"
    prime: int | None = None

    def __str__(self) -> str:
        if self.kind == "odd_prime":
            return f"p={self.prime}"
        return self.kind


REAL = Place("real")
DYADIC = Place("dyadic", 2)


def odd_place(p: int) -> Place:
    if p == 2 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    return Place("odd_prime", p)


def _nonzero_fraction(x) -> Fraction:
    x = Fraction(x) if not isinstance(x, Fraction) else x
    if x == 0:
        raise ValueError("Hilbert symbols are defined on nonzero arguments only")
    return x


def hilbert_real(a: Rational, b: Rational) -> int:
    """(a, b) at the real place: -1 iff both arguments are negative."""
    a, b = _nonzero_fraction(a), _nonzero_fraction(b)
    return -1 if a < 0 and b < 0 else 1


def _legendre_of_unit(u: Fraction, p: int) -> int:
    # u is a p-adic unit; (u|p) = (numerator * denominator | p).
    return legendre_symbol(u.numerator * u.denominator % p, p)


def hilbert_odd_p(a: Rational, b: Rational, p: int) -> int:
    """(a, b) at an odd prime p via the valuation/Legendre formula."""
    if p == 2 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    da = padic_valuation(_nonzero_fraction(a), p)
    db = padic_valuation(_nonzero_fraction(b), p)
    return hilbert_odd_from_parts(da.exponent, _legendre_of_unit(da.unit_part, p),
                                  db.exponent, _legendre_of_unit(db.unit_part, p), p)


def hilbert_odd_from_parts(n: int, legendre_u: int, m: int, legendre_v: int, p: int) -> int:
    """(p^n u, p^m v)_p given the valuations and the units' Legendre symbols."""
    result = 1
    if n % 2 and m % 2:
        result *= legendre_symbol(-1, p)
    if m % 2:
        result *= legendre_u
    if n % 2:
        result *= legendre_v
    return result


def _unit_mod8(u: Fraction) -> int:
    # u is a 2-adic unit: numerator and denominator both odd.
    return u.numerator * pow(u.denominator, -1, 8) % 8


def hilbert_dyadic(a: Rational, b: Rational) -> int:
    """(a, b) at the dyadic place via the eps/omega unit formula."""
    da = padic_valuation(_nonzero_fraction(a), 2)
    db = padic_valuation(_nonzero_fraction(b), 2)
    u = _unit_mod8(da.unit_part)
    v = _unit_mod8(db.unit_part)
    eps_u, eps_v = (u % 4 == 3), (v % 4 == 3)
    omega_u, omega_v = (u in (3, 5)), (v in (3, 5))
    exponent = (eps_u and eps_v) + da.exponent * omega_v + db.exponent * omega_u
    return -1 if exponent % 2 else 1


def hilbert(a: Rational, b: Rational, place: Place) -> int:
    """Hilbert symbol (a, b) at the given place of Q."""
    if place.kind == "real":
        return hilbert_real(a, b)
    if place.kind == "dyadic":
        return hilbert_dyadic(a, b)
    if place.kind == "odd_prime":
        return hilbert_odd_p(a, b, place.prime)
    raise ValueError(f"unknown place kind {place.kind!r}")


def _coefficients_of(q) -> tuple[Fraction, ...]:
    # Accept a diagonal coefficient sequence or any object carrying one.
    coeffs = getattr(q, "coefficients", q)
    out = tuple(Fraction(c) if not isinstance(c, Fraction) else c for c in coeffs)
    if not out:
        raise ValueError("a diagonal form needs at least one coefficient")
    if any(c == 0 for c in out):
        raise ValueError("diagonal coefficients must be nonzero")
    return out


def hasse_witt(coefficients: Sequence[Rational], place: Place) -> int:
    """Product of hilbert(a_i, a_j, place) over index pairs i < j.

    The empty product (rank-1 forms) is 1.  Invariant under permutation of
    the coefficients since each symbol is symmetric.
    """
    coeffs = _coefficients_of(coefficients)
    result = 1
    for i in range(len(coeffs)):
        for j in range(i + 1, len(coeffs)):
            result *= hilbert(coeffs[i], coeffs[j], place)
    return result


def discriminant_class(coefficients: Sequence[Rational]) -> int:
    """Square-free integer representing the product of the coefficients."""
    coeffs = _coefficients_of(coefficients)
    product = Fraction(1)
    for c in coeffs:
        product *= c
    return squarefree_part(product)


@dataclass(frozen=True)
class LocalInvariantRecord:
    """Rank, square-free discriminant representative, and epsilon at a place."""

    rank: int
    discriminant: int
    epsilon: int


def invariant_record(coefficients: Sequence[Rational], place: Place) -> LocalInvariantRecord:
    coeffs = _coefficients_of(coefficients)
    return LocalInvariantRecord(
        rank=len(coeffs),
        discriminant=discriminant_class(coeffs),
        epsilon=hasse_witt(coeffs, place),
    )


def _same_square_class_locally(d1: int, d2: int, place: Place) -> bool:
    # d1, d2 are square-free nonzero integers.
    if place.kind == "real":
        return (d1 > 0) == (d2 > 0)
    p = 2 if place.kind == "dyadic" else place.prime
    v1 = padic_valuation(d1, p)
    v2 = padic_valuation(d2, p)
    if v1.exponent % 2 != v2.exponent % 2:
        return False
    if place.kind == "dyadic":
        return _unit_mod8(v1.unit_part) == _unit_mod8(v2.unit_part)
    return _legendre_of_unit(v1.unit_part, p) == _legendre_of_unit(v2.unit_part, p)


def locally_equivalent(q1, q2, place: Place) -> bool:
    """Whether the local invariant triples of two diagonal forms over Q agree.

    Compares rank, the discriminant square class in the completion, and the
    Hasse-Witt invariant at the given place.  Inputs may be coefficient
    sequences or objects with a `coefficients` attribute.
    """
    c1, c2 = _coefficients_of(q1), _coefficients_of(q2)
    if len(c1) != len(c2):
        return False
    if not _same_square_class_locally(discriminant_class(c1), discriminant_class(c2), place):
        return False
    return hasse_witt(c1, place) == hasse_witt(c2, place)
