"""Exact arithmetic over Q and Q(sqrt(2)).

Deterministic primality, Legendre symbols, Tonelli-Shanks modular square
roots, integer factorization, p-adic valuations, and residue embeddings of
Q(sqrt(2)) at rational primes where 2 is a quadratic residue.  Everything is
arbitrary-precision integer or fraction arithmetic; no floating point is used
anywhere in this package.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

# Rationals are stdlib fractions: always in lowest terms, denominator > 0.
Rational = Fraction

# Deterministic Miller-Rabin witness set, valid for every n < 3.3 * 10**24,
# comfortably past the advertised 2**64 input bound.
_MILLER_RABIN_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_PRIMALITY_BOUND = 1 << 64


def is_prime(n: int) -> bool:
    """Deterministic primality test for 0 <= n < 2**64."""
    if n >= _PRIMALITY_BOUND:
        raise ValueError(f"primality test accepts inputs below 2**64, got {n}")
    if n < 2:
        return False
    for p in _MILLER_RABIN_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MILLER_RABIN_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _require_odd_prime(p: int) -> None:
    if p == 2:
        raise ValueError("p = 2 is not an odd prime; use the dyadic routines")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


def legendre_symbol(u: int, p: int) -> int:
    """Legendre symbol (u|p) in {-1, 0, 1} by Euler's criterion.

    Requires an odd prime p; returns 0 exactly when p divides u.
    """
    _require_odd_prime(p)
    e = pow(u % p, (p - 1) // 2, p)
    if e == 0:
        return 0
    return 1 if e == 1 else -1


def sqrt_mod(u: int, p: int) -> int | None:
    """Smaller square root of u modulo an odd prime p, or None.

    Returns the representative in [0, p/2]; None when u is a non-residue,
    0 when p divides u.  Every result is re-multiplied as a self-check.
    """
    _require_odd_prime(p)
    u %= p
    if u == 0:
        return 0
    if legendre_symbol(u, p) == -1:
        return None
    if p % 4 == 3:
        r = pow(u, (p + 1) // 4, p)
    else:
        # Tonelli-Shanks: write p - 1 = q * 2^s with q odd.
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = 2
        while legendre_symbol(z, p) != -1:
            z += 1
        c = pow(z, q, p)
        r = pow(u, (q + 1) // 2, p)
        t = pow(u, q, p)
        m = s
        while t != 1:
            t2, i = t, 0
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            r = r * b % p
            c = b * b % p
            t = t * c % p
            m = i
    r = min(r, p - r)
    if r * r % p != u:
        raise RuntimeError(f"modular square root failed self-check for ({u}, {p})")
    return r


def factor_int(n: int) -> dict[int, int]:
    """Prime factorization of |n| as {prime: multiplicity}; n must be nonzero.

    Trial division up to 10**4 followed by Brent's variant of Pollard rho for
    any remaining composite cofactor.
    """
    if n == 0:
        raise ValueError("0 has no factorization")
    n = abs(n)
    factors: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    f = 7
    increments = (4, 2, 4, 2, 4, 6, 2, 6)  # wheel mod 30
    i = 0
    while f * f <= n and f < 10_000:
        while n % f == 0:
            factors[f] = factors.get(f, 0) + 1
            n //= f
        f += increments[i]
        i = (i + 1) % 8
    if n > 1:
        for p in _factor_large(n):
            factors[p] = factors.get(p, 0) + 1
    return factors


def _factor_large(n: int) -> list[int]:
    # n has no prime factor below 10**4 here.
    if n == 1:
        return []
    if is_prime(n):
        return [n]
    d = _pollard_brent(n)
    return _factor_large(d) + _factor_large(n // d)


def _pollard_brent(n: int) -> int:
    if n % 2 == 0:
        return 2
    x0, c = 2, 1
    while True:
        x, y, d = x0, x0, 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = gcd(abs(x - y), n)
        if d != n:
            return d
        c += 1


def squarefree_part(x: Rational | int) -> int:
    """The square-free integer representing x modulo nonzero rational squares."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("0 has no square-free part")
    n = x.numerator * x.denominator
    sign = -1 if n < 0 else 1
    result = sign
    for p, e in factor_int(n).items():
        if e % 2:
            result *= p
    return result


def is_square_rational(x: Rational | int) -> bool:
    """True iff x is the square of a rational number."""
    x = Fraction(x)
    if x < 0:
        return False
    a, b = x.numerator, x.denominator
    return isqrt(a) ** 2 == a and isqrt(b) ** 2 == b


@dataclass(frozen=True)
class ValuationDecomposition:
    """x = p**exponent * unit_part with unit_part a p-adic unit."""

    exponent: int
    unit_part: Rational


def padic_valuation(x: Rational | int, p: int) -> ValuationDecomposition:
    """Decompose nonzero rational x as p^m * u with v_p(u) = 0."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    x = Fraction(x)
    if x == 0:
        raise ValueError("the zero element has no finite valuation")
    num, den = x.numerator, x.denominator
    m = 0
    while num % p == 0:
        num //= p
        m += 1
    while den % p == 0:
        den //= p
        m -= 1
    return ValuationDecomposition(m, Fraction(num, den))


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an integer or Fraction, got {type(value).__name__}")


@dataclass(frozen=True)
class QSqrt2:
    """Element rational_part + sqrt2_part * sqrt(2) of the field Q(sqrt(2))."""

    rational_part: Rational
    sqrt2_part: Rational

    def __post_init__(self):
        object.__setattr__(self, "rational_part", _as_fraction(self.rational_part))
        object.__setattr__(self, "sqrt2_part", _as_fraction(self.sqrt2_part))

    @classmethod
    def of(cls, rational_part=0, sqrt2_part=0) -> "QSqrt2":
        return cls(Fraction(rational_part), Fraction(sqrt2_part))

    def __bool__(self) -> bool:
        return bool(self.rational_part or self.sqrt2_part)

    def _coerce(self, other) -> "QSqrt2 | None":
        if isinstance(other, QSqrt2):
            return other
        if isinstance(other, (int, Fraction)):
            return QSqrt2(Fraction(other), Fraction(0))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QSqrt2(self.rational_part + o.rational_part, self.sqrt2_part + o.sqrt2_part)

    __radd__ = __add__

    def __neg__(self):
        return QSqrt2(-self.rational_part, -self.sqrt2_part)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        c, d = self.rational_part, self.sqrt2_part
        e, f = o.rational_part, o.sqrt2_part
        return QSqrt2(c * e + 2 * d * f, c * f + d * e)

    __rmul__ = __mul__

    def inverse(self) -> "QSqrt2":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt(2))")
        return QSqrt2(self.rational_part / n, -self.sqrt2_part / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def conjugate(self) -> "QSqrt2":
        """Image under the field automorphism sqrt(2) -> -sqrt(2)."""
        return QSqrt2(self.rational_part, -self.sqrt2_part)

    def norm(self) -> Rational:
        """Field norm to Q: rational_part^2 - 2 * sqrt2_part^2."""
        return self.rational_part**2 - 2 * self.sqrt2_part**2

    def sign(self) -> int:
        """Sign of the real number rational_part + sqrt2_part * 1.414..., exactly."""
        c, d = self.rational_part, self.sqrt2_part
        if d == 0:
            return (c > 0) - (c < 0)
        if c == 0:
            return 1 if d > 0 else -1
        if (c > 0) == (d > 0):
            return 1 if c > 0 else -1
        # Opposite signs: the term with larger square dominates (c^2 = 2 d^2
        # is impossible for nonzero rationals since sqrt(2) is irrational).
        if c * c == 2 * d * d:
            raise RuntimeError("irrationality violated")
        dominant = c if c * c > 2 * d * d else d
        return 1 if dominant > 0 else -1

    def __str__(self) -> str:
        c, d = self.rational_part, self.sqrt2_part
        if d == 0:
            return str(c)
        if d == 1:
            s2 = "sqrt2"
        elif d == -1:
            s2 = "-sqrt2"
        else:
            s2 = f"{d}*sqrt2"
        if c == 0:
            return s2
        return f"{c}{'+' if not s2.startswith('-') else ''}{s2}"


SQRT2 = QSqrt2.of(0, 1)


def embed_sqrt2_mod_p(x: QSqrt2, p: int, root: int) -> int:
    """Residue of x in F_p under the embedding sending sqrt(2) to root.

    root must satisfy root^2 = 2 (mod p); the two choices give the two
    embeddings of Q(sqrt(2)) into the p-adics.  Rejects x whose denominators
    meet p and x of positive valuation (residue zero): callers that need a
    valuation must decompose first.
    """
    _require_odd_prime(p)
    if not 0 < root < p or (root * root - 2) % p != 0:
        raise ValueError(f"{root} is not a square root of 2 modulo {p}")
    c, d = x.rational_part, x.sqrt2_part
    if c.denominator % p == 0 or d.denominator % p == 0:
        raise ValueError(f"denominator of {x} is divisible by {p}")
    residue = (
        c.numerator * pow(c.denominator, -1, p) + d.numerator * pow(d.denominator, -1, p) * root
    ) % p
    if residue == 0:
        raise ValueError(f"{x} has positive valuation at {p}; decompose before embedding")
    return residue


def _lift_sqrt2(root: int, p: int, exponent: int) -> int:
    # Newton lift of a square root of 2 from mod p to mod p**exponent.
    r, e = root % p, 1
    while e < exponent:
        e = min(2 * e, exponent)
        mod = p**e
        r = (r - (r * r - 2) * pow(2 * r, -1, mod)) % mod
    return r


def split_prime_valuation(x: QSqrt2, p: int, root: int) -> tuple[int, int]:
    """Valuation and unit residue of x at the place of Q(sqrt(2)) chosen by root.

    The prime p must split, i.e. root^2 = 2 (mod p).  Returns (m, u) with
    x = p^m * (unit) and u the unit's residue in F_p.  Computed by lifting
    root p-adically until the image of x is visibly nonzero.
    """
    _require_odd_prime(p)
    if not 0 < root < p or (root * root - 2) % p != 0:
        raise ValueError(f"{root} is not a square root of 2 modulo {p}")
    if not x:
        raise ValueError("the zero element has no finite valuation")
    c, d = x.rational_part, x.sqrt2_part
    den = c.denominator * d.denominator // gcd(c.denominator, d.denominator)
    big_c = c.numerator * (den // c.denominator)
    big_d = d.numerator * (den // d.denominator)
    den_m = 0
    while den % p == 0:
        den //= p
        den_m += 1
    precision = 8
    while True:
        mod = p**precision
        lifted = _lift_sqrt2(root, p, precision)
        image = (big_c + big_d * lifted) % mod
        if image:
            m = 0
            while image % p == 0:
                image //= p
                m += 1
            if m < precision // 2:
                break
        precision *= 2
        if precision > 4096:
            raise ValueError(f"valuation of {x} at {p} exceeds the supported range")
    unit = image % p * pow(den % p, -1, p) % p
    return m - den_m, unit
