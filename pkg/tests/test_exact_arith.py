from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from volcount.exact_arith import (
    QSqrt2,
    SQRT2,
    embed_sqrt2_mod_p,
    factor_int,
    is_prime,
    is_square_rational,
    legendre_symbol,
    padic_valuation,
    split_prime_valuation,
    sqrt_mod,
    squarefree_part,
)

ODD_PRIMES = (3, 5, 7, 11, 13, 17, 97, 193)


class TestPrimality:
    def test_small_values(self):
        primes_below_40 = [n for n in range(40) if is_prime(n)]
        assert primes_below_40 == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]

    def test_carmichael_numbers_rejected(self):
        for n in (561, 1105, 1729, 41041, 825265):
            assert not is_prime(n)

    def test_large_inputs_rejected(self):
        with pytest.raises(ValueError):
            is_prime(1 << 64)
        assert is_prime((1 << 61) - 1)  # Mersenne prime within range

    @given(st.integers(min_value=2, max_value=10**6))
    def test_matches_trial_division(self, n):
        by_trial = all(n % d for d in range(2, int(n**0.5) + 1))
        assert is_prime(n) == by_trial


class TestLegendreAndSqrt:
    def test_frozen_values(self):
        assert legendre_symbol(2, 17) == 1
        assert sqrt_mod(2, 17) == 6
        assert sqrt_mod(2, 5) is None
        assert legendre_symbol(-1, 5) == 1
        assert legendre_symbol(2, 5) == -1

    @given(st.sampled_from(ODD_PRIMES), st.integers(min_value=1, max_value=10**6))
    def test_sqrt_inverts_squaring(self, p, u):
        if u % p == 0:
            u += 1
        root = sqrt_mod(u, p)
        if legendre_symbol(u, p) == 1:
            assert root is not None
            assert root * root % p == u % p
            assert root <= p - root  # smaller of the two roots
        else:
            assert root is None

    @given(
        st.sampled_from(ODD_PRIMES),
        st.integers(min_value=1, max_value=10**4),
        st.integers(min_value=1, max_value=10**4),
    )
    def test_legendre_multiplicative(self, p, u, v):
        if u % p == 0 or v % p == 0:
            return
        assert legendre_symbol(u * v, p) == legendre_symbol(u, p) * legendre_symbol(v, p)


class TestFactorization:
    def test_known_factorizations(self):
        assert factor_int(1) == {}
        assert factor_int(2**5 * 3 * 49) == {2: 5, 3: 1, 7: 2}
        assert factor_int(-12) == {2: 2, 3: 1}  # sign is discarded
        # Forces the large-factor path past the trial-division bound.
        assert factor_int(10007 * 10009) == {10007: 1, 10009: 1}

    @given(st.integers(min_value=2, max_value=10**9))
    def test_reconstructs_input(self, n):
        factors = factor_int(n)
        product = 1
        for prime, exponent in factors.items():
            assert is_prime(prime)
            product *= prime**exponent
        assert product == n

    @given(st.fractions(max_denominator=500).filter(lambda x: x != 0))
    def test_squarefree_part_is_square_quotient(self, x):
        part = squarefree_part(x)
        assert is_square_rational(x / part)
        assert all(e == 1 for q, e in factor_int(abs(part)).items())

    def test_square_detection(self):
        assert is_square_rational(Fraction(49, 121))
        assert not is_square_rational(Fraction(-49, 121))
        assert not is_square_rational(Fraction(2))


class TestPadicValuation:
    def test_frozen_example(self):
        decomposition = padic_valuation(Fraction(12, 25), 5)
        assert decomposition.exponent == -2
        assert decomposition.unit_part == 12

    @given(
        st.sampled_from((3, 5, 7, 13)),
        st.fractions(max_denominator=10**4).filter(lambda x: x != 0),
    )
    def test_decomposition_identity(self, p, x):
        decomposition = padic_valuation(x, p)
        unit = decomposition.unit_part
        assert unit.numerator % p != 0 and unit.denominator % p != 0
        assert x == Fraction(p) ** decomposition.exponent * unit

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            padic_valuation(Fraction(0), 5)


qsqrt2_elements = st.builds(
    QSqrt2.of,
    st.fractions(max_denominator=40),
    st.fractions(max_denominator=40),
)


class TestQSqrt2:
    def test_fundamental_unit(self):
        unit = QSqrt2.of(1, 1)  # 1 + sqrt(2)
        assert unit * QSqrt2.of(-1, 1) == QSqrt2.of(1, 0)
        assert unit.norm() == -1

    def test_sign_is_exact(self):
        assert QSqrt2.of(1, -1).sign() == -1  # 1 - sqrt(2) < 0
        assert QSqrt2.of(3, -2).sign() == 1  # 3 - 2 sqrt(2) = 0.17...
        assert QSqrt2.of(0, 0).sign() == 0
        # 665857/470832 is a convergent of sqrt(2); the difference is ~1e-12.
        assert (QSqrt2.of(Fraction(665857, 470832), 0) - SQRT2).sign() == 1

    @given(qsqrt2_elements, qsqrt2_elements)
    def test_norm_multiplicative(self, x, y):
        assert (x * y).norm() == x.norm() * y.norm()

    @given(qsqrt2_elements)
    def test_inverse(self, x):
        if not x:
            return
        assert x * x.inverse() == QSqrt2.of(1, 0)

    @given(qsqrt2_elements, qsqrt2_elements)
    def test_sign_multiplicative(self, x, y):
        assert (x * y).sign() == x.sign() * y.sign()

    @given(qsqrt2_elements)
    def test_conjugation_fixes_norm(self, x):
        assert x.conjugate().norm() == x.norm()
        assert (x * x.conjugate()).sqrt2_part == 0


class TestSplitPrimeEmbedding:
    def test_frozen_embedding(self):
        assert embed_sqrt2_mod_p(QSqrt2.of(1, 1), 17, 6) == 7

    def test_rejects_bad_root(self):
        with pytest.raises(ValueError):
            embed_sqrt2_mod_p(QSqrt2.of(1, 1), 17, 5)

    def test_rational_prime_splits(self):
        # 17 = (5 + 2 sqrt2)(5 - 2 sqrt2); the factor vanishing at root 6
        # carries the whole valuation.
        exponent, unit = split_prime_valuation(QSqrt2.of(17, 0), 17, 6)
        assert exponent == 1
        assert unit % 17 != 0
        # The vanishing factor itself: 5 + 2*sqrt2 maps to 5 + 12 = 0 mod 17,
        # so the unit embedding refuses it and the valuation is positive.
        with pytest.raises(ValueError):
            embed_sqrt2_mod_p(QSqrt2.of(5, 2), 17, 6)
        assert split_prime_valuation(QSqrt2.of(5, 2), 17, 6)[0] == 1

    def test_unit_valuation_zero(self):
        exponent, unit = split_prime_valuation(SQRT2, 17, 6)
        assert exponent == 0 and unit == 6

    @given(
        st.integers(min_value=-3, max_value=3),
        st.integers(min_value=1, max_value=50),
        st.integers(min_value=0, max_value=50),
    )
    def test_valuation_additive_in_prime_powers(self, e, c, d):
        x = QSqrt2.of(c, d)
        scaled = x * QSqrt2.of(Fraction(17) ** e, 0)
        base_exponent, base_unit = split_prime_valuation(x, 17, 6)
        exponent, unit = split_prime_valuation(scaled, 17, 6)
        # 17 factors as two conjugate primes; the tracked one sees v(17) = 1
        # and the conjugate factor is a local unit there.
        assert exponent == base_exponent + e
        assert unit == base_unit
