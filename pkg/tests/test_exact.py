"""Exact layer: rationals, half-integer Gamma, polynomial algebra."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from balltrace.exact import (HalfGamma, K_EIGEN, K_SYM, N_SYM, RationalPoly,
                             divmod_in_k, expand_in_K, exppoly_integral,
                             gamma_half, gamma_ratio_poly, pochhammer,
                             poly_equal)


class TestPochhammer:
    def test_empty_product(self):
        assert pochhammer(Fraction(123, 7), 0) == 1

    def test_hand_product(self):
        # (5/2)(7/2)(9/2)
        assert pochhammer(Fraction(5, 2), 3) == Fraction(315, 8)

    def test_factorial_oracle(self):
        import math
        for m in range(1, 9):
            assert pochhammer(1, m) == math.factorial(m)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            pochhammer(Fraction(1), -1)


class TestGammaHalf:
    def test_sqrt_pi(self):
        assert gamma_half(Fraction(1, 2)) == HalfGamma(Fraction(1), 1)

    def test_seven_halves(self):
        assert gamma_half(Fraction(7, 2)) == HalfGamma(Fraction(15, 8), 1)

    def test_integer_factorial(self):
        assert gamma_half(4) == HalfGamma(Fraction(6), 0)

    def test_recursion_on_half_integers(self):
        # Gamma(x+1) = x Gamma(x) exactly for all half-integers in (0, 50]
        x = Fraction(1, 2)
        while x <= 50:
            g, g1 = gamma_half(x), gamma_half(x + 1)
            assert g1.rational == x * g.rational
            assert g1.sqrt_pi_exponent == g.sqrt_pi_exponent
            x += Fraction(1, 2)

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            gamma_half(Fraction(1, 3))
        with pytest.raises(ValueError):
            gamma_half(Fraction(-1, 2))
        with pytest.raises(ValueError):
            gamma_half(0)


rationals = st.fractions(min_value=-50, max_value=50, max_denominator=40)


class TestRationalArithmetic:
    @given(rationals, rationals)
    @settings(max_examples=1000, deadline=None)
    def test_poly_constants_track_fractions(self, a, b):
        # constant polynomials agree with the big-integer Fraction oracle
        pa, pb = RationalPoly.const(a), RationalPoly.const(b)
        assert (pa + pb).eval() == a + b
        assert (pa - pb).eval() == a - b
        assert (pa * pb).eval() == a * b

    def test_normalization_idempotent(self):
        p = RationalPoly({(1, 0, 0): Fraction(2, 4), (0, 0, 0): Fraction(0)})
        assert p.terms == {(1, 0, 0): Fraction(1, 2)}
        assert RationalPoly(p.terms).terms == p.terms


class TestRationalPoly:
    def test_reflexive_equality(self):
        p = K_SYM ** 2 + 3 * N_SYM - 1
        assert poly_equal(p, p)

    def test_commutativity(self):
        assert poly_equal(K_SYM + N_SYM, N_SYM + K_SYM)

    def test_differing_constant(self):
        assert not poly_equal(K_SYM, K_SYM + 0 * N_SYM + 1)

    def test_eval_requires_bindings(self):
        with pytest.raises(ValueError):
            (K_SYM + N_SYM).eval(k=1)

    def test_divmod_in_k(self):
        p = (2 * K_SYM + N_SYM - 1) * (K_SYM + 3) + 7
        q, r = divmod_in_k(p, 2 * K_SYM + N_SYM - 1)
        assert poly_equal(q, K_SYM + 3)
        assert poly_equal(r, RationalPoly.const(7))

    def test_expand_in_K(self):
        p = 5 * K_EIGEN ** 2 + (N_SYM + 2) * K_EIGEN + 9
        c = expand_in_K(p)
        assert poly_equal(c[0], RationalPoly.const(9))
        assert poly_equal(c[1], N_SYM + 2)
        assert poly_equal(c[2], RationalPoly.const(5))

    def test_expand_in_K_rejects_non_K(self):
        with pytest.raises(ValueError):
            expand_in_K(K_SYM)


class TestGammaRatioPoly:
    def test_order_one_is_shift(self):
        # lambda_k(1/2) = k + (n-1)/2; at k=0 equals (n-1)/2
        p = gamma_ratio_poly(1)
        assert poly_equal(p, K_SYM + (N_SYM - 1) * Fraction(1, 2))
        assert p.eval(k=0, n=7) == 3

    def test_p4_eigenvalue_at_k0(self):
        # lambda_0(2) = (n-4)(n-2)n(n+2)/16
        p = gamma_ratio_poly(4)
        n = Fraction(9)
        assert p.eval(k=0, n=9) == (n - 4) * (n - 2) * n * (n + 2) / 16

    def test_factorial_oracle(self):
        # 2gamma=3 at (k=2, n=5): Gamma(6)/Gamma(3) = 120/2
        assert gamma_ratio_poly(3).eval(k=2, n=5) == 60

    def test_matches_float_gamma_ratio(self):
        import math
        from balltrace.specfun import gamma_float
        import random
        rng = random.Random(20240601)
        for _ in range(200):
            two_g = rng.randint(1, 8)
            k = rng.randint(0, 12)
            n = rng.randint(two_g + 1, 20)
            exact = float(gamma_ratio_poly(two_g).eval(k=k, n=n))
            top = k + n / 2 + two_g / 2
            bot = k + n / 2 - two_g / 2
            ref = gamma_float(top) / gamma_float(bot)
            assert math.isclose(exact, ref, rel_tol=1e-12)


class TestExpPolyIntegral:
    def test_constant(self):
        assert exppoly_integral([Fraction(1)], 2) == Fraction(1, 2)

    def test_quadratic(self):
        # y^2 against e^{-2y}: Gamma(3)/2^3
        assert exppoly_integral([0, 0, Fraction(1)], 2) == Fraction(1, 4)

    def test_linear(self):
        assert exppoly_integral([0, Fraction(1)], 2) == Fraction(1, 4)

    @given(st.lists(rationals, min_size=1, max_size=9),
           st.fractions(min_value=Fraction(1, 4), max_value=6, max_denominator=12))
    @settings(max_examples=200, deadline=None)
    def test_integration_by_parts(self, coeffs, rate):
        # int p' e^{-ry} = r int p e^{-ry} - p(0)
        dp = [c * (j + 1) for j, c in enumerate(coeffs[1:])]
        lhs = exppoly_integral(dp, rate) if dp else Fraction(0)
        rhs = rate * exppoly_integral(coeffs, rate) - coeffs[0]
        assert lhs == rhs

    @given(st.lists(rationals, min_size=1, max_size=6),
           st.lists(rationals, min_size=1, max_size=6))
    @settings(max_examples=100, deadline=None)
    def test_linearity(self, a, b):
        size = max(len(a), len(b))
        a = a + [Fraction(0)] * (size - len(a))
        b = b + [Fraction(0)] * (size - len(b))
        s = [x + y for x, y in zip(a, b)]
        assert exppoly_integral(s, 3) == exppoly_integral(a, 3) + exppoly_integral(b, 3)

    def test_rejects_nonpositive_rate(self):
        with pytest.raises(ValueError):
            exppoly_integral([Fraction(1)], 0)
