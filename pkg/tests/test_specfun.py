"""Special functions: Gamma, 2F1 series, weighted radial profiles, and the
boundary limit with its extrapolation oracle."""

import math

import numpy as np
import pytest

from balltrace.specfun import (HypergeometricParams, LimitEstimate,
                               SeriesNonConvergence, beckner_A, gamma_float,
                               gauss_2f1, weighted_limit, weighted_radial,
                               weighted_radial_derivative)


class TestGammaFloat:
    def test_one(self):
        assert gamma_float(1.0) == 1.0

    def test_sqrt_pi(self):
        assert abs(gamma_float(0.5) - math.sqrt(math.pi)) < 1e-13

    def test_factorial(self):
        assert abs(gamma_float(5.0) - 24.0) < 1e-13 * 24

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            gamma_float(0.0)
        with pytest.raises(ValueError):
            gamma_float(-2.5)


class TestGauss2F1:
    def test_at_zero(self):
        assert gauss_2f1(1.3, -0.7, 2.2, 0.0) == 1.0

    def test_log_series(self):
        # 2F1(1,1;2;t) = -log(1-t)/t; at t = 1/2 this is 2 log 2
        val = gauss_2f1(1.0, 1.0, 2.0, 0.5)
        assert abs(val - 2 * math.log(2)) < 1e-13

    def test_terminating_b_zero(self):
        assert gauss_2f1(1.7, 0.0, 3.1, 0.9) == 1.0

    def test_rejects_bad_c(self):
        with pytest.raises(ValueError):
            gauss_2f1(1.0, 1.0, -2.0, 0.3)

    def test_rejects_t_out_of_range(self):
        with pytest.raises(ValueError):
            gauss_2f1(1.0, 1.0, 2.0, 1.0)

    def test_nonconvergence_reported(self):
        with pytest.raises(SeriesNonConvergence):
            gauss_2f1(0.9, 1.1, 1.0, 1.0 - 1e-14, maxterms=10000)

    def test_against_mpmath(self):
        mp = pytest.importorskip("mpmath")
        for (a, b, c, t) in [(0.5, 1.5, 2.5, 0.3), (2.0, -0.3, 1.7, 0.8),
                             (1.25, 1.75, 4.5, 0.95), (3.0, 2.0, 9.5, 0.99)]:
            ref = float(mp.hyp2f1(a, b, c, t))
            assert abs(gauss_2f1(a, b, c, t) - ref) < 1e-12 * abs(ref)


class TestHypergeometricParams:
    def test_invariants_hold(self):
        for b in (-0.9, -0.3, 0.0, 0.4, 0.99):
            for k in (0, 1, 5, 12):
                for n in (1, 3, 8):
                    par = HypergeometricParams.from_parameters(b, k, n)
                    assert par.gamma_k == (n + 2 * k + 1) / 2

    def test_rejects_bad_b(self):
        with pytest.raises(ValueError):
            HypergeometricParams.from_parameters(1.0, 1, 3)

    def test_root_positivity(self):
        # alpha+1, beta+1, alpha+1-b, beta+1-b > 0 (Appendix root analysis)
        for b in (-0.99, -0.5, 0.5, 0.99):
            for k in (1, 4, 9):
                par = HypergeometricParams.from_parameters(b, k, 4)
                for v in (par.alpha_k + 1, par.beta_k + 1,
                          par.alpha_k + 1 - b, par.beta_k + 1 - b):
                    assert v > 0


class TestBecknerA:
    def test_k_zero(self):
        assert beckner_A(0.37, 0, 5) == 0.0

    def test_b_zero_gives_k(self):
        for k in range(1, 9):
            assert abs(beckner_A(0.0, k, 4) - k) < 1e-12

    def test_continuity_across_b_zero(self):
        for k in range(1, 11):
            assert abs(beckner_A(1e-6, k, 5) - k) < 1e-4
            assert abs(beckner_A(-1e-6, k, 5) - k) < 1e-4

    def test_rejects_large_b(self):
        with pytest.raises(ValueError):
            beckner_A(1.0, 1, 3)


class TestWeightedRadial:
    def test_b_zero_is_power(self):
        for k in (1, 3, 6):
            for r in (0.0, 0.3, 0.8):
                assert abs(weighted_radial(0.0, k, 4, r) - r ** k) < 1e-12

    def test_k_zero_is_constant(self):
        for r in (0.0, 0.5, 0.9):
            assert weighted_radial(0.7, 0, 3, r) == 1.0

    def test_vanishes_at_origin(self):
        assert weighted_radial(0.5, 1, 3, 0.0) == 0.0

    def test_derivative_b_zero(self):
        for k in (1, 2, 5):
            r = 0.6
            assert abs(weighted_radial_derivative(0.0, k, 5, r)
                       - k * r ** (k - 1)) < 1e-12

    @pytest.mark.parametrize("b,k,n", [(0.5, 1, 3), (0.5, 3, 3),
                                       (-0.5, 2, 4), (0.25, 4, 5)])
    def test_radial_ode_residual(self, b, k, n):
        # f'' + (n/r - 2br/(1-r^2)) f' - c_k f / r^2 = 0, by central FD
        ck = k * (n + k - 1)
        h = 1e-4
        worst = 0.0
        for r in np.linspace(0.15, 0.85, 20):
            fm, f0, fp = (weighted_radial(b, k, n, r + d) for d in (-h, 0, h))
            d1 = (fp - fm) / (2 * h)
            d2 = (fp - 2 * f0 + fm) / (h * h)
            res = d2 + (n / r - 2 * b * r / (1 - r * r)) * d1 - ck * f0 / r ** 2
            scale = abs(d2) + abs(n / r * d1) + abs(ck * f0 / r ** 2)
            worst = max(worst, abs(res) / scale)
        assert worst < 1e-6

    @pytest.mark.parametrize("b,k,n", [(0.5, 2, 3), (-0.25, 3, 4)])
    def test_hypergeometric_ode_residual(self, b, k, n):
        # t(1-t) h'' + (gamma - (alpha+beta+1) t) h' - alpha beta h = 0
        par = HypergeometricParams.from_parameters(b, k, n)
        al, be, ga = par.alpha_k, par.beta_k, par.gamma_k

        def h_fn(t):
            return gauss_2f1(al, be, ga, t)

        step = 1e-4
        worst = 0.0
        for t in np.linspace(0.1, 0.8, 20):
            hm, h0, hp = h_fn(t - step), h_fn(t), h_fn(t + step)
            d1 = (hp - hm) / (2 * step)
            d2 = (hp - 2 * h0 + hm) / step ** 2
            res = t * (1 - t) * d2 + (ga - (al + be + 1) * t) * d1 - al * be * h0
            scale = max(abs(t * (1 - t) * d2), abs(ga * d1), abs(al * be * h0), 1.0)
            worst = max(worst, abs(res) / scale)
        assert worst < 1e-6


class TestWeightedLimit:
    def test_b_zero_gives_k(self):
        for k in (1, 3):
            est = weighted_limit(0.0, k, 5)
            assert abs(est.value - k) < 1e-8

    def test_cross_oracle_positive_b(self):
        est = weighted_limit(0.5, 1, 3)
        ref = beckner_A(0.5, 1, 3)
        assert abs(est.value - ref) < max(1e-4, est.error * 4)

    def test_cross_oracle_negative_b(self):
        # exercises the b < 0 branch where the two series terms cancel
        est = weighted_limit(-0.5, 2, 4)
        ref = beckner_A(-0.5, 2, 4)
        assert abs(est.value - ref) < 1e-4

    def test_extended_precision_path(self):
        est = weighted_limit(-0.5, 2, 4, extended=True)
        ref = beckner_A(-0.5, 2, 4)
        assert abs(est.value - ref) < 1e-4

    def test_rejects_k_zero(self):
        with pytest.raises(ValueError):
            weighted_limit(0.5, 0, 3)

    def test_returns_error_bar(self):
        est = weighted_limit(0.25, 2, 4)
        assert isinstance(est, LimitEstimate)
        assert est.error >= 0
