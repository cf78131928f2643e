from __future__ import annotations

import numpy as np
import pytest
import scipy.integrate
import scipy.stats

from wrp.density import DensitySlice, density, expectation, marginal_cdf
from wrp.errors import TailUnbounded, UsageError, WrpError
from wrp.levy import bm_gamma, brownian
from wrp.payoff import make_put

K = -0.2


def gamma_convolution_pdf(x, t, alpha=1.0, beta=1.0, sigma=1.0, mu=-1.0):
    """Transition density of the jump model by direct convolution:
    X_t = (mu + beta/alpha) t + sigma B_t - G_t with G_t ~ Gamma(beta t,
    rate alpha); the beta/alpha drift restores the jump compensation.
    This is an independent oracle for the characteristic-function route.
    """
    norm = scipy.stats.norm(loc=(mu + beta / alpha) * t, scale=sigma * np.sqrt(t))
    gam = scipy.stats.gamma(a=beta * t, scale=1.0 / alpha)

    def integrand(y):
        with np.errstate(under="ignore"):
            return norm.pdf(x + y) * gam.pdf(y)

    val, _ = scipy.integrate.quad(integrand, 0.0, np.inf, epsabs=1e-12, limit=200)
    return val


class TestGaussianOracle:
    def test_standard_normal_at_zero(self):
        trip = brownian(sigma=1.0)
        slc = density(trip, t=1.0, x_grid=np.linspace(-6.0, 6.0, 241))
        i = np.argmin(np.abs(slc.x_grid))
        assert slc.x_grid[i] == 0.0
        assert abs(slc.p_values[i] - 0.3989422804014327) < 1e-9

    def test_matches_normal_curve(self):
        trip = brownian(sigma=1.3)
        t = 0.7
        x = np.linspace(-8.0, 8.0, 301)
        slc = density(trip, t=t, x_grid=x)
        ref = scipy.stats.norm(scale=1.3 * np.sqrt(t)).pdf(x)
        assert np.max(np.abs(slc.p_values - ref)) < 1e-9

    def test_symmetric_for_driftless_bm(self):
        trip = brownian(sigma=1.0)
        x = np.linspace(-5.0, 5.0, 201)
        slc = density(trip, t=0.5, x_grid=x)
        assert np.max(np.abs(slc.p_values - slc.p_values[::-1])) < 1e-12

    def test_tilt_parameter_does_not_change_the_law(self):
        x = np.linspace(-4.0, 4.0, 101)
        a = density(brownian(sigma=1.0, zeta=0.0), t=1.0, x_grid=x)
        b = density(brownian(sigma=1.0, zeta=0.9), t=1.0, x_grid=x)
        assert np.max(np.abs(a.p_values - b.p_values)) < 1e-13


class TestJumpModelOracle:
    def test_pointwise_against_convolution(self, bm_gamma_triplet):
        for x in (-1.0, 0.5):
            slc = density(bm_gamma_triplet, t=1.0, x_grid=np.array([x - 0.25, x, x + 0.25]))
            want = gamma_convolution_pdf(x, t=1.0)
            assert abs(slc.p_values[1] - want) < 1e-8

    @pytest.mark.parametrize("t", [0.25, 1.0, 4.0])
    def test_auto_grid_normalizes(self, bm_gamma_triplet, t):
        slc = density(bm_gamma_triplet, t=t)
        assert slc.normalization_defect < 1e-6

    def test_moments_match_exponent_derivatives(self, bm_gamma_triplet):
        # E X_t = t psi'(0) = t mu (compensated jumps), Var = t psi''(0)
        t = 0.7
        slc = density(bm_gamma_triplet, t=t)
        m1 = scipy.integrate.simpson(slc.x_grid * slc.p_values, x=slc.x_grid)
        m2 = scipy.integrate.simpson((slc.x_grid - m1) ** 2 * slc.p_values, x=slc.x_grid)
        assert abs(m1 - (-1.0 * t)) < 5e-6
        assert abs(m2 - 2.0 * t) < 2e-5


class TestSliceInvariants:
    def test_clipping_records_small_excursions(self, bm_gamma_triplet):
        slc = density(bm_gamma_triplet, t=0.5)
        assert np.all(slc.p_values >= 0.0)
        assert -1e-8 <= slc.pre_clip_min <= 1e-3  # interior minima are positive anyway

    def test_truncated_inversion_fails_loudly(self):
        trip = brownian(sigma=1.0)
        with pytest.raises(WrpError):
            density(trip, t=0.25, x_grid=np.linspace(-4, 4, 201), u_max=2.0)

    def test_t_must_be_positive(self):
        with pytest.raises(UsageError):
            density(brownian(sigma=1.0), t=0.0)

    def test_explicit_grid_is_respected(self, bm_gamma_triplet):
        x = np.linspace(-3.0, 1.0, 57)
        slc = density(bm_gamma_triplet, t=1.0, x_grid=x)
        assert np.array_equal(slc.x_grid, x)
        assert isinstance(slc, DensitySlice)


class TestExpectation:
    def test_constant_function(self, bm_gamma_triplet):
        val = expectation(bm_gamma_triplet, lambda x: np.ones_like(x), t=1.0)
        assert abs(val - 1.0) < 1e-6

    def test_bachelier_put_value(self):
        # E (K - X)^+ for X ~ N(0,1): phi(K) + K Phi(K)
        trip = brownian(sigma=1.0, zeta=0.9)
        put = make_put(K=K, zeta=0.9)
        want = scipy.stats.norm.pdf(K) + K * scipy.stats.norm.cdf(K)
        got = expectation(trip, put, t=1.0)
        assert abs(got - want) < 2e-7
        assert abs(want - 0.3068946358632765) < 1e-12

    def test_absolute_value_of_brownian(self):
        # E |B_t| = sigma sqrt(2 t / pi)
        trip = brownian(sigma=1.0, zeta=0.9)
        got = expectation(trip, lambda x: np.abs(x), t=1.0)
        assert abs(got - np.sqrt(2.0 / np.pi)) < 1e-6

    def test_put_against_convolution_oracle(self, bm_gamma_triplet, put_payoff):
        got = expectation(bm_gamma_triplet, put_payoff, t=1.0)

        def integrand(x):
            return (K - x) * gamma_convolution_pdf(x, t=1.0)

        want, _ = scipy.integrate.quad(integrand, -40.0, K, epsabs=1e-10, limit=300)
        assert abs(got - want) < 1e-6

    def test_growth_beyond_certified_moment_rejected(self):
        trip = brownian(sigma=1.0, zeta=0.9)
        with pytest.raises(TailUnbounded):
            expectation(trip, lambda x: np.exp(-1.5 * x), t=1.0)


class TestMarginalCdf:
    def test_gaussian_cdf(self):
        trip = brownian(sigma=1.0, zeta=0.9)
        got = marginal_cdf(trip, t=1.0, q=K)
        assert abs(got - scipy.stats.norm.cdf(K)) < 1e-7

    def test_jump_model_cdf_against_convolution(self, bm_gamma_triplet):
        got = marginal_cdf(bm_gamma_triplet, t=1.0, q=K)
        want, _ = scipy.integrate.quad(
            lambda x: gamma_convolution_pdf(x, t=1.0), -40.0, K, epsabs=1e-10, limit=300
        )
        assert abs(got - want) < 1e-6

    def test_monotone_in_threshold(self, bm_gamma_triplet):
        qs = np.linspace(-2.0, 1.0, 7)
        vals = [marginal_cdf(bm_gamma_triplet, t=0.5, q=q) for q in qs]
        assert np.all(np.diff(vals) > 0.0)
