from __future__ import annotations

import numpy as np
import pytest
import scipy.integrate

from wrp.quadrature import gk_fixed, gk_adaptive, graded_edges


class TestFixedRule:
    def test_polynomial_exact(self):
        # 15-point Kronrod integrates low degree polynomials exactly
        val, err = gk_fixed(lambda x: x**8, np.array([0.0, 1.0]))
        assert val == pytest.approx(1.0 / 9.0, rel=1e-15)
        assert err < 1e-14

    def test_matches_scipy_smooth(self):
        f = lambda x: np.exp(-0.5 * x**2) * np.cos(3.0 * x)
        val, _ = gk_fixed(f, np.linspace(-2.0, 5.0, 15))
        oracle, _ = scipy.integrate.quad(f, -2.0, 5.0, epsabs=1e-13)
        assert val == pytest.approx(oracle, abs=1e-12)

    def test_complex_integrand(self):
        lam = 1.0 + 2.0j
        val, _ = gk_fixed(lambda x: np.exp(lam * x), np.linspace(0.0, 1.0, 5))
        assert val == pytest.approx((np.exp(lam) - 1.0) / lam, rel=1e-13)

    def test_vector_valued_integrand(self):
        # rows integrate independently, sharing nodes
        ks = np.array([1.0, 2.0, 5.0])

        def f(x):
            return np.sin(np.outer(ks, x))

        val, err = gk_fixed(f, np.linspace(0.0, np.pi, 9))
        oracle = (1.0 - np.cos(ks * np.pi)) / ks
        np.testing.assert_allclose(val, oracle, rtol=1e-12)
        assert np.ndim(err) == 0  # worst row drives the shared estimate

    def test_error_estimate_is_conservative_here(self):
        f = lambda x: np.cos(40.0 * x)
        val, err = gk_fixed(f, np.linspace(0.0, 1.0, 4))
        true_err = abs(val - np.sin(40.0) / 40.0)
        assert true_err <= max(err, 1e-14)


class TestAdaptive:
    def test_sharp_peak(self):
        eps = 1e-4
        f = lambda x: 1.0 / (eps + (x - 0.3) ** 2)
        val, err = gk_adaptive(f, 0.0, 1.0, tol=1e-10)
        oracle, _ = scipy.integrate.quad(f, 0.0, 1.0, epsabs=1e-13, limit=200, points=[0.3])
        assert val == pytest.approx(oracle, abs=5e-10)
        assert err <= 1e-10

    def test_oscillatory(self):
        f = lambda x: np.cos(57.0 * x) * np.exp(-x)
        val, err = gk_adaptive(f, 0.0, 10.0, tol=1e-11)
        oracle = np.real((np.exp((57j - 1.0) * 10.0) - 1.0) / (57j - 1.0))
        assert val == pytest.approx(oracle, abs=1e-10)

    def test_vector_rows_converge_together(self):
        ks = np.array([1.0, 33.0])

        def f(x):
            return np.cos(np.outer(ks, x))

        val, err = gk_adaptive(f, 0.0, 1.0, tol=1e-11)
        np.testing.assert_allclose(val, np.sin(ks) / ks, atol=1e-10)

    def test_cap_returns_flag(self):
        # nasty integrand, tiny cap: must report not-converged without raising
        f = lambda x: np.abs(x - np.sqrt(2.0) / 2.0) ** (-0.5)
        val, err = gk_adaptive(f, 0.0, 1.0, tol=1e-14, max_panels=12)
        assert err > 1e-14  # honest residual estimate


class TestGradedEdges:
    def test_covers_interval(self):
        e = graded_edges(0.0, 100.0, fine_width=0.5, fine_span=10.0, coarse_width=4.0)
        assert e[0] == 0.0 and e[-1] == 100.0
        assert np.all(np.diff(e) > 0.0)
        # fine cells near the left end, coarse far out
        assert np.diff(e)[0] <= 0.5 + 1e-12
        assert np.max(np.diff(e)) <= 4.0 + 1e-12
