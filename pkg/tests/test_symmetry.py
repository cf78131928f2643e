from __future__ import annotations

import numpy as np
import pytest

from wrp.errors import (
    AdmissibilityViolation,
    DenominatorUnderflow,
    OverflowGuard,
    RequiresL1,
    TruncationCapExceeded,
    UsageError,
)
from wrp.levy import bm_gamma, brownian
from wrp.payoff import make_custom, make_indicator, make_put
from wrp.symmetry import (
    ContourParams,
    cauchy_plus_regular,
    compute_g_curve,
    compute_g_point,
    kernel,
    static_hedge_payoff,
    verify_laplace_identity,
)

K = -0.2


def reflection_oracle(x):
    """Pure Brownian image of the put: g(x) = h(-x) = (K + x)^+."""
    return np.maximum(K + np.asarray(x), 0.0)


class TestKernel:
    def test_pure_bm_collapse(self):
        # with mu = 0 the kernel reduces to 1/(lambda - zeta - iz) for any sigma, zeta
        trip = brownian(sigma=1.3, zeta=0.9)
        lam = 4.0 + 1j * np.array([-7.0, 0.0, 2.5, 40.0])
        z = np.array([-11.0, -0.5, 0.0, 3.0, 25.0])
        got = kernel(trip, lam, z)
        want = 1.0 / (lam[:, None] - 0.9 - 1j * z[None, :])
        assert np.max(np.abs(got - want)) < 1e-12

    def test_split_identity_matches_kernel(self):
        # kernel == cauchy part + regular part, exactly, jumps included
        trip = bm_gamma(alpha=1.0, beta=1.0, sigma=1.0)
        lam = 4.0 + 1j * np.linspace(-90.0, 90.0, 41)
        z = np.linspace(-130.0, 130.0, 37)
        direct = kernel(trip, lam, z)
        cauchy, regular = cauchy_plus_regular(trip, lam, z)
        assert np.max(np.abs(direct - (cauchy + regular))) < 1e-12

    def test_regular_part_vanishes_for_driftless_bm(self):
        trip = brownian(sigma=1.1, zeta=0.4)
        lam = 4.0 + 1j * np.linspace(-20.0, 20.0, 11)
        z = np.linspace(-15.0, 15.0, 9)
        _, regular = cauchy_plus_regular(trip, lam, z)
        assert np.max(np.abs(regular)) < 1e-13

    def test_denominator_floor_guard(self):
        trip = bm_gamma(alpha=1.0, beta=1.0, sigma=1.0)
        put = make_put(K=K, zeta=0.9)
        params = ContourParams(gamma=1.2, r=60.0, R=60.0, floor_threshold=1.0)
        with pytest.raises(DenominatorUnderflow):
            compute_g_point(trip, put, 0.5, params)


class TestPureBmReflection:
    def test_small_truncation_away_from_kink(self):
        trip = brownian(sigma=1.0, zeta=0.9)
        put = make_put(K=K, zeta=0.9)
        params = ContourParams(gamma=4.0, r=300.0, R=300.0)
        for x in [0.4, 0.9]:
            res = compute_g_point(trip, put, x, params)
            assert abs(res.value - reflection_oracle(x)) < 2e-4

    def test_zeta_independence(self):
        # the image cannot depend on the tilt used to build it; R is kept
        # generous because the leftover tilt sensitivity lives in the
        # inner truncation tail
        params = ContourParams(gamma=4.0, r=300.0, R=600.0, method="dense")
        vals = []
        for zeta in [0.5, 1.3]:
            trip = brownian(sigma=1.0, zeta=zeta)
            put = make_put(K=K, zeta=zeta)
            vals.append(compute_g_point(trip, put, 0.7, params).value)
        assert abs(vals[0] - vals[1]) < 1e-6

    def test_curve_split_route_matches_reflection(self):
        trip = brownian(sigma=1.0, zeta=0.9)
        put = make_put(K=K, zeta=0.9)
        x = np.array([0.3, 0.7, 1.1, 1.6])
        params = ContourParams(gamma=4.0, r=2000.0, R=2000.0, method="split")
        image = compute_g_curve(trip, put, x, params=params)
        assert np.max(np.abs(image.g_values - reflection_oracle(x))) < 5e-5

    def test_im_residual_invariant(self):
        trip = brownian(sigma=1.0, zeta=0.9)
        put = make_put(K=K, zeta=0.9)
        x = np.array([0.3, 0.7, 1.1])
        params = ContourParams(gamma=4.0, r=800.0, R=800.0, method="split")
        image = compute_g_curve(trip, put, x, params=params)
        assert np.all(image.im_residuals < 1e-6 * (1.0 + np.abs(image.g_values)))


class TestRouteAgreement:
    def test_dense_and_split_agree_with_jumps(self):
        trip = bm_gamma(alpha=1.0, beta=1.0, sigma=1.0)
        put = make_put(K=K, zeta=0.9)
        x = np.array([0.5, 1.0])
        dense = compute_g_curve(
            trip, put, x, params=ContourParams(gamma=4.0, r=240.0, R=240.0, method="dense")
        )
        split = compute_g_curve(
            trip, put, x, params=ContourParams(gamma=4.0, r=240.0, R=240.0, method="split")
        )
        assert np.max(np.abs(dense.g_values - split.g_values)) < 1e-5

    def test_linearity_via_custom_payoff(self):
        trip = bm_gamma(alpha=1.0, beta=1.0, sigma=1.0)
        put = make_put(K=K, zeta=0.9)
        grid = np.linspace(-40.0, 0.5, 50_000)
        doubled = make_custom(grid, 2.0 * np.maximum(K - grid, 0.0), zeta=0.9)
        params = ContourParams(gamma=4.0, r=40.0, R=40.0, method="dense")
        a = compute_g_point(trip, put, 0.6, params).value
        b = compute_g_point(trip, doubled, 0.6, params).value
        assert b == pytest.approx(2.0 * a, abs=2e-4)


class TestGuards:
    def test_indicator_needs_l1(self):
        trip = bm_gamma(alpha=1.0, beta=1.0, sigma=1.0)
        ind = make_indicator(K=K, zeta=0.9)
        with pytest.raises(RequiresL1):
            compute_g_curve(trip, ind, np.array([0.5]), target_err=1e-3)

    def test_overflow_guard(self):
        trip = brownian(sigma=1.0, zeta=0.9)
        put = make_put(K=K, zeta=0.9)
        with pytest.raises(OverflowGuard):
            compute_g_point(trip, put, 200.0, ContourParams(gamma=4.0, r=50.0, R=50.0))

    def test_zeta_mismatch_rejected(self):
        trip = bm_gamma(alpha=1.0, beta=1.0, sigma=1.0)  # zeta 0.9
        put = make_put(K=K, zeta=0.7)
        with pytest.raises(AdmissibilityViolation):
            compute_g_point(trip, put, 0.5, ContourParams(gamma=4.0, r=50.0, R=50.0))

    def test_gamma_must_exceed_zeta(self):
        trip = bm_gamma(alpha=1.0, beta=1.0, sigma=1.0)
        put = make_put(K=K, zeta=0.9)
        with pytest.raises(AdmissibilityViolation):
            compute_g_point(trip, put, 0.5, ContourParams(gamma=0.5, r=50.0, R=50.0))

    def test_x_must_be_positive(self):
        trip = brownian(sigma=1.0, zeta=0.9)
        put = make_put(K=K, zeta=0.9)
        with pytest.raises(UsageError):
            compute_g_point(trip, put, 0.0, ContourParams(gamma=4.0, r=50.0, R=50.0))

    def test_truncation_cap(self):
        trip = brownian(sigma=1.0, zeta=0.9)
        put = make_put(K=K, zeta=0.9)
        with pytest.raises(TruncationCapExceeded):
            compute_g_curve(trip, put, np.array([2.5]), target_err=1e-3)


class TestCurveCertificates:
    def test_bounds_cover_true_error(self):
        # certificate calibrated on this family must stay conservative
        trip = brownian(sigma=1.0, zeta=0.9)
        put = make_put(K=K, zeta=0.9)
        x = np.linspace(0.1, 1.2, 12)
        for r in [45.0, 90.0]:
            image = compute_g_curve(
                trip, put, x, params=ContourParams(gamma=4.0, r=r, R=r, method="dense")
            )
            true_err = np.abs(image.g_values - reflection_oracle(x))
            assert np.all(true_err <= image.error_bounds)

    def test_target_error_ladder(self):
        trip = brownian(sigma=1.0, zeta=0.9)
        put = make_put(K=K, zeta=0.9)
        x = np.linspace(0.1, 1.2, 8)
        image = compute_g_curve(trip, put, x, target_err=1e-3)
        assert np.all(image.error_bounds <= 1e-3)
        assert np.max(np.abs(image.g_values - reflection_oracle(x))) <= 1e-3


class TestStaticHedge:
    def test_put_hedge_is_odd_reflection_for_bm(self):
        trip = brownian(sigma=1.0, zeta=0.9)
        put = make_put(K=K, zeta=0.9)
        x = np.array([-0.5, 0.0, 0.5])
        hedge = static_hedge_payoff(
            trip, put, x, params=ContourParams(gamma=4.0, r=1500.0, R=1500.0, method="split")
        )
        assert hedge.values[0] == pytest.approx(0.3, abs=1e-12)  # h(-0.5)
        assert hedge.values[1] == 0.0
        assert hedge.values[2] == pytest.approx(-0.3, abs=2e-4)  # -g(0.5)


class TestLaplaceIdentity:
    def test_residuals_small_with_jumps(self, bm_gamma_triplet, put_payoff):
        x = np.arange(1, 1201) * 0.005  # (0, 6]
        params = ContourParams(gamma=4.0, r=1200.0, R=1200.0, method="split")
        image = compute_g_curve(bm_gamma_triplet, put_payoff, x, params=params)
        checks = verify_laplace_identity(bm_gamma_triplet, put_payoff, image, [4.5, 5.0, 6.0])
        for c in checks:
            assert c.residual <= 1e-4 * (1.0 + abs(c.rhs))

    def test_w_below_contour_rejected(self, bm_gamma_triplet, put_payoff):
        x = np.arange(1, 400) * 0.01
        params = ContourParams(gamma=4.0, r=300.0, R=300.0, method="split")
        image = compute_g_curve(bm_gamma_triplet, put_payoff, x, params=params)
        with pytest.raises(AdmissibilityViolation):
            verify_laplace_identity(bm_gamma_triplet, put_payoff, image, [4.2])

    def test_short_grid_rejected(self, bm_gamma_triplet, put_payoff):
        from wrp.errors import InsufficientGrid

        x = np.arange(1, 150) * 0.01  # stops at 1.5, tail too heavy
        params = ContourParams(gamma=4.0, r=300.0, R=300.0, method="split")
        image = compute_g_curve(bm_gamma_triplet, put_payoff, x, params=params)
        with pytest.raises(InsufficientGrid):
            verify_laplace_identity(bm_gamma_triplet, put_payoff, image, [4.5])
