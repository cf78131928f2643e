from __future__ import annotations

import math

import numpy as np
import pytest
import scipy.integrate
from hypothesis import given, strategies as st

from wrp.errors import AdmissibilityViolation, BranchCutViolation
from wrp.levy import (
    GammaNegativeJumps,
    LevyTriplet,
    TabulatedJumps,
    bm_gamma,
    brownian,
    denominator_floor,
    psi,
    psi_prime,
    psi_second,
    validate_admissibility,
)

# Reference model used throughout: sigma = alpha = beta = 1, mu = -1,
# so psi(lam) = lam^2/2 - log(1 + lam).


@pytest.fixture(scope="module")
def ref():
    return bm_gamma(alpha=1.0, beta=1.0, sigma=1.0)


class TestLaplaceExponentValues:
    def test_psi_at_zero_is_zero(self, ref):
        assert psi(ref, 0.0) == 0.0

    def test_psi_at_one(self, ref):
        # lam^2/2 - log(1 + lam) at lam = 1
        assert psi(ref, 1.0) == pytest.approx(0.5 - math.log(2.0), abs=1e-14)

    def test_psi_prime_at_one(self, ref):
        # sigma^2 lam - beta/(alpha + lam) at lam = 1
        assert psi_prime(ref, 1.0) == pytest.approx(0.5, abs=1e-14)

    def test_psi_prime_at_four(self, ref):
        assert psi_prime(ref, 4.0) == pytest.approx(3.8, abs=1e-14)

    def test_psi_second_at_zero(self, ref):
        # sigma^2 + beta/(alpha + lam)^2 at lam = 0
        assert psi_second(ref, 0.0) == pytest.approx(2.0, abs=1e-14)

    def test_pure_bm_complex_value(self):
        bm = brownian(sigma=1.0)
        assert psi(bm, 2.0 + 3.0j) == pytest.approx(-2.5 + 6.0j, abs=1e-14)

    def test_pure_bm_derivative_complex(self):
        bm = brownian(sigma=1.0)
        assert psi_prime(bm, 1.0j) == pytest.approx(1.0j, abs=1e-14)

    def test_general_drift_form(self):
        # mu decoupled from the compensator: psi = mu lam + lam^2/2 + beta(lam/alpha - log(1+lam/alpha))
        trip = LevyTriplet(mu=0.3, sigma=1.2, jumps=GammaNegativeJumps(alpha=2.0, beta=0.7), zeta=1.0)
        lam = 1.7
        expect = 0.3 * lam + 0.72 * lam**2 + 0.7 * (lam / 2.0 - math.log1p(lam / 2.0))
        assert psi(trip, lam) == pytest.approx(expect, rel=1e-14)

    def test_vectorized_matches_scalar(self, ref):
        lams = np.array([0.5, 1.0, 4.0 + 2.0j, 4.0 - 7.0j])
        vals = psi(ref, lams)
        for lam, val in zip(lams, vals):
            assert val == pytest.approx(psi(ref, complex(lam)), rel=1e-15)


class TestDomainGuards:
    def test_branch_cut_rejected(self, ref):
        with pytest.raises(BranchCutViolation):
            psi(ref, -2.0)

    def test_branch_cut_endpoint_rejected(self, ref):
        with pytest.raises(BranchCutViolation):
            psi(ref, -1.0)

    def test_off_cut_below_abscissa_rejected(self, ref):
        # analytic point, but below the declared exponential moment abscissa
        with pytest.raises(AdmissibilityViolation):
            psi(ref, -0.95 + 0.5j)

    def test_boundary_abscissa_allowed(self, ref):
        val = psi(ref, -0.9 - 0.3j)
        assert np.isfinite(val.real) and np.isfinite(val.imag)

    def test_vector_with_one_bad_entry(self, ref):
        with pytest.raises(AdmissibilityViolation):
            psi(ref, np.array([1.0, -0.95 + 0.5j]))

    def test_sigma_must_be_positive(self):
        with pytest.raises(AdmissibilityViolation):
            LevyTriplet(mu=0.0, sigma=0.0, jumps=None, zeta=0.0)

    def test_negative_zeta_rejected(self):
        with pytest.raises(AdmissibilityViolation):
            LevyTriplet(mu=0.0, sigma=1.0, jumps=None, zeta=-0.1)


class TestAdmissibilityReport:
    def test_reference_model_passes(self, ref):
        report = validate_admissibility(ref)
        assert report.passed
        names = {c.name for c in report.checks}
        assert "exponential_moment" in names

    def test_zeta_at_alpha_fails_without_raising(self):
        trip = bm_gamma(alpha=1.0, beta=1.0, sigma=1.0, zeta=1.2)
        report = validate_admissibility(trip)
        assert not report.passed
        failed = [c for c in report.checks if not c.passed]
        assert any("exponential_moment" == c.name for c in failed)

    def test_pure_bm_any_zeta(self):
        report = validate_admissibility(brownian(sigma=2.0, zeta=37.0))
        assert report.passed


class TestDenominatorFloor:
    def test_pure_bm_floor_is_eight(self):
        # |psi(4+iu) - psi(-iz)| = 0.5*sqrt((16 - u^2 + z^2)^2 + 64 u^2) >= 8,
        # attained at u = z = 0.
        bm = brownian(sigma=1.0, zeta=0.0)
        floor = denominator_floor(bm, gamma=4.0)
        assert floor == pytest.approx(8.0, rel=1e-12)

    def test_gamma_zero_floor_vanishes(self):
        bm = brownian(sigma=1.0, zeta=0.0)
        assert denominator_floor(bm, gamma=0.0) == pytest.approx(0.0, abs=1e-12)

    def test_reference_floor_positive(self, ref):
        assert denominator_floor(ref, gamma=4.0) > 1.0


class TestTabulatedJumps:
    def test_matches_closed_form(self, ref):
        # same Gamma jump density declared as a table; interpolation bias
        # scales like the squared log-step, so 50k points buys ~5e-7.
        # Near the abscissa the integrand decays like e^{-0.1|x|}, so the
        # declared span must reach -140 to keep its own tail below 1e-8.
        x = -np.logspace(np.log10(1e-7), np.log10(140.0), 50_000)[::-1]
        vals = np.exp(x) / np.abs(x)
        tab = LevyTriplet(mu=-1.0, sigma=1.0, jumps=TabulatedJumps(grid=x, values=vals), zeta=0.9)
        for lam in [0.7, 4.0, 4.0 + 11.0j, -0.9 - 3.0j]:
            a = psi(tab, lam)
            b = psi(ref, lam)
            assert abs(a - b) <= 1e-6 * (1.0 + abs(b))

    def test_quadrature_against_scipy(self):
        # independent oracle for the compensated jump integral
        alpha, beta, lam = 1.3, 0.8, 2.5
        x = -np.logspace(np.log10(1e-7), np.log10(60.0), 50_000)[::-1]
        tab = TabulatedJumps(grid=x, values=beta * np.exp(alpha * x) / np.abs(x))
        val = tab.psi_jump(np.array([lam]))[0]
        oracle, err = scipy.integrate.quad(
            lambda s: (math.exp(lam * s) - 1.0 - lam * s) * beta * math.exp(alpha * s) / abs(s),
            -60.0,
            -1e-12,
            limit=400,
        )
        assert abs(val - oracle) <= 1e-6 * (1.0 + abs(oracle))

    def test_grid_must_be_negative(self):
        with pytest.raises(AdmissibilityViolation):
            TabulatedJumps(grid=np.array([-1.0, 0.5]), values=np.array([1.0, 1.0]))


complex_points = st.builds(
    complex,
    st.floats(min_value=-0.85, max_value=25.0),
    st.floats(min_value=-40.0, max_value=40.0),
)


class TestInvariants:
    @given(lam=complex_points)
    def test_conjugate_symmetry(self, ref, lam):
        a = psi(ref, np.conj(lam))
        b = np.conj(psi(ref, lam))
        assert abs(a - b) <= 1e-12 * (1.0 + abs(b))

    @given(lam=st.floats(min_value=0.0, max_value=30.0))
    def test_real_on_nonnegative_reals(self, ref, lam):
        val = psi(ref, lam)
        assert isinstance(val, float) or abs(np.imag(val)) == 0.0

    @given(lam=complex_points)
    def test_derivative_consistent_with_difference_quotient(self, ref, lam):
        h = 1e-5
        with np.errstate(under="ignore"):
            fd = (psi(ref, lam + h) - psi(ref, lam - h)) / (2.0 * h)
        assert abs(fd - psi_prime(ref, lam)) <= 1e-6 * (1.0 + abs(fd))

    def test_quadratic_growth_along_contour(self, ref):
        # |psi(gamma + iu)| ~ sigma^2 u^2 / 2 for large |u|
        u = np.logspace(2, 4, 25)
        ratio = np.abs(psi(ref, 4.0 + 1j * u)) / u**2
        assert np.all(ratio < 10.0 * 0.5) and np.all(ratio > 0.5 / 10.0)


class TestConstructors:
    def test_bm_gamma_defaults(self):
        trip = bm_gamma(alpha=2.0, beta=0.5, sigma=1.1)
        assert trip.mu == pytest.approx(-0.25)
        assert trip.zeta == pytest.approx(1.8)  # 0.9 * alpha
        assert isinstance(trip.jumps, GammaNegativeJumps)

    def test_brownian_defaults(self):
        trip = brownian(sigma=1.0)
        assert trip.jumps is None and trip.zeta == 0.0
