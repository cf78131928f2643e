"""Spectrally negative Levy models and their Laplace exponents.

A model is a triplet (mu, sigma, jump measure) together with a declared
exponential-moment abscissa zeta >= 0.  The Laplace exponent

    psi(lam) = mu lam + sigma^2 lam^2 / 2
               + int_{(-inf,0)} (e^{lam x} - 1 - lam x) Pi(dx)

is evaluated on the half plane Re(lam) >= -zeta, where the defining
integral converges whenever the model passes admissibility.  Jumps are
compensated with the full x, so mu is the mean slope: psi'(0) = mu.
"""
from __future__ import annotations

import dataclasses
import math

import numpy as np
import scipy.special

from .errors import AdmissibilityViolation, BranchCutViolation

__all__ = [
    "GammaNegativeJumps",
    "TabulatedJumps",
    "LevyTriplet",
    "AdmissibilityCheck",
    "AdmissibilityReport",
    "psi",
    "psi_prime",
    "psi_second",
    "validate_admissibility",
    "denominator_floor",
    "bm_gamma",
    "brownian",
]

_ABSCISSA_TOL = 1e-12


@dataclasses.dataclass(frozen=True)
class GammaNegativeJumps:
    """Jump measure Pi(dx) = beta exp(alpha x) / |x| dx on x < 0.

    The subordinator it generates is a Gamma process mirrored to the
    negative axis; all jump moments and the compensated integral have
    closed forms through the principal-branch logarithm.
    """

    alpha: float
    beta: float
    kind = "gamma_negative"

    def __post_init__(self):
        if not (self.alpha > 0.0 and self.beta > 0.0):
            raise AdmissibilityViolation(
                f"gamma jump family needs alpha > 0 and beta > 0, got alpha={self.alpha}, beta={self.beta}"
            )

    def density(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        neg = x < 0.0
        out[neg] = self.beta * np.exp(self.alpha * x[neg]) / np.abs(x[neg])
        return out

    def guard(self, lam):
        # principal branch of log(1 + lam/alpha) is cut along lam <= -alpha
        on_cut = (lam.imag == 0.0) & (lam.real <= -self.alpha)
        if np.any(on_cut):
            bad = lam[on_cut][0]
            raise BranchCutViolation(
                f"lambda={bad} lies on the branch cut (-inf, {-self.alpha}] of the jump exponent",
                hint="keep Re(lambda) > -alpha or move off the real axis",
            )

    def psi_jump(self, lam):
        # int (e^{lam x} - 1 - lam x) Pi(dx) = beta (lam/alpha - log(1 + lam/alpha))
        w = lam / self.alpha
        return self.beta * (w - np.log(1.0 + w))

    def psi_prime_jump(self, lam):
        return self.beta * lam / (self.alpha * (self.alpha + lam))

    def psi_second_jump(self, lam):
        return self.beta / (self.alpha + lam) ** 2

    def exp_tail(self, zeta):
        # int_{x <= -1} e^{-zeta x} Pi(dx); finite iff zeta < alpha
        if zeta >= self.alpha:
            return math.inf
        return self.beta * scipy.special.exp1(self.alpha - zeta) if zeta < self.alpha else math.inf

    def small_jump_variance(self):
        # int_{-1 < x < 0} x^2 Pi(dx)
        a, b = self.alpha, self.beta
        return b * (1.0 - (1.0 + a) * math.exp(-a)) / a**2


@dataclasses.dataclass(frozen=True, eq=False)
class TabulatedJumps:
    """Jump density declared on a finite grid of negative abscissas.

    The measure is the piecewise linear interpolant of ``values`` on
    ``grid`` and zero outside the grid span.  All integrals against it
    use fixed per-cell Gauss-Legendre nodes, so the quadrature error is
    set by the grid resolution, not by the requesting operation.
    """

    grid: np.ndarray
    values: np.ndarray
    kind = "tabulated"

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if grid.ndim != 1 or grid.size < 2 or values.shape != grid.shape:
            raise AdmissibilityViolation("tabulated jumps need matching 1-d grid and values")
        if not np.all(np.diff(grid) > 0.0):
            raise AdmissibilityViolation("tabulated jump grid must be strictly increasing")
        if grid[-1] >= 0.0:
            raise AdmissibilityViolation("tabulated jump grid must lie strictly below zero")
        if np.any(values < 0.0):
            raise AdmissibilityViolation("tabulated jump density must be nonnegative")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        gl_x, gl_w = np.polynomial.legendre.leggauss(5)
        left, right = grid[:-1], grid[1:]
        half = 0.5 * (right - left)
        mid = 0.5 * (right + left)
        nodes = (mid[:, None] + half[:, None] * gl_x[None, :]).ravel()
        frac = ((nodes.reshape(-1, 5) - left[:, None]) / (2.0 * half[:, None])).ravel()
        dens = (values[:-1, None] * (1.0 - frac.reshape(-1, 5)) + values[1:, None] * frac.reshape(-1, 5)).ravel()
        weights = (half[:, None] * gl_w[None, :]).ravel() * dens
        object.__setattr__(self, "_xq", nodes)
        object.__setattr__(self, "_mq", weights)

    def density(self, x):
        return np.interp(np.asarray(x, dtype=float), self.grid, self.values, left=0.0, right=0.0)

    def guard(self, lam):
        return None  # compactly supported measure, no branch cut

    def _exp_nodes(self, lam):
        lam = np.asarray(lam)
        return np.exp(lam[..., None] * self._xq)

    def psi_jump(self, lam):
        lam = np.asarray(lam)
        integ = self._exp_nodes(lam) - 1.0 - lam[..., None] * self._xq
        return integ @ self._mq

    def psi_prime_jump(self, lam):
        lam = np.asarray(lam)
        integ = self._xq * (self._exp_nodes(lam) - 1.0)
        return integ @ self._mq

    def psi_second_jump(self, lam):
        integ = self._xq**2 * self._exp_nodes(lam)
        return integ @ self._mq

    def exp_tail(self, zeta):
        mask = self._xq <= -1.0
        return float(np.sum(self._mq[mask] * np.exp(-zeta * self._xq[mask])))

    def small_jump_variance(self):
        mask = self._xq > -1.0
        return float(np.sum(self._mq[mask] * self._xq[mask] ** 2))


@dataclasses.dataclass(frozen=True)
class LevyTriplet:
    """Model parameters plus the declared tilt abscissa zeta.

    zeta is the exponential order shared by the payoff transform and
    every contour that evaluates psi left of the imaginary axis.
    """

    mu: float
    sigma: float
    jumps: GammaNegativeJumps | TabulatedJumps | None = None
    zeta: float = 0.0

    def __post_init__(self):
        if not (self.sigma > 0.0):
            raise AdmissibilityViolation(f"sigma must be positive, got {self.sigma}")
        if self.zeta < 0.0:
            raise AdmissibilityViolation(f"zeta must be nonnegative, got {self.zeta}")


def _prepare(lam):
    arr = np.asarray(lam)
    scalar = arr.ndim == 0
    real_input = not np.iscomplexobj(arr)
    return np.atleast_1d(arr).astype(complex), scalar, real_input


def _guard_domain(triplet: LevyTriplet, lam: np.ndarray):
    if triplet.jumps is not None:
        triplet.jumps.guard(lam)
    below = lam.real < -triplet.zeta - _ABSCISSA_TOL
    if np.any(below):
        bad = lam[below][0]
        raise AdmissibilityViolation(
            f"Re(lambda)={bad.real} below the declared abscissa -zeta={-triplet.zeta}",
            hint="raise zeta on the triplet or move the contour right",
        )


def _finish(vals, scalar, real_input):
    if real_input:
        vals = vals.real
    if scalar:
        return vals[0] if not real_input else float(vals[0])
    return vals


def psi(triplet: LevyTriplet, lam):
    """Laplace exponent, vectorized over ``lam``.

    Raises
    ------
    AdmissibilityViolation
        If any Re(lam) < -zeta.
    BranchCutViolation
        If any lam falls on the jump exponent's branch cut.
    """
    arr, scalar, real_input = _prepare(lam)
    _guard_domain(triplet, arr)
    with np.errstate(under="ignore"):
        vals = triplet.mu * arr + 0.5 * triplet.sigma**2 * arr**2
        if triplet.jumps is not None:
            vals = vals + triplet.jumps.psi_jump(arr)
    return _finish(vals, scalar, real_input)


def psi_prime(triplet: LevyTriplet, lam):
    """Derivative of the Laplace exponent; psi_prime(0) = mu."""
    arr, scalar, real_input = _prepare(lam)
    _guard_domain(triplet, arr)
    with np.errstate(under="ignore"):
        vals = triplet.mu + triplet.sigma**2 * arr
        if triplet.jumps is not None:
            vals = vals + triplet.jumps.psi_prime_jump(arr)
    return _finish(vals, scalar, real_input)


def psi_second(triplet: LevyTriplet, lam):
    """Second derivative; psi_second(0) is the variance rate."""
    arr, scalar, real_input = _prepare(lam)
    _guard_domain(triplet, arr)
    vals = triplet.sigma**2 + np.zeros_like(arr)
    if triplet.jumps is not None:
        vals = vals + triplet.jumps.psi_second_jump(arr)
    return _finish(vals, scalar, real_input)


@dataclasses.dataclass(frozen=True)
class AdmissibilityCheck:
    name: str
    passed: bool
    value: float | None = None
    note: str = ""


@dataclasses.dataclass(frozen=True)
class AdmissibilityReport:
    zeta: float
    checks: tuple[AdmissibilityCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def validate_admissibility(triplet: LevyTriplet) -> AdmissibilityReport:
    """Check the moment and regularity conditions at the declared zeta.

    Returns a report instead of raising, so callers can surface every
    failing condition at once.
    """
    checks = [
        AdmissibilityCheck("sigma_positive", triplet.sigma > 0.0, triplet.sigma),
        AdmissibilityCheck("zeta_nonnegative", triplet.zeta >= 0.0, triplet.zeta),
    ]
    if triplet.jumps is None:
        checks.append(AdmissibilityCheck("exponential_moment", True, 0.0, "no jump component"))
        checks.append(AdmissibilityCheck("small_jump_variance", True, 0.0, "no jump component"))
    else:
        tail = triplet.jumps.exp_tail(triplet.zeta)
        checks.append(
            AdmissibilityCheck(
                "exponential_moment",
                math.isfinite(tail),
                tail,
                "int_{x<=-1} e^{-zeta x} Pi(dx) must be finite",
            )
        )
        sj = triplet.jumps.small_jump_variance()
        checks.append(
            AdmissibilityCheck("small_jump_variance", math.isfinite(sj), sj, "int_{-1<x<0} x^2 Pi(dx)")
        )
    return AdmissibilityReport(zeta=triplet.zeta, checks=tuple(checks))


def denominator_floor(triplet: LevyTriplet, gamma: float, u_range=(-10.0, 10.0), z_range=(-10.0, 10.0), n: int = 401) -> float:
    """Grid minimum of |psi(gamma+iu) - psi(-zeta-iz)|.

    Diagnostic for contour placement: the symmetry kernel divides by
    this difference, so a floor near zero flags a resonant choice of
    gamma.  The scan is a coarse certificate, not a proof.
    """
    u = np.linspace(u_range[0], u_range[1], n)
    z = np.linspace(z_range[0], z_range[1], n)
    a = psi(triplet, gamma + 1j * u)
    b = psi(triplet, -triplet.zeta - 1j * z)
    return float(np.min(np.abs(a[:, None] - b[None, :])))


def bm_gamma(alpha: float, beta: float, sigma: float, zeta: float | None = None, mu: float | None = None) -> LevyTriplet:
    """Brownian motion minus a Gamma subordinator.

    Defaults: mu = -beta/alpha (so the jump compensator cancels the
    subordinator mean) and zeta = 0.9 alpha, safely inside the moment
    region zeta < alpha.
    """
    if zeta is None:
        zeta = 0.9 * alpha
    if mu is None:
        mu = -beta / alpha
    return LevyTriplet(mu=mu, sigma=sigma, jumps=GammaNegativeJumps(alpha=alpha, beta=beta), zeta=zeta)


def brownian(sigma: float, zeta: float = 0.0, mu: float = 0.0) -> LevyTriplet:
    """Pure Brownian model; admissible at every zeta >= 0."""
    return LevyTriplet(mu=mu, sigma=sigma, jumps=None, zeta=zeta)
