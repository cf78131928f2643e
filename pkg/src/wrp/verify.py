"""Named end-to-end checks pairing independent routes to the same number.

Every check pits the mapped-payoff machinery against a second route it
cannot share code with: a closed-form reflection, a Laplace-transform
identity, a direct density expectation, or a Monte Carlo estimate.  Each
one reports a scalar ``value`` and the ``tolerance`` it must stay below
(the convergence check reports a log-log slope and must stay below a
negative ceiling).  ``run_suite`` bundles them into a report; ``quick``
keeps every check to a few seconds, ``full`` runs the signoff sizes and
takes several minutes, almost all of it Monte Carlo.

Shared work: the joint-law lattice is built once and reused by the
collapse and Monte Carlo checks, and both Monte Carlo checks read the
same path batch.  The batch simulation cost is attributed to the
``mc_joint`` runtime; ``mc_hedge`` pays only for its hedge curve and
estimator passes.
"""

from __future__ import annotations

import dataclasses
import math
import time

import numpy as np

from .density import marginal_cdf
from .joint import InnerIntegralCache, JointLawQuery, build_joint_cache, joint_probability
from .levy import LevyTriplet, bm_gamma, brownian
from .mc import PathBatch, SimConfig, estimate_joint, grid_interpolant, simulate
from .payoff import make_indicator, make_put
from .symmetry import (
    ContourParams,
    compute_g_curve,
    compute_g_point,
    static_hedge_payoff,
    verify_laplace_identity,
)
from .joint import pair_g_with_density

__all__ = [
    "VerifyCheck",
    "VerifyReport",
    "check_convergence_slope",
    "check_laplace_identity",
    "check_mc_hedge",
    "check_mc_joint",
    "check_pairing_identity",
    "check_pure_bm_reflection",
    "check_x0_collapse",
    "run_suite",
]

# reference configuration used by every check: the jump-diffusion with
# unit diffusion and unit-rate negative Gamma jumps, a put struck below
# the barrier, and the tilt both payoff factories default to
_K = -0.2
_ZETA = 0.9
_DEFAULT_SEED = 1729

CHECK_NAMES = (
    "laplace_identity",
    "pure_bm_reflection",
    "pairing_identity",
    "x0_collapse",
    "mc_joint",
    "mc_hedge",
    "convergence_slope",
)


def _model() -> LevyTriplet:
    return bm_gamma(alpha=1.0, beta=1.0, sigma=1.0, zeta=_ZETA)


@dataclasses.dataclass(frozen=True)
class VerifyCheck:
    """One named identity: scalar value, the bound it must meet, verdict."""

    name: str
    value: float
    tolerance: float
    passed: bool
    runtime_seconds: float

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "value": self.value,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "runtime_seconds": self.runtime_seconds,
        }


@dataclasses.dataclass(frozen=True)
class VerifyReport:
    suite: str
    checks: tuple[VerifyCheck, ...]

    @property
    def overall_pass(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self) -> dict:
        return {
            "schema_version": 1,
            "suite": self.suite,
            "overall_pass": self.overall_pass,
            "checks": [c.as_dict() for c in self.checks],
        }


def check_laplace_identity(
    *,
    grid_step: float = 0.005,
    grid_points: int = 1200,
    truncation: float = 1200.0,
    w_values: tuple[float, ...] = (4.5, 5.0, 6.0),
    tolerance: float = 1e-3,
) -> VerifyCheck:
    """Laplace transform of the image versus the contour profile.

    The image is computed on a uniform grid and transformed numerically;
    the profile route never leaves the contour.  Reported value is the
    worst relative residual over ``w_values``.
    """
    tic = time.perf_counter()
    trip = _model()
    put = make_put(K=_K, zeta=_ZETA)
    x = np.arange(1, grid_points + 1) * grid_step
    params = ContourParams(gamma=4.0, r=truncation, R=truncation, method="split")
    image = compute_g_curve(trip, put, x, params=params)
    checks = verify_laplace_identity(trip, put, image, list(w_values))
    value = max(c.residual / abs(c.rhs) for c in checks)
    return VerifyCheck(
        name="laplace_identity",
        value=float(value),
        tolerance=float(tolerance),
        passed=bool(value <= tolerance),
        runtime_seconds=time.perf_counter() - tic,
    )


def check_pure_bm_reflection(
    *,
    x_values=None,
    truncation: float = 16000.0,
    tolerance: float = 1e-4,
) -> VerifyCheck:
    """Drop the jumps: the image must collapse to the mirrored payoff.

    For driftless Brownian motion the mapping is the classical
    reflection g(x) = h(-x), so every contour ingredient is checked
    against one closed form.  Value is the worst absolute deviation.
    """
    tic = time.perf_counter()
    if x_values is None:
        x_values = np.arange(1, 21) * 0.1
    x = np.asarray(x_values, dtype=float)
    trip = brownian(sigma=1.0, zeta=_ZETA)
    put = make_put(K=_K, zeta=_ZETA)
    params = ContourParams(gamma=4.0, r=truncation, R=truncation, method="split")
    image = compute_g_curve(trip, put, x, params=params)
    mirrored = np.maximum(_K + x, 0.0)
    value = float(np.max(np.abs(image.g_values - mirrored)))
    return VerifyCheck(
        name="pure_bm_reflection",
        value=value,
        tolerance=float(tolerance),
        passed=bool(value <= tolerance),
        runtime_seconds=time.perf_counter() - tic,
    )


def check_pairing_identity(
    *,
    t_values: tuple[float, ...] = (0.25, 1.0, 4.0),
    include_indicator: bool = True,
    tolerance: float = 1e-4,
) -> VerifyCheck:
    """<g, p_t> against the direct expectation of h under p_t.

    The pairing route sums the lattice against exp(t psi); the direct
    route integrates the untransformed payoff against the inverted
    density.  Value is the worst residual scaled by 1 + |expectation|.
    """
    tic = time.perf_counter()
    trip = _model()
    payoffs = [make_put(K=_K, zeta=_ZETA)]
    if include_indicator:
        payoffs.append(make_indicator(K=_K, zeta=_ZETA))
    worst = 0.0
    for payoff in payoffs:
        for t in t_values:
            chk = pair_g_with_density(trip, payoff, float(t))
            worst = max(worst, chk.residual / (1.0 + abs(chk.expectation)))
    return VerifyCheck(
        name="pairing_identity",
        value=float(worst),
        tolerance=float(tolerance),
        passed=bool(worst <= tolerance),
        runtime_seconds=time.perf_counter() - tic,
    )


def check_x0_collapse(
    *,
    cache: InnerIntegralCache | None = None,
    tolerance: float = 1e-5,
) -> VerifyCheck:
    """At x = 0 the joint law must equal the plain terminal law.

    The barrier constraint is vacuous when the process starts on it, so
    P(X_1 <= K, max <= 0) collapses to the marginal CDF at K.
    """
    tic = time.perf_counter()
    trip = _model()
    if cache is None:
        cache = build_joint_cache(trip, _K, t_min=1.0, t_max=1.0, x_max=0.2)
    lhs = joint_probability(trip, JointLawQuery(K=_K, x=0.0, T=1.0), cache)
    rhs = marginal_cdf(trip, 1.0, _K)
    value = abs(lhs - rhs)
    return VerifyCheck(
        name="x0_collapse",
        value=float(value),
        tolerance=float(tolerance),
        passed=bool(value <= tolerance),
        runtime_seconds=time.perf_counter() - tic,
    )


def check_mc_joint(
    *,
    n_paths: int = 100_000,
    n_steps: int = 1000,
    companion_steps: int = 100,
    seed: int = _DEFAULT_SEED,
    threads: int = 1,
    cache: InnerIntegralCache | None = None,
) -> tuple[VerifyCheck, PathBatch, float]:
    """Monte Carlo joint frequency against the lattice probability.

    Paths use exact increments; the remaining discretisation bias lives
    in the running-max sampling, so the allowance is the observed shift
    between a coarse companion run and the fine run.  Returns the fine
    batch and the allowance for reuse by the hedge check.
    """
    tic = time.perf_counter()
    trip = _model()
    if cache is None:
        cache = build_joint_cache(trip, _K, t_min=1.0, t_max=1.0, x_max=0.2)
    analytic = joint_probability(trip, JointLawQuery(K=_K, x=0.1, T=1.0), cache)
    batch = simulate(trip, SimConfig(n_paths=n_paths, n_steps=n_steps, T=1.0, seed=seed), threads=threads)
    companion = simulate(
        trip,
        SimConfig(n_paths=n_paths, n_steps=companion_steps, T=1.0, seed=seed + 1),
        threads=threads,
    )
    p_fine, se = estimate_joint(batch, _K, 0.1)
    p_coarse, _ = estimate_joint(companion, _K, 0.1)
    allowance = abs(p_fine - p_coarse)
    value = abs(p_fine - analytic)
    tolerance = 3.0 * se + allowance
    check = VerifyCheck(
        name="mc_joint",
        value=float(value),
        tolerance=float(tolerance),
        passed=bool(value <= tolerance),
        runtime_seconds=time.perf_counter() - tic,
    )
    return check, batch, allowance


def check_mc_hedge(
    batch: PathBatch,
    allowance: float,
    *,
    barrier_start: float = -0.1,
    curve_step: float = 0.025,
    truncation: float = 16000.0,
) -> VerifyCheck:
    """Knocked-out put versus its static European replica on common paths.

    The barrier leg pays (K - S_T)^+ only if the path never reaches the
    barrier; the replica holds h below the barrier and the negated image
    above it.  On common paths the difference is mean zero, so the check
    is a paired test: |mean difference| against three standard errors
    plus the discretisation allowance plus a curve-error budget.

    The image grows like exp(Phi(0) x), so the replica leg is heavy
    tailed and the paired standard error self-calibrates the bound.  The
    curve is trusted only where paths actually land (the terminal right
    tail is sub-Gaussian because jumps are one-sided); its truncation
    error is budgeted from a contour-doubling gap mapped through the
    path sample, geometric-tail factor included.
    """
    tic = time.perf_counter()
    trip = _model()
    put = make_put(K=_K, zeta=_ZETA)
    shifted = barrier_start + batch.terminal
    lo = math.floor(shifted.min() / curve_step) - 1
    hi = math.ceil(shifted.max() / curve_step) + 1
    x_grid = np.arange(lo, hi + 1) * curve_step
    params = ContourParams(gamma=4.0, r=truncation, R=truncation, method="split")
    curve = static_hedge_payoff(trip, put, x_grid, params=params)
    replica = grid_interpolant(curve.x_grid, curve.values)
    alive = batch.running_max < -barrier_start
    diff = put.h(shifted) * alive - replica(shifted)
    value = abs(float(diff.mean()))
    se = float(diff.std(ddof=1)) / math.sqrt(diff.size)
    # doubling gap on the positive nodes; slope <= -0.8 in the contour
    # length makes the remaining tail at most gap / (1 - 2^-0.8)
    pos = curve.image.x_grid
    doubled = ContourParams(gamma=4.0, r=2.0 * truncation, R=2.0 * truncation, method="split")
    gap = np.abs(curve.image.g_values - compute_g_curve(trip, put, pos, params=doubled).g_values)
    gap_at = grid_interpolant(pos, gap / (1.0 - 2.0**-0.8))
    above = shifted > float(pos[0])
    curve_budget = float(np.sum(gap_at(shifted[above]))) / diff.size
    tolerance = 3.0 * se + allowance + curve_budget
    return VerifyCheck(
        name="mc_hedge",
        value=float(value),
        tolerance=float(tolerance),
        passed=bool(value <= tolerance),
        runtime_seconds=time.perf_counter() - tic,
    )


def check_convergence_slope(
    *,
    truncations: tuple[float, ...] = (15.0, 30.0, 60.0, 120.0),
    reference_truncation: float = 240.0,
    x: float = 1.0,
    ceiling: float = -0.8,
) -> VerifyCheck:
    """Truncation error must decay like a power of the contour length.

    The image at one point is recomputed under nested truncations and
    compared with the longest one; the fitted log-log slope is the
    reported value and must sit at or below the ceiling.
    """
    tic = time.perf_counter()
    trip = _model()
    put = make_put(K=_K, zeta=_ZETA)

    def at(r: float) -> float:
        params = ContourParams(gamma=4.0, r=r, R=r)
        return compute_g_point(trip, put, x, params).value

    reference = at(reference_truncation)
    gaps = np.array([max(abs(at(r) - reference), 1e-16) for r in truncations])
    slope = float(np.polyfit(np.log(np.asarray(truncations)), np.log(gaps), 1)[0])
    return VerifyCheck(
        name="convergence_slope",
        value=slope,
        tolerance=float(ceiling),
        passed=bool(slope <= ceiling),
        runtime_seconds=time.perf_counter() - tic,
    )


def run_suite(suite: str = "quick", *, seed: int = _DEFAULT_SEED, threads: int = 1) -> VerifyReport:
    """Run every named check at ``quick`` or ``full`` sizes."""
    if suite not in ("quick", "full"):
        from .errors import UsageError

        raise UsageError(f"unknown suite {suite!r}", hint="choose quick or full")
    full = suite == "full"
    trip = _model()
    cache = build_joint_cache(trip, _K, t_min=1.0, t_max=1.0, x_max=0.2)

    laplace = check_laplace_identity(
        grid_step=0.005 if full else 0.01,
        grid_points=1200 if full else 600,
        truncation=1200.0 if full else 600.0,
        w_values=(4.5, 5.0, 6.0) if full else (5.0,),
    )
    reflection = check_pure_bm_reflection(
        x_values=np.arange(1, 21) * 0.1 if full else np.array([0.25, 0.75, 1.5]),
        truncation=16000.0 if full else 1000.0,
    )
    pairing = check_pairing_identity(
        t_values=(0.25, 1.0, 4.0) if full else (1.0,),
        include_indicator=True,
    )
    collapse = check_x0_collapse(cache=cache)
    mc_joint_check, batch, allowance = check_mc_joint(
        n_paths=1_000_000 if full else 100_000,
        n_steps=10_000 if full else 1000,
        companion_steps=1000 if full else 100,
        seed=seed,
        threads=threads,
        cache=cache,
    )
    hedge = check_mc_hedge(batch, allowance)
    slope = check_convergence_slope()
    return VerifyReport(
        suite=suite,
        checks=(laplace, reflection, pairing, collapse, mc_joint_check, hedge, slope),
    )
