"""Joint law of the terminal value and the running maximum.

For an admissible model the probability P(X_T <= K + x, sup_{s<=T} X_s >= x)
equals the pairing of the mapped indicator payoff with the shifted
transition density.  On the Bromwich line lambda = gamma + iu that pairing
is a single frequency integral,

    P = (h/2pi) * Re sum_j exp(-lambda_j x + T psi(lambda_j)) * F(lambda_j),

where F(lambda) = int kappa(lambda, z) h_hat(z) dz is the same inner
integral that builds the symmetry image.  F does not depend on x or T, so
it is computed once per model/payoff/contour and cached; every surface
cell afterwards costs one weighted sum over the lattice.

The lattice step is sized from the spectrum of the tilted density (its
x-support sits near T psi'(gamma), plus spread and shift), the cutoff from
the decay of |exp(T psi(gamma + iu))|, both for the worst horizons the
cache was declared for.  Outside that declared envelope the cache refuses
to answer rather than silently degrade.

Conditioning: the summands peak near exp(T psi(gamma)) while the result
stays of order one, so double precision runs out once T psi(gamma) grows
past roughly 35 log(10).  The pairing result carries an explicit roundoff
bound so that wall is visible instead of silent.
"""
from __future__ import annotations

import concurrent.futures
import dataclasses
import time

import numpy as np

from .config import SCHEMA_VERSION, fingerprint, model_dict
from .density import expectation
from .errors import CacheMismatch, OverflowGuard, UsageError
from .levy import LevyTriplet, psi, psi_prime, psi_second
from .payoff import FourierPayoff, make_indicator
from .symmetry import _compose_guard, _halve, _inner_profile, _z_edges, kernel

__all__ = [
    "JointLawQuery",
    "InnerIntegralCache",
    "JointSurface",
    "PairingCheck",
    "build_joint_cache",
    "joint_probability",
    "joint_surface",
    "pair_g_with_density",
    "sensitivity",
]

# relative decay of |exp(T psi)| at the lattice cutoff
_CUT_REL = 1e-16
# truncation target for the inner z integral
_TRUNC_TOL = 3e-7
_R_START = 800.0
_R_CAP = 12800.0
_EXP_ARG_MAX = 700.0
_MAX_ORDER = 4


@dataclasses.dataclass(frozen=True)
class JointLawQuery:
    """Strike offset K < 0, barrier level x >= 0, horizon T > 0."""

    K: float
    x: float
    T: float

    def __post_init__(self):
        if not (self.K < 0.0):
            raise UsageError(f"K must be negative, got {self.K}")
        if not (self.x >= 0.0):
            raise UsageError(f"x must be nonnegative, got {self.x}")
        if not (self.T > 0.0):
            raise UsageError(f"T must be positive, got {self.T}")


@dataclasses.dataclass(frozen=True, eq=False)
class InnerIntegralCache:
    """Inner integrals F(lambda_j) on a uniform Bromwich lattice.

    ``fingerprint`` ties the arrays to the model, payoff, and contour they
    were built from; consumers recompute it and refuse to mix caches.
    ``t_min``/``t_max``/``x_max`` declare the envelope the lattice was
    sized for.
    """

    lambda_grid: np.ndarray
    F_values: np.ndarray
    psi_values: np.ndarray
    step: float
    gamma: float
    zeta: float
    R: float
    quad_tol: float
    inner_error: float
    t_min: float
    t_max: float
    x_max: float
    payoff_params: dict
    fingerprint: str


@dataclasses.dataclass(frozen=True, eq=False)
class JointSurface:
    x_grid: np.ndarray
    T_grid: np.ndarray
    values: np.ndarray
    max_excursion: float
    build_seconds: float
    eval_seconds: float
    cache: InnerIntegralCache


@dataclasses.dataclass(frozen=True)
class PairingCheck:
    """Two routes to E h(X_t): the mapped pairing and the direct density
    expectation, with the roundoff bound of the lattice sum."""

    pairing: float
    expectation: float
    residual: float
    roundoff_bound: float


def _auto_step(triplet: LevyTriplet, gamma: float, t_max: float, x_max: float) -> float:
    drift = max(float(psi_prime(triplet, gamma)), 0.0)
    spread = float(np.sqrt(t_max * psi_second(triplet, gamma)))
    span = t_max * drift + 10.0 * spread + x_max + 25.0
    return min(0.6, 2.0 * np.pi / span)


def _auto_cutoff(triplet: LevyTriplet, gamma: float, t_min: float) -> float:
    peak = float(psi(triplet, gamma))
    u = np.sqrt(2.0 * abs(np.log(_CUT_REL)) / (t_min * triplet.sigma**2))
    for _ in range(40):
        drop = t_min * (psi(triplet, gamma + 1j * u).real - peak)
        if drop < np.log(_CUT_REL):
            return float(u)
        u *= 1.25
    return float(u)


def _auto_truncation(triplet: LevyTriplet, payoff: FourierPayoff, lam: np.ndarray) -> float:
    """Double the z cutoff until an integration-by-parts estimate of the
    neglected |kappa h_hat| tail clears the truncation target."""
    osc = max(abs(payoff.params.get("K", 0.0)), 0.05)
    R = _R_START
    while R < _R_CAP:
        edges = np.array([-R, R])
        mags = np.abs(kernel(triplet, lam, edges) * payoff.h_hat(edges)[None, :])
        tail = 2.0 * float(mags.sum(axis=1).max()) / osc
        if tail <= _TRUNC_TOL:
            break
        R *= 2.0
    return R


def _far_width(payoff: FourierPayoff) -> float:
    osc = max(abs(payoff.params.get("K", 0.0)), 0.35)
    return min(8.0, 2.0 * np.pi / (2.2 * osc))


def build_joint_cache(
    triplet: LevyTriplet,
    payoff_or_strike,
    *,
    t_min: float,
    t_max: float | None = None,
    x_max: float = 0.5,
    gamma: float = 4.0,
    step: float | None = None,
    u_max: float | None = None,
    R: float | None = None,
    quad_tol: float = 1e-9,
    floor_threshold: float = 1e-6,
) -> InnerIntegralCache:
    """Inner integrals on a lattice sized for horizons in [t_min, t_max]
    and barrier levels up to x_max.  A bare strike builds the indicator
    payoff at the triplet's tilt."""
    if isinstance(payoff_or_strike, FourierPayoff):
        payoff = payoff_or_strike
    else:
        payoff = make_indicator(K=float(payoff_or_strike), zeta=triplet.zeta)
    _compose_guard(triplet, payoff, gamma)
    t_max = t_min if t_max is None else t_max
    if not (0.0 < t_min <= t_max):
        raise UsageError(f"need 0 < t_min <= t_max, got [{t_min}, {t_max}]")
    if not (x_max >= 0.0):
        raise UsageError(f"x_max must be nonnegative, got {x_max}")

    if step is None:
        step = _auto_step(triplet, gamma, t_max, x_max)
    if u_max is None:
        u_max = _auto_cutoff(triplet, gamma, t_min)
    n = int(np.ceil(u_max / step))
    lam = gamma + 1j * step * np.arange(-n, n + 1)
    if R is None:
        R = _auto_truncation(triplet, payoff, lam)

    ze = _z_edges(R, triplet.zeta, far_width=_far_width(payoff))
    for _ in range(5):
        F, err = _inner_profile(triplet, payoff, lam, ze, quad_tol, floor_threshold)
        if err <= quad_tol:
            break
        ze = _halve(ze)

    payload = {
        "schema_version": SCHEMA_VERSION,
        "model": model_dict(triplet),
        "payoff": {"schema_version": SCHEMA_VERSION, **payoff.params},
        "contour": {"gamma": gamma, "step": step, "n": n, "R": R, "quad_tol": quad_tol},
    }
    return InnerIntegralCache(
        lambda_grid=lam,
        F_values=F,
        psi_values=psi(triplet, lam),
        step=float(step),
        gamma=float(gamma),
        zeta=float(triplet.zeta),
        R=float(R),
        quad_tol=float(quad_tol),
        inner_error=float(err),
        t_min=float(t_min),
        t_max=float(t_max),
        x_max=float(x_max),
        payoff_params=dict(payoff.params),
        fingerprint=fingerprint(payload),
    )


def _expected_fingerprint(triplet: LevyTriplet, cache: InnerIntegralCache) -> str:
    n = (len(cache.lambda_grid) - 1) // 2
    payload = {
        "schema_version": SCHEMA_VERSION,
        "model": model_dict(triplet),
        "payoff": {"schema_version": SCHEMA_VERSION, **cache.payoff_params},
        "contour": {
            "gamma": cache.gamma,
            "step": cache.step,
            "n": n,
            "R": cache.R,
            "quad_tol": cache.quad_tol,
        },
    }
    return fingerprint(payload)


def _check_cache(triplet: LevyTriplet, query: JointLawQuery, cache: InnerIntegralCache):
    if _expected_fingerprint(triplet, cache) != cache.fingerprint:
        raise CacheMismatch(
            "cache was built for a different model or contour",
            hint="rebuild the cache for this triplet",
        )
    if query.K != cache.payoff_params.get("K"):
        raise CacheMismatch(
            f"cache strike {cache.payoff_params.get('K')} != query strike {query.K}",
            hint="build one cache per strike",
        )
    if not (cache.t_min * (1.0 - 1e-12) <= query.T <= cache.t_max * (1.0 + 1e-12)):
        raise CacheMismatch(
            f"horizon {query.T} outside the cache envelope [{cache.t_min}, {cache.t_max}]",
            hint="rebuild with a wider horizon range",
        )
    if query.x > cache.x_max * (1.0 + 1e-12):
        raise CacheMismatch(
            f"barrier level {query.x} above the cache envelope x_max={cache.x_max}",
            hint="rebuild with a larger x_max",
        )


def _raw_sum(cache: InnerIntegralCache, x: float, T: float, order_x: int = 0, order_T: int = 0):
    """Lattice sum with optional derivative insertions; returns the raw
    (unclipped) value and a roundoff budget.

    The budget charges each term eps * (1 + |exponent|) because rounding
    the argument of exp costs relative error proportional to its size;
    that is exactly the effect that makes long horizons ill conditioned.
    """
    arg_max = float(T * cache.psi_values.real.max() - cache.gamma * x)
    if arg_max > _EXP_ARG_MAX:
        raise OverflowGuard(
            f"exp argument {arg_max:.1f} exceeds double range on the Bromwich lattice",
            hint="shorten the horizon or move the contour",
        )
    with np.errstate(under="ignore"):
        args = -cache.lambda_grid * x + T * cache.psi_values
        weights = np.exp(args)
        if order_x:
            weights = weights * (-cache.lambda_grid) ** order_x
        if order_T:
            weights = weights * cache.psi_values**order_T
        terms = weights * cache.F_values
        budget = float(np.sum(np.abs(terms) * (1.0 + np.abs(args))))
    scale = cache.step / (2.0 * np.pi)
    return scale * float(np.sum(terms).real), scale * budget


def joint_probability(triplet: LevyTriplet, query: JointLawQuery, cache: InnerIntegralCache) -> float:
    """P(X_T <= K + x, running max >= x), clipped to [0, 1]."""
    _check_cache(triplet, query, cache)
    raw, _ = _raw_sum(cache, query.x, query.T)
    return float(min(max(raw, 0.0), 1.0))


def joint_surface(
    triplet: LevyTriplet,
    K: float,
    x_grid,
    T_grid,
    *,
    cache: InnerIntegralCache | None = None,
    gamma: float = 4.0,
    quad_tol: float = 1e-9,
    threads: int = 1,
) -> JointSurface:
    """Joint probabilities on the product grid, one cached lattice for all
    cells.  Records the build and evaluation wall clock and the largest
    excursion clipped away.  Horizon columns are independent, so threads
    split the grid by column and write disjoint slices; the result is
    bit-identical for any thread count."""
    x_grid = np.asarray(x_grid, dtype=float)
    T_grid = np.asarray(T_grid, dtype=float)
    if x_grid.size == 0 or T_grid.size == 0:
        raise UsageError("surface grids must be nonempty")
    tic = time.perf_counter()
    if cache is None:
        cache = build_joint_cache(
            triplet,
            K,
            t_min=float(T_grid.min()),
            t_max=float(T_grid.max()),
            x_max=float(x_grid.max()),
            gamma=gamma,
            quad_tol=quad_tol,
        )
    build_seconds = time.perf_counter() - tic

    probe = JointLawQuery(K=K, x=float(x_grid.max()), T=float(T_grid.max()))
    _check_cache(triplet, probe, cache)
    _check_cache(triplet, JointLawQuery(K=K, x=float(x_grid.min()), T=float(T_grid.min())), cache)

    if not (isinstance(threads, int) and threads >= 1):
        raise UsageError(f"threads={threads!r} must be a positive integer")
    if float(T_grid.max() * cache.psi_values.real.max()) > _EXP_ARG_MAX:
        raise OverflowGuard(f"exp argument overflows at T={T_grid.max()}")

    tic = time.perf_counter()
    scale = cache.step / (2.0 * np.pi)
    phases = np.exp(np.outer(-x_grid, cache.lambda_grid))
    raw = np.empty((x_grid.size, T_grid.size))

    def _column(j: int) -> None:
        with np.errstate(under="ignore"):
            col = phases @ (np.exp(T_grid[j] * cache.psi_values) * cache.F_values)
        raw[:, j] = scale * col.real

    if threads > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(_column, range(T_grid.size)))
    else:
        for j in range(T_grid.size):
            _column(j)
    eval_seconds = time.perf_counter() - tic
    excursion = float(max(0.0, -raw.min(), (raw - 1.0).max()))
    return JointSurface(
        x_grid=x_grid,
        T_grid=T_grid,
        values=np.clip(raw, 0.0, 1.0),
        max_excursion=excursion,
        build_seconds=build_seconds,
        eval_seconds=eval_seconds,
        cache=cache,
    )


def sensitivity(
    triplet: LevyTriplet,
    K: float,
    x: float,
    T: float,
    order_x: int = 0,
    order_T: int = 0,
    *,
    cache: InnerIntegralCache | None = None,
) -> float:
    """Mixed derivative d^{order_x}_x d^{order_T}_T of the joint law at
    (x, T); differentiation inserts (-lambda)^{order_x} psi^{order_T}
    under the lattice sum.  Not clipped."""
    if order_x < 0 or order_T < 0 or int(order_x) != order_x or int(order_T) != order_T:
        raise UsageError("derivative orders must be nonnegative integers")
    if order_x + order_T > _MAX_ORDER:
        raise UsageError(
            f"total derivative order {order_x + order_T} exceeds the supported {_MAX_ORDER}",
            hint="higher insertions amplify the lattice tail beyond certification",
        )
    if cache is None:
        cache = build_joint_cache(triplet, K, t_min=T, t_max=T, x_max=x)
    _check_cache(triplet, JointLawQuery(K=K, x=x, T=T), cache)
    raw, _ = _raw_sum(cache, x, T, int(order_x), int(order_T))
    return raw


def pair_g_with_density(
    triplet: LevyTriplet,
    payoff: FourierPayoff,
    t: float,
    *,
    cache: InnerIntegralCache | None = None,
    gamma: float = 4.0,
) -> PairingCheck:
    """Pair the mapped payoff with the transition density two ways.

    The lattice route integrates F(lambda) exp(t psi(lambda)) over the
    Bromwich line; the direct route is the density expectation of h.  The
    two must agree within the quadrature budget whenever the roundoff
    bound is small; when t psi(gamma) is large the bound honestly reports
    that the cancellation exceeds double precision.
    """
    if cache is None:
        cache = build_joint_cache(triplet, payoff, t_min=t, t_max=t, x_max=0.0, gamma=gamma)
    pairing, budget = _raw_sum(cache, 0.0, t)
    direct = expectation(triplet, payoff, t)
    roundoff = float(np.finfo(float).eps) * budget
    return PairingCheck(
        pairing=pairing,
        expectation=direct,
        residual=abs(pairing - direct),
        roundoff_bound=roundoff,
    )
