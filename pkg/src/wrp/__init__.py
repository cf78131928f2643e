"""Weak symmetry maps for spectrally negative Levy processes.

Core objects: Levy triplets with complex Laplace exponents, tilted
Fourier payoff transforms, the contour-integral symmetry map used for
static hedging of one-sided barriers, transition densities and the
joint law of the terminal value with the running maximum, and a Monte
Carlo oracle for end-to-end verification.
"""
from __future__ import annotations

__version__ = "0.1.0"

from . import errors
from .config import (
    dump_model,
    dump_payoff,
    fingerprint,
    load_model,
    load_payoff,
    model_dict,
    parse_grid_spec,
    payoff_dict,
)
from .density import DensitySlice, density, expectation, marginal_cdf
from .joint import (
    InnerIntegralCache,
    JointLawQuery,
    JointSurface,
    PairingCheck,
    build_joint_cache,
    joint_probability,
    joint_surface,
    pair_g_with_density,
    sensitivity,
)
from .levy import (
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
from .mc import (
    PathBatch,
    SimConfig,
    estimate_barrier_price,
    estimate_european,
    estimate_joint,
    grid_interpolant,
    read_batch,
    simulate,
    write_batch,
)
from .payoff import FourierPayoff, make_custom, make_indicator, make_put
from .verify import VerifyCheck, VerifyReport, run_suite
from .symmetry import (
    ContourParams,
    HedgeCurve,
    SymmetryImage,
    compute_g_curve,
    compute_g_point,
    static_hedge_payoff,
    verify_laplace_identity,
)

__all__ = [
    "errors",
    "GammaNegativeJumps",
    "LevyTriplet",
    "TabulatedJumps",
    "bm_gamma",
    "brownian",
    "denominator_floor",
    "psi",
    "psi_prime",
    "psi_second",
    "validate_admissibility",
    "FourierPayoff",
    "make_custom",
    "make_indicator",
    "make_put",
    "ContourParams",
    "HedgeCurve",
    "SymmetryImage",
    "compute_g_curve",
    "compute_g_point",
    "static_hedge_payoff",
    "verify_laplace_identity",
    "DensitySlice",
    "density",
    "expectation",
    "marginal_cdf",
    "InnerIntegralCache",
    "JointLawQuery",
    "JointSurface",
    "PairingCheck",
    "build_joint_cache",
    "joint_probability",
    "joint_surface",
    "pair_g_with_density",
    "sensitivity",
    "PathBatch",
    "SimConfig",
    "estimate_barrier_price",
    "estimate_european",
    "estimate_joint",
    "grid_interpolant",
    "read_batch",
    "simulate",
    "write_batch",
    "dump_model",
    "dump_payoff",
    "fingerprint",
    "load_model",
    "load_payoff",
    "model_dict",
    "parse_grid_spec",
    "payoff_dict",
    "VerifyCheck",
    "VerifyReport",
    "run_suite",
    "__version__",
]
