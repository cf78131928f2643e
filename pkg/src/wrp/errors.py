"""Exception taxonomy shared across the package.

Domain errors (bad inputs, unsupported combinations) derive from
:class:`UsageError`; they map to CLI exit code 2.  Numerical check
failures are reported through result objects, not exceptions, except
where an operation cannot produce a meaningful value at all.
"""
from __future__ import annotations

__all__ = [
    "WrpError",
    "UsageError",
    "AdmissibilityViolation",
    "BranchCutViolation",
    "InvalidStrike",
    "NonIntegrable",
    "RequiresL1",
    "DenominatorUnderflow",
    "OverflowGuard",
    "TruncationCapExceeded",
    "InsufficientGrid",
    "CacheMismatch",
    "TailUnbounded",
    "UnsupportedJumpKind",
    "GridExtrapolation",
    "SchemaError",
]


class WrpError(Exception):
    """Base class for all package errors.

    Parameters
    ----------
    message : str
        Human readable description.
    hint : str, optional
        Short actionable suggestion surfaced by the CLI.
    """

    def __init__(self, message: str, hint: str | None = None):
        super().__init__(message)
        self.hint = hint


class UsageError(WrpError):
    """Caller asked for something the model or payoff cannot provide."""


class AdmissibilityViolation(UsageError):
    """Model parameters violate an exponential-moment or domain constraint."""


class BranchCutViolation(UsageError):
    """Laplace exponent evaluated on or across its branch cut."""


class InvalidStrike(UsageError):
    """Payoff constructor called with parameters outside its domain."""


class NonIntegrable(UsageError):
    """Tilted payoff fails the integrability needed for a Fourier preimage."""


class RequiresL1(UsageError):
    """Operation needs an absolutely integrable transform; payoff is L2 only."""


class DenominatorUnderflow(WrpError):
    """Kernel denominator fell below the configured floor."""


class OverflowGuard(WrpError):
    """Requested evaluation would overflow double precision exponentials."""


class TruncationCapExceeded(WrpError):
    """Truncation doubling hit its cap before meeting the error target."""


class InsufficientGrid(UsageError):
    """Stored curve is too coarse or too short for the requested check."""


class CacheMismatch(UsageError):
    """Inner-integral cache was built for a different model or contour."""


class TailUnbounded(UsageError):
    """Integrand grows faster than the certified exponential moment."""


class UnsupportedJumpKind(UsageError):
    """Simulator only handles jump families with exact increment laws."""


class GridExtrapolation(UsageError):
    """Callable backed by a finite grid was queried outside its range."""


class SchemaError(UsageError):
    """Config file failed schema validation."""
