"""Exception types shared across the package.

Every failure mode that callers are expected to branch on gets its own
class; everything inherits from :class:`OpdilateError` so blanket
handling stays possible at the CLI boundary.
"""

__all__ = [
    "OpdilateError",
    "NotSquare",
    "NotHermitian",
    "NotPsd",
    "NotContraction",
    "NotCommuting",
    "NotInvertible",
    "NotScalar",
    "ShapeMismatch",
    "InsufficientData",
    "DiskViolation",
    "TailBoundUnavailable",
    "IndefiniteHankel",
    "CriterionFailed",
    "RecursionBreakdown",
    "CrossCheckFailed",
    "CoreIdentityFailed",
    "OrderViolation",
    "Overflow",
]


class OpdilateError(Exception):
    """Base class for all errors raised by this package."""


class NotSquare(OpdilateError):
    """A square matrix was required."""


class NotHermitian(OpdilateError):
    """Hermiticity defect exceeds the effective tolerance."""


class NotPsd(OpdilateError):
    """A positive-semidefinite matrix was required."""


class NotContraction(OpdilateError):
    """Operator norm exceeds 1 beyond tolerance."""


class NotCommuting(OpdilateError):
    """A commuting pair of operators was required."""


class NotInvertible(OpdilateError):
    """A (positive) invertible operator was required."""


class NotScalar(OpdilateError):
    """Operation is defined for one-dimensional sequences only."""


class ShapeMismatch(OpdilateError):
    """Inconsistent dimensions in a block layout or data payload."""


class InsufficientData(OpdilateError):
    """The truncated sequence is too short for the requested order."""


class DiskViolation(OpdilateError):
    """Evaluation point lies outside the open unit disk."""


class TailBoundUnavailable(OpdilateError):
    """A certified tail estimate needs the contractive flag."""


class IndefiniteHankel(OpdilateError):
    """Moment data with an indefinite Hankel matrix."""


class CriterionFailed(OpdilateError):
    """A constructor's existence criterion does not hold for the input."""


class RecursionBreakdown(OpdilateError):
    """No consistent block exists at some recursion level.

    Raised when a pseudo-inverse solve fails its post-hoc residual
    check; the failing level is recorded in ``level``.
    """

    def __init__(self, message: str, level: int | None = None):
        super().__init__(message)
        self.level = level


class CrossCheckFailed(OpdilateError):
    """Two independent evaluation routes disagree beyond tolerance."""


class CoreIdentityFailed(OpdilateError):
    """The 4x4 core block identities do not hold for the instance."""


class OrderViolation(OpdilateError):
    """The positive-semidefinite operator order A1 <= A2 is violated."""


class Overflow(OpdilateError):
    """Exact integer binomial weights requested beyond the supported range."""
