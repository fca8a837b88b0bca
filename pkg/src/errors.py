"""Exception hierarchy shared by every chowglue module."""
from typing import Any, Optional


class ChowGlueError(Exception):
    """Base class for all errors raised by the package."""


class UsageError(ChowGlueError):
    """Malformed user input: bad JSON, unknown variables, invalid configuration."""


class CoefficientError(ChowGlueError):
    """Arithmetic that leaves Z[1/6] (bad denominators, non-unit inverses, division by zero)."""


class PolynomialError(ChowGlueError):
    """Unknown variables, inhomogeneous input where a graded piece is required, parse failures."""


class IdealError(ChowGlueError):
    """Failed membership where one was required (e.g. cofactor splitting)."""

    def __init__(self, message: str, residual: Any = None):
        super().__init__(message)
        self.residual = residual


class ChernError(ChowGlueError):
    """Non-symmetric residue, insufficient truncation or a leaked Chern root."""


class LocalizationError(ChowGlueError):
    """Repeated weights at a fixed point, non-fixed images, inconsistent interpolation."""


class InvariantError(ChowGlueError):
    """A claimed generator is not invariant, or the ideal is not stable under the group."""


class GluingError(ChowGlueError):
    """A gluing precondition failed; carries the partial certificate built so far."""

    def __init__(self, message: str, certificate: Optional[Any] = None):
        super().__init__(message)
        self.certificate = certificate


class VerificationError(ChowGlueError):
    """A computed class differs from the stored constant."""

    def __init__(self, message: str, diff: Any = None):
        super().__init__(message)
        self.diff = diff
