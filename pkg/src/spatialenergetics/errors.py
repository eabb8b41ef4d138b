"""Exception types raised by the package.

Every error subclasses :class:`SpatialEnergeticsError`, which itself is a
``ValueError`` so callers that only care about bad input can catch that.
"""


class SpatialEnergeticsError(ValueError):
    """Base class for all package errors."""


class InvalidDegreeError(SpatialEnergeticsError):
    """Raised for an (n, m) pair with |m| > n or n < 0."""


class DegreeMismatchError(SpatialEnergeticsError):
    """Raised when a quadrature grid cannot integrate the requested order exactly."""


class OrderOverflowError(SpatialEnergeticsError):
    """Raised when an order exceeds the supported cap."""


class OrderError(SpatialEnergeticsError):
    """Raised when two objects have incompatible SH orders."""


class DesignError(SpatialEnergeticsError):
    """Raised for an unsupported beam preset / order combination."""


class DegenerateError(SpatialEnergeticsError):
    """Base for numerically undefined results (0/0 and friends)."""


class UndefinedDiffusenessError(DegenerateError):
    """Raised when the field carries no energy, so diffuseness is 0/0.

    The partially computed estimate (zero intensity and energy) is attached as
    ``estimate``.
    """

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class UndefinedDoaError(DegenerateError):
    """Raised when a DOA is requested from a zero intensity vector."""


class UndefinedBiasError(DegenerateError):
    """Raised when the DOA bias is requested where the resultant vanishes."""


class EmptyInputError(SpatialEnergeticsError):
    """Raised when an average is requested over zero frames."""


class ValidationError(SpatialEnergeticsError):
    """Raised for schema violations in user-supplied configuration."""


class ZeroPatternError(DegenerateError, ZeroDivisionError):
    """Raised when a pattern-normalized quantity is requested for ``w == 0``."""
