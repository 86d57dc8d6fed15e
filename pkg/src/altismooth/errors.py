"""Exception types shared across the package.

Numerical failures (overflow, indefinite matrices, diverging fits) are kept
distinct from bad-input errors so the CLI can map them to exit codes.
"""


class AltismoothError(Exception):
    """Base class for all package-specific errors."""


class NonFiniteError(AltismoothError):
    """A computation produced NaN or infinity (pathological inputs)."""


class ShapeMismatchError(AltismoothError):
    """Two blocks or series that must agree in shape do not."""


class DegenerateInputError(AltismoothError):
    """Input carries no information for the requested quantity (e.g. zero energy)."""


class NotPositiveDefiniteError(AltismoothError):
    """Correlation matrix failed its positive-definiteness check."""


class BadRangeError(AltismoothError):
    """Requested parameter ranges violate physical invariants."""


class DivergedError(AltismoothError):
    """Iterative fit failed to make progress from every tried start."""
