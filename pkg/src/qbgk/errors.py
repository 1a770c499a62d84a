"""Exception hierarchy shared across the solver."""


class QbgkError(Exception):
    """Base class for all solver errors."""


class DomainError(QbgkError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class RangeError(QbgkError, ValueError):
    """Target value outside the invertible range of the beta function.

    Raised when a moment ratio signals condensation (boson) or
    saturation (fermion); the caller must classify instead of invert.
    """


class RegimeError(QbgkError):
    """Operation requires the regular (non-condensed, non-saturated) regime."""


class InvariantError(QbgkError):
    """A structural invariant of a data object is violated."""


class GridMismatchError(QbgkError):
    """Two fields do not share the same grid."""


class NonConvergenceError(QbgkError):
    """Quadrature or iteration failed to reach the requested tolerance."""


class ConfigError(QbgkError, ValueError):
    """Configuration parse or validation failure."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field
