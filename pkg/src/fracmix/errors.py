"""Exception types shared across the library."""


class FracmixError(Exception):
    """Base class for all library-specific errors."""


class DivergenceGuard(FracmixError):
    """Argument magnitude exceeds the documented safe-evaluation cap."""


class NonConvergence(FracmixError):
    """Series truncation failed to satisfy the stop rule."""


class DomainError(FracmixError):
    """Input lies outside the mathematical domain of the operation."""


class GeometryError(FracmixError):
    """Curve/characteristic intersection outside the admissible region."""


class ConfigError(FracmixError):
    """Problem configuration violates a structural invariant."""


class SingularOperator(FracmixError):
    """A discrete integral operator is numerically singular."""

    def __init__(self, message, cond=None):
        super().__init__(message)
        self.cond = cond


class StabilityError(FracmixError):
    """A time-stepping linear system could not be solved."""
