"""Exception types shared across the package."""


class BeamselError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(BeamselError, ValueError):
    """Invalid scenario, algorithm or experiment configuration."""


class SingularMatrixError(BeamselError, ValueError):
    """Unregularized inversion was requested on a singular Gram matrix."""


class BudgetExceededError(BeamselError, RuntimeError):
    """Exhaustive enumeration would exceed the configured evaluation budget."""


class EmptyCellError(BeamselError, ValueError):
    """Aggregation hit a (scheme, sweep point) cell with fewer than two trials."""
