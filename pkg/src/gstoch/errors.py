"""Exception types shared across the package."""


class BudgetExceededError(ValueError):
    """A requested construction would exceed its configured size budget."""


class GridConfigError(ValueError):
    """A finite-difference grid violates its stability or geometry constraints."""


class DivergenceError(RuntimeError):
    """A numerical scheme produced non-finite values."""


class DerivativeMismatchError(ValueError):
    """Supplied derivatives disagree with finite-difference probes."""


class ConfigError(ValueError):
    """An experiment configuration failed validation."""
