"""Exception types shared across the package."""


class UsageError(ValueError):
    """Bad arguments or malformed input data."""


class ConfigurationError(UsageError):
    """Unsupported or inconsistent configuration (degree, grid, thresholds)."""


class NumericalError(RuntimeError):
    """Numerical failure while solving (singular systems, divergence)."""
