"""Exception hierarchy shared across the package.

Concrete errors live next to the code that raises them; the three category
bases exist so the CLI can map failures onto exit codes (config -> 2,
data -> 3, numeric -> 4).
"""


class Error(Exception):
    """Base class for all package errors."""


class ConfigError(Error):
    """Invalid options, flags, or hyperparameters."""


class DataError(Error):
    """Malformed, inconsistent, or degenerate input data."""


class NumericError(Error):
    """Numerical failure during computation."""
