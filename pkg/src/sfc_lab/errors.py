"""Error types shared across the package.

The CLI maps these onto exit codes: configuration problems exit 2,
numerical check failures exit 1.
"""


class ConfigError(ValueError):
    """A configuration value is missing, malformed, or inconsistent."""


class UnsupportedModeError(ValueError):
    """A requested mode is not available for the given process entry."""


class NumericalFailureError(RuntimeError):
    """A non-finite value appeared mid-computation; message names the path index."""
