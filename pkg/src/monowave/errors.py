"""Exception types shared across the package.

The CLI maps these onto distinct exit codes (config 2, numeric 3,
resource 4).
"""


class MonowaveError(Exception):
    """Base class for package errors."""


class ConfigError(MonowaveError):
    """Invalid configuration, argument or file format."""


class NumericError(MonowaveError):
    """A numeric routine failed to reach its accuracy contract."""


class QuadratureError(NumericError):
    """Adaptive quadrature did not converge; carries the achieved estimate."""

    def __init__(self, message, achieved_error=None):
        super().__init__(message)
        self.achieved_error = achieved_error


class ResourceLimitError(MonowaveError):
    """A scan or sweep would exceed the configured memory budget."""
