"""Exception types raised across the package."""


class InvalidArgumentError(ValueError):
    """Raised for malformed inputs: wrong shapes, out-of-range parameters."""


class UnsupportedInputError(ValueError):
    """Raised when an input is valid but outside what a routine can handle."""


class AmbiguityError(RuntimeError):
    """Raised when a quantity is not uniquely defined (e.g. several null modes)."""

    def __init__(self, message, dimension=None):
        super().__init__(message)
        self.dimension = dimension


class ConfigError(ValueError):
    """Raised by config validation; carries every violation found."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))
