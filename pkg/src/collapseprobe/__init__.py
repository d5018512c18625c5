"""Open-system simulation of a dephasing spin chain read out by a probe qubit,
with quantum Fisher information tools for estimating the collapse rate."""

__version__ = "0.1.0"

from . import linalg, liouville, metrology, model
from .errors import AmbiguityError, ConfigError, InvalidArgumentError, UnsupportedInputError

__all__ = [
    "AmbiguityError",
    "ConfigError",
    "InvalidArgumentError",
    "UnsupportedInputError",
    "__version__",
    "linalg",
    "liouville",
    "metrology",
    "model",
]
