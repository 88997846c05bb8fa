"""Classical and quantum time-of-flight distributions for cold atoms falling under gravity."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    DEFAULT_CONSTANTS, CloudSpec, CloudSpecInput, PhysicalConstants, TofError, kappa, to_si,
)
from .thermal import CurrentVariant  # noqa: E402

__all__ = [
    "DEFAULT_CONSTANTS", "CloudSpec", "CloudSpecInput", "CurrentVariant", "PhysicalConstants",
    "TofError", "kappa", "to_si", "__version__",
]
