"""Random quantum channels: exact moments, limit laws, sampling and bounds."""
__version__ = "0.1.0"

from .errors import (  # noqa: F401
    ComplexityRefusal,
    DimensionError,
    GuardError,
    NonInvertibleGram,
    NumericalFailure,
    RandchanError,
)
