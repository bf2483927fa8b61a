"""Exception hierarchy shared by all modules."""


class RandchanError(Exception):
    """Base class for library errors."""


class DimensionError(RandchanError, ValueError):
    """Raised when dimensions or parameters are outside their valid range."""


class NonInvertibleGram(RandchanError, ValueError):
    """The Gram matrix ``[N^{#(s^-1 t)}]`` is singular (``N < p``)."""


class ComplexityRefusal(RandchanError, ValueError):
    """The requested exact computation exceeds the documented size limit."""


class GuardError(RandchanError):
    """A memory/size guard refused the computation (override with ``force``)."""


class NumericalFailure(RandchanError, ArithmeticError):
    """A numerical routine failed to produce a trustworthy answer."""
