"""Exception hierarchy shared by all nsconst modules."""


class NsconstError(Exception):
    """Base class for all nsconst errors."""


class InvalidDimensionError(NsconstError, ValueError):
    """The lattice/torus dimension is out of range (d >= 2 is required)."""


class InvalidArgumentError(NsconstError, ValueError):
    """An argument violates a documented precondition."""


class OutOfRegimeError(NsconstError, ValueError):
    """Exponents or cutoffs violate the regime an estimate is valid in."""


class SingularPointError(NsconstError, ValueError):
    """Evaluation was requested at the excluded singular point of a domain."""


class UnsupportedExponentsError(NsconstError, ValueError):
    """The power-series machinery only supports integer exponent pairs."""


class PropertyFailureError(NsconstError, RuntimeError):
    """A cross-check (e.g. a sandwich inequality) failed on concrete data."""
