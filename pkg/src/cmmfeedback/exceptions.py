"""Exception hierarchy shared by all modules."""


class CMMError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameterError(CMMError, ValueError):
    """A parameter lies outside its admissible domain."""


class SingularParametersError(CMMError, ZeroDivisionError):
    """The parameter set makes a steady-state denominator vanish."""


class UnstableSystemError(CMMError):
    """The drift matrix has an eigenvalue with non-negative real part."""


class NumericalError(CMMError):
    """A linear-algebra kernel failed or missed its accuracy target."""


class PhysicalityError(NumericalError):
    """A covariance block violates the uncertainty principle beyond tolerance."""
