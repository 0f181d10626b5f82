"""Exception types shared across the library."""


class WitnessForgeError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(WitnessForgeError):
    pass


class SingularTransform(WitnessForgeError):
    pass


class NotAZero(WitnessForgeError):
    pass


class NegativeHessian(WitnessForgeError):
    """The Hessian at a candidate zero has a clearly negative eigenvalue,
    which means the operator is not positive on product states near it."""


class NotAWitness(WitnessForgeError):
    """Raised when a strictly negative product-state expectation value is
    found.  Carries the violating product vector as a certificate."""

    def __init__(self, message=None, certificate=None, value=None):
        if message is None:
            message = f"operator takes value {value:.3e} on a product state"
        super().__init__(message)
        self.certificate = certificate
        self.value = value


class MaxIterations(WitnessForgeError):
    pass


class NotQuartic(WitnessForgeError):
    pass


class EmptyZeroSet(WitnessForgeError):
    pass


class NotInKernel(WitnessForgeError):
    pass


class Unbounded(WitnessForgeError):
    pass


class TooManyZeros(WitnessForgeError):
    pass


class ConvergenceFailure(WitnessForgeError):
    pass
