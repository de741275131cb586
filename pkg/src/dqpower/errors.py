"""Exception types raised across the package."""


class DQError(Exception):
    """Base class for all package errors."""


class DivisionUndefined(DQError, ZeroDivisionError):
    pass


class SqrtUndefined(DQError, ValueError):
    pass


class DimensionMismatch(DQError, ValueError):
    pass


class NotScalar(DQError, ValueError):
    """A dual quaternion expected to be a dual number has non-negligible vector parts."""


class ZeroInput(DQError, ValueError):
    pass


class NotHermitian(DQError, ValueError):
    pass


class ZeroStandardPart(DQError, ValueError):
    pass


class SingularSystem(DQError, ArithmeticError):
    pass


class InvalidSparsity(DQError, ValueError):
    pass


class NotUnitPose(DQError, ValueError):
    pass


class NonPositiveLambda(DQError, ArithmeticError):
    pass


class NoConvergence(DQError, RuntimeError):
    """Iteration budget exhausted before the stopping test passed.

    This is a soft failure: ``result`` holds the last iterate (an
    ``EigenPair``, ``SpectrumResult`` or ``SlamResult``) and callers may
    accept it.
    """

    def __init__(self, message, result=None, index=None):
        super().__init__(message)
        self.result = result
        self.index = index
