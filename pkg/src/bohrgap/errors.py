"""Exception types raised across bohrgap."""


class BohrgapError(Exception):
    """Base class for every error raised by this package."""


# exactalg
class DegreeCapExceeded(BohrgapError, ValueError):
    pass


class FactorSearchExhausted(BohrgapError, RuntimeError):
    pass


class DivisionByZero(BohrgapError, ZeroDivisionError):
    pass


# groups
class BallTooLarge(BohrgapError):
    pass


class InvalidMeasure(BohrgapError, ValueError):
    pass


class NotSymmetric(InvalidMeasure):
    pass


class MissingIdentity(InvalidMeasure):
    pass


class NotProbability(InvalidMeasure):
    pass


class NotGenerating(InvalidMeasure):
    pass


# reps
class UnknownGenerator(BohrgapError, KeyError):
    pass


class DimensionMismatch(BohrgapError, ValueError):
    pass


class ZeroVector(BohrgapError, ValueError):
    pass


class NotUnitary(BohrgapError, ValueError):
    pass


class NotOrthogonal(BohrgapError, ValueError):
    pass


class NotHomomorphism(BohrgapError, ValueError):
    pass


# markov
class NotConverged(BohrgapError, RuntimeError):
    pass


class HasInvariantVector(BohrgapError):
    pass


class SingularOperator(BohrgapError):
    pass


# almostinv
class NoAdmissibleIndex(BohrgapError):
    def __init__(self, k, msg=None):
        self.k = k
        super().__init__(msg or f"no admissible index at step k={k}")


class DegenerateProjection(BohrgapError):
    pass


class SubsequenceExhausted(BohrgapError):
    pass


class SelectionFailed(BohrgapError):
    def __init__(self, n, msg=None):
        self.n = n
        super().__init__(msg or f"no admissible index at selection step n={n}")


# duality
class OrderCapExceeded(BohrgapError):
    pass


class NotIntertwining(BohrgapError):
    def __init__(self, msg, witness=None):
        self.witness = witness
        super().__init__(msg)


class NotIsomorphism(BohrgapError):
    pass


class NotUnimodular(BohrgapError, ValueError):
    pass


class InvalidAction(BohrgapError, ValueError):
    pass


# zconj
class TranscendentalInput(BohrgapError):
    pass


class NotConjugate(BohrgapError):
    pass


class InvalidSelector(BohrgapError, ValueError):
    pass


class BoundaryRoot(InvalidSelector):
    pass
