"""Exception types raised across the package."""


class QergodicError(Exception):
    """Base class for all package errors."""


class DimensionMismatchError(QergodicError, ValueError):
    pass


class NotPSDError(QergodicError, ValueError):
    pass


class NotUnitTraceError(QergodicError, ValueError):
    pass


class BadWeightsError(QergodicError, ValueError):
    pass


class UnknownNameError(QergodicError, KeyError):
    pass


class BadParamsError(QergodicError, ValueError):
    pass


class EigFailureError(QergodicError, ArithmeticError):
    """The eigendecomposition backend failed or returned inaccurate pairs."""


class NotErgodicError(QergodicError):
    pass


class PreconditionNotMetError(QergodicError):
    pass


class NotRandomUnitaryError(PreconditionNotMetError):
    pass


class NotQubitError(PreconditionNotMetError):
    pass


class NotUnitalError(PreconditionNotMetError):
    pass


class BadWitnessError(QergodicError, ValueError):
    pass


class NearSingularTLError(QergodicError, ArithmeticError):
    """I + G is too badly conditioned to invert the T_L map."""


class ReductionMismatchError(QergodicError, ArithmeticError):
    """S_L - T_L does not reproduce the generator."""


class NotFaithfulError(QergodicError, ValueError):
    pass


class GPlusGdagNotPSDError(QergodicError, ValueError):
    pass


class CrossCheckError(QergodicError, AssertionError):
    """Two independent routes to the same verdict disagree."""


class FormatError(QergodicError, ValueError):
    """A JSON document does not match the expected schema."""
