"""Exception hierarchy shared by every module of the package."""


class SagaError(Exception):
    """Base class for all errors raised by this package."""


class InputError(SagaError):
    """Malformed or inconsistent user input (CLI exit code 2)."""


class ParseError(InputError):
    pass


class NotHomogeneous(InputError):
    pass


class FieldMismatch(InputError):
    pass


class DegreeOutOfRange(InputError):
    pass


class WrongDegree(InputError):
    pass


class MathematicalFailure(SagaError):
    """A well-posed computation whose mathematical outcome is negative (exit 1)."""


class NotRegularSequence(MathematicalFailure):
    def __init__(self, degree, found, expected):
        self.degree = degree
        self.found = found
        self.expected = expected
        super().__init__(
            f"not a regular sequence: dim R^{degree} = {found}, expected {expected}"
        )


class NotAnnihilated(MathematicalFailure):
    pass


class NotOnLocus(MathematicalFailure):
    pass


class NotALineInN3(MathematicalFailure):
    pass


class PlaneNotInLocus(MathematicalFailure):
    pass


class BasePointInNk(MathematicalFailure):
    pass


class NotFermatCandidate(MathematicalFailure):
    pass


class NotZeroDimensional(MathematicalFailure):
    pass


class InsufficientPoints(MathematicalFailure):
    pass


class CodimensionTooSmall(InputError):
    pass


class RetriesExhausted(MathematicalFailure):
    pass


class BudgetExceeded(SagaError):
    """A configured computational cap was hit (exit 3)."""


class SizeGateExceeded(BudgetExceeded):
    pass
