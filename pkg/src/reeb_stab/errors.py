"""Exception hierarchy shared by all modules."""


class ReebStabError(Exception):
    """Base class for every error raised by reeb_stab."""


class MixedModeError(ReebStabError, TypeError):
    pass


class DimensionMismatch(ReebStabError, ValueError):
    pass


class RankDeficient(ReebStabError, ValueError):
    pass


class TooManyRelations(ReebStabError, ValueError):
    pass


class NonMinimalGenerators(ReebStabError, ValueError):
    pass


class ZeroWeight(ReebStabError, ZeroDivisionError):
    """A specialized weight vanished: the Reeb vector sits on the cone boundary."""


class PoleOrderMismatch(ReebStabError, ValueError):
    pass


class DimensionTooSmall(ReebStabError, ValueError):
    pass


class NotInCone(ReebStabError, ValueError):
    pass


class NotOnCrossSection(ReebStabError, ValueError):
    pass


class NotTangent(ReebStabError, ValueError):
    pass


class NonpositiveCharge(ReebStabError, ValueError):
    pass


class ConsistencyError(ReebStabError, AssertionError):
    """Two independent routes to the same quantity disagreed."""


class InfeasibleStart(ReebStabError, ValueError):
    pass


class HessianNotPD(ReebStabError, ArithmeticError):
    pass


class NotConverged(ReebStabError, RuntimeError):
    """Raised when the iteration budget runs out; ``result`` holds the best iterate."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class IrrationalInput(ReebStabError, TypeError):
    pass


class NonpositiveT(ReebStabError, ValueError):
    pass


class StepLeavesCone(ReebStabError, ValueError):
    pass


class TooCloseToBoundary(ReebStabError, ValueError):
    pass


class NegativeCoefficient(ReebStabError, ValueError):
    """A series expansion produced a negative dimension: the input was not a valid ring."""


class ParseError(ReebStabError, ValueError):
    pass


class ValidationError(ReebStabError, ValueError):
    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
