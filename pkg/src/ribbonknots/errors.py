"""Exception hierarchy.

Every failure the library can signal derives from :class:`RibbonError`, so the
CLI can map them to exit codes in one place.
"""


class RibbonError(Exception):
    """Base class for all library errors."""


class ValidationError(RibbonError):
    """A frame or curve fails a precondition that the caller can fix."""


# curves
class VanishingGenerator(ValidationError):
    pass


class GridMismatch(ValidationError):
    pass


class NonMonotoneWarp(ValidationError):
    pass


class IrregularCurve(ValidationError):
    pass


# intersect
class TriplePointDetected(ValidationError):
    pass


class TangencyDetected(ValidationError):
    def __init__(self, message: str, angle: float = 0.0):
        super().__init__(message)
        self.angle = angle


class CoincidentPoints(ValidationError):
    pass


class RepairFailed(RibbonError):
    pass


class AmbiguousMatch(RibbonError):
    pass


# diagram
class GoalPostObstruction(ValidationError):
    pass


class NonGenericProjection(RibbonError):
    def __init__(self, message: str, angle: float = 0.0):
        super().__init__(message)
        self.angle = angle


class NonRealizableCode(ValidationError):
    pass


class CodeParseError(ValidationError):
    pass


# invariants
class TooManyCrossings(RibbonError):
    pass


# constructor
class NoArc(RibbonError):
    pass


class LayoutFailed(RibbonError):
    pass


class BallTooSmall(RibbonError):
    pass
