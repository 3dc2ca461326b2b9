"""Exception hierarchy shared by every module.

``InvariantViolation`` is special: it means a check that should hold for all
valid inputs failed, so it signals a bug rather than bad input.
"""


class AbelGraphError(ValueError):
    """Base class for all input and contract errors."""


class ParseError(AbelGraphError):
    pass


class InvalidGraph(AbelGraphError):
    pass


class EmptySet(AbelGraphError):
    pass


class LimitExceeded(AbelGraphError):
    pass


class UnknownEdge(AbelGraphError):
    pass


class UnknownPoint(AbelGraphError):
    pass


class MultipleHalfNodes(AbelGraphError):
    pass


class HostMismatch(AbelGraphError):
    pass


class IndexMismatch(AbelGraphError):
    pass


class TotalDegreeMismatch(AbelGraphError):
    pass


class NotConnected(AbelGraphError):
    pass


class GenusTooSmall(AbelGraphError):
    pass


class NotStable(AbelGraphError):
    pass


class NotQuasistable(AbelGraphError):
    pass


class NotSemibalanced(AbelGraphError):
    pass


class Not1General(AbelGraphError):
    pass


class NotTwoComponent(AbelGraphError):
    pass


class SpecError(AbelGraphError):
    pass


class InvariantViolation(AssertionError):
    """A property guaranteed by the theory failed on a concrete input."""
