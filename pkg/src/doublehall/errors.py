"""Exception types shared across the package."""


class DoubleHallError(Exception):
    """Base class for every error this library raises on purpose."""


class InvalidVertex(DoubleHallError):
    """A vertex id is malformed, missing from the graph, or on the wrong side."""


class IdCollision(DoubleHallError):
    """Two graphs that must have disjoint vertex ids share one."""


class TooSmall(DoubleHallError):
    """An operation needs at least two vertices on the A side of its target."""


class NotConnected(DoubleHallError):
    """A spanning-tree construction was asked for on a disconnected graph."""


class FormatError(DoubleHallError):
    """A serialized graph failed validation on load."""


class UnboundedClosure(DoubleHallError):
    """A truncation closure rule needs a neighborhood with no declared finite bound."""


class BudgetExhausted(DoubleHallError):
    """A candidate scan ran out of enumeration positions before finding a choice.

    ``blocker`` names the vertex or role the scan was trying to serve.
    """

    def __init__(self, message: str, blocker=None):
        super().__init__(message)
        self.blocker = blocker


class Undecidable(DoubleHallError):
    """The declared degree hints cannot confirm or refute the queried property."""


class WindowNotStable(DoubleHallError):
    """A limit-degree check was asked about a vertex touched by unstable edges."""


class HypothesisFailed(DoubleHallError):
    """The input does not satisfy a structural hypothesis the operation needs.

    ``offender`` names the vertex that breaks the hypothesis, when there is one.
    """

    def __init__(self, message: str, offender=None):
        super().__init__(message)
        self.offender = offender


class CoverExistenceViolation(DoubleHallError):
    """A double-Hall window admitted no disjoint cycle cover.

    Finite double-Hall graphs always admit one, so a reproducible instance
    means a bug in the solver or the window construction. The failure is loud
    and carries the instance for inspection.
    """

    def __init__(self, message: str, graph=None, target=None):
        super().__init__(message)
        self.graph = graph
        self.target = target
