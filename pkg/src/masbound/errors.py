"""Exception hierarchy shared by all masbound modules."""


class MasboundError(Exception):
    """Base class for errors raised by this package."""


class NumericalError(MasboundError):
    """A computation produced numerically meaningless results (failed
    residual check, runaway recursion, LP solver breakdown)."""


class IterationCapError(MasboundError):
    """An iterative procedure hit its step cap before converging.

    Carries the cap and the state reached so callers can report or retry
    with a larger cap.
    """

    def __init__(self, message, cap=None, last_state=None):
        super().__init__(message)
        self.cap = cap
        self.last_state = last_state


class UnboundedPolytopeError(MasboundError):
    """Vertex enumeration was asked for an unbounded (or empty) polyhedron."""


class LpError(NumericalError):
    """The LP backend failed to classify or solve an instance."""
