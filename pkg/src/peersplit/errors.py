"""Exception types shared across the package."""

from __future__ import annotations


class PeerSplitError(Exception):
    """Base class for all package errors.

    ``expert`` optionally names the panel member whose input caused the
    problem, so callers can attribute file-level errors to a person.
    """

    def __init__(self, message: str, expert: str | None = None):
        if expert:
            message = f"{message} (expert '{expert}')"
        super().__init__(message)
        self.expert = expert


class BadDimension(PeerSplitError):
    """Comparison table is not square or has fewer than two alternatives."""


class NonPositiveEntry(PeerSplitError):
    """A value that must be strictly positive is zero or negative."""


class NonFiniteEntry(PeerSplitError):
    """A value that must be finite is NaN or infinite."""


class ReciprocityViolation(PeerSplitError):
    """A comparison pair deviates from c_ij * c_ji = 1 beyond tolerance."""


class IncompleteMatrix(PeerSplitError):
    """Operation requires a complete comparison table."""


class DisconnectedGraph(PeerSplitError):
    """Comparison graph does not connect all alternatives."""


class DimensionMismatch(PeerSplitError):
    """Vector or matrix shapes are incompatible."""


class NoConvergence(PeerSplitError):
    """An iterative computation failed to meet its tolerance in time."""


class SingularSystem(PeerSplitError):
    """A linear system is rank-deficient beyond the expected nullspace."""


class ParseError(PeerSplitError):
    """Input document is not well-formed."""


class SchemaError(PeerSplitError):
    """Input document is well-formed but violates the panel schema."""


class NoSolution(PeerSplitError):
    """All configured solvers finished above the residual tolerance.

    ``report`` carries the best attempt so callers can still inspect it.
    """

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


#: Errors that indicate invalid input data (CLI exit code 3).
VALIDATION_ERRORS = (
    BadDimension,
    NonPositiveEntry,
    NonFiniteEntry,
    ReciprocityViolation,
    IncompleteMatrix,
    DisconnectedGraph,
    DimensionMismatch,
    NoConvergence,
    SingularSystem,
)
