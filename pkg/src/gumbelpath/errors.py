"""Exception taxonomy shared by the library, the CLI and the client bindings.

Every error carries a stable ``code`` string.  The CLI prints the code on
validation failures and the foreign-function layer forwards ``(code,
message)`` pairs verbatim, so the names here are part of the public
contract.
"""


class GumbelPathError(Exception):
    """Base class for all errors raised by this package."""

    code = "Error"


class ValidationError(GumbelPathError, ValueError):
    """Invalid input; mapped to exit status 2 by the CLI."""

    code = "Validation"


class EdgeNotForwardError(ValidationError):
    """An edge (u, v) with u >= v breaks the topological numbering."""

    code = "EdgeNotForward"


class DuplicateEdgeError(ValidationError):
    """The same (u, v) pair was supplied more than once."""

    code = "DuplicateEdge"


class DisconnectedNodeError(ValidationError):
    """A node lies on no source-to-sink path."""

    code = "DisconnectedNode"


class NoPathError(ValidationError):
    """No source-to-sink path can exist (fewer than two nodes)."""

    code = "NoPath"


class BadEndpointsError(ValidationError):
    """Node 1 has a parent or node N has a child."""

    code = "BadEndpoints"


class InvalidPathError(ValidationError):
    """A node sequence is not a source-to-sink path of the graph."""

    code = "InvalidPath"


class ShapeMismatchError(ValidationError):
    """An array's length or shape does not match the graph."""

    code = "ShapeMismatch"


class NonPositiveAlphaError(ValidationError):
    """The sharpness parameter alpha must be a positive finite real."""

    code = "NonPositiveAlpha"


class NonPositiveTauError(ValidationError):
    """The relaxation temperature tau must be a positive finite real."""

    code = "NonPositiveTau"


class GraphMismatchError(ValidationError):
    """Two distributions live on structurally different graphs."""

    code = "GraphMismatch"


class AlphaMismatchError(ValidationError):
    """Two distributions use different alpha values."""

    code = "AlphaMismatch"


class KindMismatchError(ValidationError):
    """A lattice operation was called with the wrong lattice kind."""

    code = "KindMismatch"


class RowsExceedColsError(ValidationError):
    """Monotonic-alignment lattices require rows <= cols."""

    code = "RowsExceedCols"


class SpecMismatchError(ValidationError):
    """A fitted distribution does not belong to the given lattice spec."""

    code = "SpecMismatch"


class DomainError(ValidationError):
    """A scalar argument lies outside the function's domain."""

    code = "Domain"


class TooManyPathsError(GumbelPathError):
    """Exhaustive enumeration would exceed the configured limit."""

    code = "TooManyPaths"


class PathSetMismatchError(ValidationError):
    """Two enumerations do not cover the same paths in the same order."""

    code = "PathSetMismatch"


class NumericalConsistencyError(GumbelPathError):
    """An internal identity failed beyond floating-point tolerance."""

    code = "NumericalConsistency"
