"""Exception types shared across the package."""


class NbwalkError(Exception):
    """Base class for all package errors."""


class InvalidParameter(NbwalkError):
    """A constructor or generator argument is out of range."""


class MalformedGraph(NbwalkError):
    """Explicit adjacency input violates the simple-graph contract."""


class UnsupportedGraph(NbwalkError):
    """The operation needs a different graph representation."""


class UnsupportedStructure(NbwalkError):
    """The graph shape rules out corridor analysis."""


class NoLegalMove(NbwalkError):
    """A walk kernel has no admissible transition."""


class InvalidState(NbwalkError):
    """A walk state is inconsistent with the graph."""


class InvalidInput(NbwalkError):
    """Malformed data passed to an operation."""


class LimitExceeded(NbwalkError):
    """An enumeration horizon is beyond the exhaustive-search guard."""


class InsufficientData(NbwalkError):
    """Not enough observations to form the requested estimate."""
