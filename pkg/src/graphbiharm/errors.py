"""Exception hierarchy and warning categories."""


class GraphbiharmError(Exception):
    """Base class for all errors raised by this package."""


class GraphConstructionError(GraphbiharmError, ValueError):
    """A graph violates one of the standing structural assumptions."""


class SelfLoopError(GraphConstructionError):
    pass


class DuplicateEdgeError(GraphConstructionError):
    pass


class AsymmetricWeightError(GraphConstructionError):
    pass


class NonpositiveWeightError(GraphConstructionError):
    pass


class NonpositiveMeasureError(GraphConstructionError):
    pass


class DisconnectedGraphError(GraphConstructionError):
    pass


class UnknownVertexError(GraphbiharmError, KeyError):
    pass


class EmptyInteriorError(GraphbiharmError, ValueError):
    pass


class DisconnectedDomainError(GraphbiharmError, ValueError):
    pass


class NegativePotentialError(GraphbiharmError, ValueError):
    pass


class GraphMismatchError(GraphbiharmError, ValueError):
    """A vertex function was used with a graph it is not bound to."""


class CompactSupportError(GraphbiharmError, ValueError):
    """A test function does not vanish outside the domain interior."""


class NonzeroOutsideDomainError(GraphbiharmError, ValueError):
    """A function required to vanish outside a domain does not."""


class QOutOfRangeError(GraphbiharmError, ValueError):
    pass


class ZeroFunctionError(GraphbiharmError, ValueError):
    pass


class DegenerateProblemError(GraphbiharmError, ValueError):
    """Problem data outside the admissible range (e.g. exponent p <= 2)."""


class ParseError(GraphbiharmError, ValueError):
    """Malformed input file; carries the offending location."""

    def __init__(self, message, source="<input>", line=None):
        loc = source if line is None else f"{source}:{line}"
        super().__init__(f"{loc}: {message}")
        self.source = source
        self.line = line


class ConfigError(GraphbiharmError, ValueError):
    pass


class ParameterRangeWarning(UserWarning):
    """Parameter admissible but outside the regime the estimates assume."""
