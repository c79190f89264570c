"""Exception hierarchy shared by every hypermatch module."""


class HypermatchError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(HypermatchError, ValueError):
    """An argument lies outside the documented domain."""


class CapacityError(HypermatchError, ValueError):
    """The requested vertex count exceeds a configured cap."""


class ParseError(HypermatchError, ValueError):
    """Instance text does not conform to the instance format."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class HeaderError(ParseError):
    pass


class EmptyEdgeError(ParseError):
    pass


class DuplicateEdgeError(ParseError):
    pass


class VertexRangeError(ParseError):
    pass


class GuardError(HypermatchError, ValueError):
    """An enumeration would exceed its configured budget."""


class BudgetExceeded(HypermatchError, RuntimeError):
    """The exact solver ran out of nodes.

    ``matching`` holds the best matching found before the budget ran out
    (flagged ``optimal=False``) and ``stats`` the search counters.
    """

    def __init__(self, matching, stats):
        super().__init__(
            f"node budget exhausted after {stats.nodes_explored} nodes; "
            f"best matching found has size {matching.size}"
        )
        self.matching = matching
        self.stats = stats


class StatisticsError(HypermatchError, ValueError):
    pass


class RenderError(HypermatchError, ValueError):
    pass
