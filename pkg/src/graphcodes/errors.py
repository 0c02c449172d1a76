"""Exception hierarchy.

Parse-level failures derive from :class:`ParseError`; structural invariant
violations derive from :class:`InvariantError`.  The CLI maps these two
families onto distinct exit codes.
"""


class GraphcodeError(Exception):
    """Base class for all package errors."""


class ParseError(GraphcodeError):
    def __init__(self, message, line=None, source=None):
        self.line = line
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class BadHeader(ParseError):
    pass


class BadParameterCount(ParseError):
    pass


class MalformedLine(ParseError):
    pass


class IndexOutOfRange(ParseError):
    pass


class InvariantError(GraphcodeError):
    """A structure violates one of its invariants."""

    def __init__(self, message, line=None, source=None):
        self.line = line
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class NonHomogeneous(InvariantError):
    pass


class InvalidGraphcode(InvariantError):
    pass


class LabelInvariantViolated(InvalidGraphcode):
    pass


class DanglingEdge(InvalidGraphcode):
    pass


class DuplicateBars(GraphcodeError):
    """Two identical bars at one height; interval decomposition needs distinct bars."""

    def __init__(self, height, bar):
        self.height = height
        self.bar = bar
        super().__init__(f"duplicate bar [{bar[0]},{bar[1]}) at height {height}")


class PreconditionViolated(GraphcodeError):
    pass


class BudgetExceeded(GraphcodeError):
    pass
