"""Exception hierarchy shared by the library and the command line tool."""


class LeavittError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 4


class UsageError(LeavittError):
    """Bad command line usage."""

    exit_code = 1


class ParseError(LeavittError):
    """Malformed graph file, element expression, word, or polynomial."""

    exit_code = 2


class PreconditionError(LeavittError):
    """Input is well formed but violates a documented precondition."""

    exit_code = 3


class InvariantError(LeavittError):
    """An internal invariant or a defining relation failed to hold."""

    exit_code = 4
