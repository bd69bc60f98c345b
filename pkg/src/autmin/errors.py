"""Exception hierarchy shared by the library and the CLI."""


class AutminError(Exception):
    """Base class for all errors raised by autmin."""


class InputError(AutminError, ValueError):
    """Malformed input: unknown symbols, alphabet mismatches, bad documents."""


class ParseError(InputError):
    """A text document could not be parsed.

    Carries the 1-based ``line`` and ``column`` of the offending token.
    """

    def __init__(self, reason, line, column=1):
        self.reason = reason
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {reason}")


class ModeError(AutminError, ValueError):
    """The operation does not apply to the automaton's acceptance mode."""


class BudgetError(AutminError, RuntimeError):
    """A brute-force search was asked to exceed its state budget."""

    def __init__(self, message, bound=None):
        self.bound = bound
        super().__init__(message)
