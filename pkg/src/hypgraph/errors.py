"""Exception hierarchy shared by the library and the CLI.

Each class carries the process exit code the CLI maps it to.
"""


class HypGraphError(Exception):
    exit_code = 1


class InputError(HypGraphError, ValueError):
    exit_code = 1


class ParseError(InputError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CrossComponentError(InputError):
    """A quadruple spans more than one connected component."""


class CapacityError(HypGraphError):
    exit_code = 2


class InternalAssertionError(HypGraphError, AssertionError):
    exit_code = 3
