from typing import Optional


class EvidentialError(Exception):
    """Base class for all errors raised by the engine.

    Every subclass carries the stable code the command line prints in front
    of the message.
    """

    code = "E_VALIDATE"

    def render(self) -> str:
        return f"{self.code}: {self}"


class InvalidModelError(EvidentialError):
    """A value violates a structural or numeric invariant."""

    code = "E_VALIDATE"


class ScopeMismatchError(InvalidModelError):
    pass


class CycleError(InvalidModelError):
    pass


class DecombinationError(InvalidModelError):
    pass


class PropagationError(InvalidModelError):
    pass


class TotalConflictError(EvidentialError):
    """Normalization is impossible because all mass went to the empty set."""

    code = "E_CONFLICT"


class CapacityError(EvidentialError):
    code = "E_CAPACITY"


class ParseError(EvidentialError):
    """Syntax error in a query, rule beam, document or record file."""

    code = "E_PARSE"

    def __init__(
        self,
        message: str,
        position: Optional[int] = None,
        line: Optional[int] = None,
    ):
        self.position = position
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        elif position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class UsageError(EvidentialError):
    code = "E_USAGE"
