"""
Exception hierarchy shared by every module.

Checkers report unmet hypotheses as verdicts, never as exceptions. Exceptions are
raised for malformed input, violated preconditions and exhausted hard caps.
"""
# Standard Library
from typing import Any, Optional


class DistLawError(Exception):
    """Root of all errors raised by the library."""


class MalformedTermError(DistLawError):
    def __init__(self, message: str, path: tuple[int, ...] = ()) -> None:
        self.path = tuple(path)
        where = "root" if not self.path else ".".join(map(str, self.path))
        super().__init__(f"{message} (at {where})")


class ParseError(DistLawError):
    def __init__(self, message: str, line: int = 0, column: int = 0) -> None:
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {message}")


class UnsupportedOperationError(DistLawError):
    pass


class ResourceError(DistLawError):
    def __init__(self, message: str, budget: Optional[dict[str, Any]] = None, statistics: Optional[dict[str, Any]] = None) -> None:
        self.budget = dict(budget or {})
        self.statistics = dict(statistics or {})
        super().__init__(message)


class DomainError(DistLawError):
    pass


class PreconditionError(DistLawError):
    pass


class WitnessError(DistLawError):
    pass
