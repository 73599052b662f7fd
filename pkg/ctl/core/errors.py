"""Exception hierarchy shared by every ``ctl`` module."""

from __future__ import annotations

from typing import Optional


class CtlError(Exception):
    """Base exception for chromatic-threshold-lab errors."""

    pass


class GraphFormatError(CtlError):
    """Raised when graph6/sparse6 input cannot be decoded."""

    def __init__(self, message: str, offset: Optional[int] = None, line: Optional[int] = None):
        self.offset = offset
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if offset is not None:
            where.append(f"byte {offset}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)

    def at_line(self, line: int) -> "GraphFormatError":
        """Return a copy of this error annotated with a 1-based line number."""
        message = str(self.args[0]).split(" (", 1)[0]
        return GraphFormatError(message, offset=self.offset, line=line)


class SizingError(CtlError):
    """Raised when a graph would exceed the vertex cap."""

    pass


class BudgetExceededError(CtlError):
    """Raised when an exact search runs out of its time budget."""

    def __init__(self, stage: str, seconds: float):
        self.stage = stage
        self.seconds = seconds
        super().__init__(f"time budget of {seconds:g}s exceeded during {stage}")


class ConstructionError(CtlError):
    """Raised for invalid generator parameters or violated preconditions."""

    pass


class SearchExhaustedError(ConstructionError):
    """Raised when a randomized search spends its attempts without a verified instance."""

    pass


class ClassificationError(CtlError):
    """Raised when classification hits an internal inconsistency."""

    pass
