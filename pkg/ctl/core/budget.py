"""Wall-clock budgets for the exact searches.

Searches call :meth:`TimeBudget.tick` in their inner loops. Looking at the clock
on every call is wasteful, so the clock is only read every ``check_every`` ticks.
"""

from __future__ import annotations

import time
from contextlib import contextmanager
from typing import Iterator, Optional

from ctl.core.config import settings
from ctl.core.errors import BudgetExceededError


class TimeBudget:
    """A deadline shared by every search running on behalf of one request."""

    def __init__(self, seconds: Optional[float] = None, check_every: int = 256):
        self.seconds = float(seconds if seconds is not None else settings.TIME_BUDGET_SECS)
        self.check_every = max(1, check_every)
        self.deadline = time.monotonic() + self.seconds
        self.current_stage = "search"
        self._ticks = 0

    @classmethod
    def ensure(cls, budget: Optional["TimeBudget"]) -> "TimeBudget":
        """Return ``budget`` or a fresh default budget when none was given."""
        return budget if budget is not None else cls()

    def remaining(self) -> float:
        return self.deadline - time.monotonic()

    def tick(self) -> None:
        self._ticks += 1
        if self._ticks % self.check_every == 0:
            self.check()

    def check(self) -> None:
        if time.monotonic() > self.deadline:
            raise BudgetExceededError(self.current_stage, self.seconds)

    @contextmanager
    def stage(self, name: str) -> Iterator["TimeBudget"]:
        """Label the sub-test running inside the block for error reporting."""
        previous = self.current_stage
        self.current_stage = name
        try:
            yield self
        finally:
            self.current_stage = previous
