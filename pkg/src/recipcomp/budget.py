"""Cooperative step budgets for the semidecision searches."""

from __future__ import annotations

import threading


class BudgetExhausted(RuntimeError):
    """The search ran out of steps; the answer is unknown, not negative."""


class Budget:
    """A step counter shared by one search.  ``cancel()`` may be called from
    another thread; the search notices on its next ``spend``."""

    def __init__(self, steps: int = 2000):
        self.limit = steps
        self.used = 0
        self._cancel = threading.Event()

    @classmethod
    def of(cls, budget) -> "Budget":
        if isinstance(budget, Budget):
            return budget
        return cls(2000 if budget is None else int(budget))

    def spend(self, k: int = 1):
        if self._cancel.is_set():
            raise BudgetExhausted("cancelled")
        self.used += k
        if self.used > self.limit:
            raise BudgetExhausted(f"budget of {self.limit} steps exhausted")

    @property
    def remaining(self) -> int:
        return max(0, self.limit - self.used)

    def cancel(self):
        self._cancel.set()

    def report(self) -> dict:
        return {"budget": self.limit, "used": min(self.used, self.limit)}
