"""Search budgets, the cost clock and 1 s coverage time series."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Optional

# Cost model of the virtual clock.  One virtual second buys UNITS_PER_SECOND
# units; an execution costs a fixed overhead, a per-statement charge and one
# unit per interpreted instruction.  Generating a candidate that is never run
# (a duplicate, a failed insertion) still costs GENERATION_COST.
UNITS_PER_SECOND = 100_000
EXECUTION_OVERHEAD = 1_000
STATEMENT_COST = 40
GENERATION_COST = 200


@dataclass(frozen=True)
class StoppingCondition:
    """Search budget plus the full-coverage early exit.

    ``clock`` is ``"virtual"`` (deterministic cost units) or ``"wall"``.
    """

    budget_s: float = 30.0
    max_evaluations: Optional[int] = None
    early_exit: bool = True
    clock: str = "virtual"

    def __post_init__(self):
        if self.budget_s <= 0:
            raise ValueError("budget must be positive")
        if self.clock not in ("virtual", "wall"):
            raise ValueError(f"unknown clock {self.clock!r}")


class SearchClock:
    def __init__(self, kind: str = "virtual"):
        self.kind = kind
        self.units = 0
        self._start = time.perf_counter()

    def charge_execution(self, statements: int, instructions: int) -> None:
        self.units += EXECUTION_OVERHEAD + STATEMENT_COST * statements + instructions

    def charge_generation(self) -> None:
        self.units += GENERATION_COST

    @property
    def elapsed(self) -> float:
        if self.kind == "wall":
            return time.perf_counter() - self._start
        return self.units / UNITS_PER_SECOND


@dataclass
class Timeline:
    """Coverage sampled at every whole second of search time."""

    budget_s: float
    points: list = field(default_factory=list)
    _current: float = 0.0

    def advance(self, now: float, coverage: float) -> None:
        """Record ``coverage`` as reached at time ``now``.

        Work that overruns the budget (the last iteration may) counts at the
        budget's end.
        """
        now = min(now, self.budget_s)
        last = min(math.floor(now), math.floor(self.budget_s))
        while len(self.points) <= last:
            s = len(self.points)
            self.points.append((s, coverage if s >= now else self._current))
        if self.points and self.points[-1][0] == now:
            self.points[-1] = (self.points[-1][0], coverage)
        self._current = coverage

    def finish(self) -> list:
        end = math.floor(self.budget_s)
        while len(self.points) <= end:
            self.points.append((len(self.points), self._current))
        return self.points
