"""Goal-indexed archive of the shortest known covering test cases."""
from __future__ import annotations

from typing import Iterable

from ..executor.trace import ExecutionTrace
from ..fitness import CoverageGoal, is_covered
from ..testmodel import TestCase


class Archive:
    """``baseline`` goals count as covered without a stored case (import coverage)."""

    def __init__(self, goals: Iterable[CoverageGoal], baseline: Iterable[CoverageGoal] = ()):
        self.goals = list(goals)
        self.baseline = frozenset(baseline)
        self.entries: dict[CoverageGoal, tuple[TestCase, ExecutionTrace]] = {}

    @property
    def covered(self) -> set:
        return set(self.entries) | self.baseline

    def __len__(self) -> int:
        return len(self.covered)

    def __contains__(self, goal) -> bool:
        return goal in self.entries or goal in self.baseline

    def uncovered(self) -> list[CoverageGoal]:
        return [g for g in self.goals if g not in self]

    def cases(self) -> list[TestCase]:
        """Distinct stored cases, in goal order."""
        seen: set = set()
        out = []
        for g in self.goals:
            if g in self.entries:
                c = self.entries[g][0]
                if id(c) not in seen:
                    seen.add(id(c))
                    out.append(c)
        return out

    def traces(self) -> list[ExecutionTrace]:
        return [self.entries[g][1] for g in self.goals if g in self.entries]


def update_archive(archive: Archive, candidates: Iterable[tuple[TestCase, ExecutionTrace]]) -> list[CoverageGoal]:
    """Store covering candidates; a stored entry only yields to a strictly shorter case.

    Returns the goals covered for the first time.
    """
    new = []
    for case, trace in candidates:
        stored = None
        for g in archive.goals:
            if g in archive.baseline or not is_covered(g, trace):
                continue
            old = archive.entries.get(g)
            if old is None or len(case.statements) < len(old[0].statements):
                if stored is None:
                    stored = case.clone()
                if old is None:
                    new.append(g)
                archive.entries[g] = (stored, trace)
    return new
