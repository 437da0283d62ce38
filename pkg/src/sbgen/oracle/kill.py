"""Running tests against mutants: kill matrix, assertion minimization, mutation score."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Optional, Sequence

from ..executor import ExecutionBudget, ExecutionResult
from ..executor.values import exception_matches
from ..testmodel import TestCase
from .assertions import Assertion
from .observation import Observation, observe
from .mutation import Mutant

KILLED, SURVIVED, TIMEOUT = "killed", "survived", "timeout"
MIN_FUSE = 100_000


def mutant_fuse(original_instructions: int) -> int:
    """Instruction budget for a mutant run: four times the original, with a floor."""
    return max(4 * original_instructions, MIN_FUSE)


@dataclass
class MutantRun:
    result: ExecutionResult
    observations: list[Observation]

    @property
    def timeout(self) -> bool:
        return self.result.timeout


def exception_outcome(case: TestCase, result: ExecutionResult) -> Optional[bool]:
    """Whether the exception behaviour alone fails the test (None on timeout)."""
    if result.timeout:
        return None
    if case.xfail:
        return result.raised_index is None
    if case.expected_exception is not None:
        i, cls = case.expected_exception
        if result.raised_index is None:
            return True
        return result.raised_index != i or not exception_matches(result.exception, cls)
    return result.raised_index is not None


def failing_assertions(case: TestCase, run: MutantRun) -> list[Assertion]:
    return [a for a in case.assertions if not a.holds(run.observations[a.position])]


def classify(case: TestCase, run: MutantRun) -> str:
    by_exc = exception_outcome(case, run.result)
    if by_exc is None:
        return TIMEOUT
    if by_exc:
        return KILLED
    if not case.xfail and failing_assertions(case, run):
        return KILLED
    return SURVIVED


@dataclass
class KillMatrix:
    """``outcomes[t][m]`` is killed, survived or timeout for test t and mutant m."""

    mutants: list[Mutant]
    outcomes: list[list[str]] = field(default_factory=list)

    def killed(self) -> set[int]:
        return {m.id for j, m in enumerate(self.mutants)
                if any(row[j] == KILLED for row in self.outcomes)}

    def killed_pairs(self) -> list[tuple[int, int]]:
        return [(t, j) for t, row in enumerate(self.outcomes) for j, o in enumerate(row) if o == KILLED]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["test", "mutant", "operator", "line", "description", "outcome"])
        for t, row in enumerate(self.outcomes):
            for j, o in enumerate(row):
                m = self.mutants[j]
                w.writerow([f"test_case_{t}", m.id, m.operator, m.line, m.description, o])
        return buf.getvalue()


def mutation_score(matrix: KillMatrix) -> Optional[float]:
    """Killed mutants over generated mutants; None when there are none."""
    if not matrix.mutants:
        return None
    return len(matrix.killed()) / len(matrix.mutants)


def run_against(case: TestCase, mutant: Mutant, fuse: int, seed: int = 0) -> MutantRun:
    result, obs = observe(case, mutant.compiled, seed=seed, budget=ExecutionBudget(max_instructions=fuse))
    return MutantRun(result, obs)


def minimize_assertions(cases: Sequence[TestCase], mutants: Sequence[Mutant],
                        fuses: Sequence[int], seed: int = 0) -> KillMatrix:
    """Drop assertions that never fail on a mutant the test does not already kill.

    An assertion survives iff some non-timeout mutant, not killed by the
    test's exception behaviour, makes it fail.  With no mutants every
    assertion is kept.  Cases are edited in place; the returned matrix
    describes the minimized cases (minimization never changes a kill).
    """
    matrix = KillMatrix(list(mutants))
    for case, fuse in zip(cases, fuses):
        row = []
        useful: set[int] = set()
        for m in mutants:
            run = run_against(case, m, fuse, seed)
            row.append(classify(case, run))
            by_exc = exception_outcome(case, run.result)
            if by_exc is False and not case.xfail:
                useful.update(id(a) for a in failing_assertions(case, run))
        if mutants:
            case.assertions = [a for a in case.assertions if id(a) in useful]
        matrix.outcomes.append(row)
    return matrix
