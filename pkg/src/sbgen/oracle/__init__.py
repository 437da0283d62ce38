"""Regression oracle: stable assertions, expected exceptions and mutant-based minimization."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from ..executor import ExecutionBudget, execute
from ..executor.testfile import run_tests
from ..minidyn.compiler import CompiledModule
from ..minidyn.syntax import ModuleAst
from ..testmodel import TestCase, render
from .assertions import Assertion, base_assertions, declared_for, exception_assertions, literal
from .kill import (
    KILLED, SURVIVED, TIMEOUT, KillMatrix, classify, exception_outcome, minimize_assertions,
    mutant_fuse, mutation_score, run_against,
)
from .mutation import AOR, LCR, ROR, Mutant, generate_mutants
from .observation import Observation, assertable, observe, snapshot

__all__ = [
    "Assertion", "base_assertions", "exception_assertions", "declared_for", "literal",
    "KillMatrix", "minimize_assertions", "mutation_score", "mutant_fuse", "classify",
    "exception_outcome", "run_against", "KILLED", "SURVIVED", "TIMEOUT",
    "Mutant", "generate_mutants", "AOR", "ROR", "LCR",
    "Observation", "observe", "assertable", "snapshot",
    "OracleResult", "generate_oracle", "verify_kills",
]


@dataclass
class OracleResult:
    cases: list[TestCase]
    fuses: list[int]
    mutants: list[Mutant]
    matrix: KillMatrix
    excluded: list[tuple[TestCase, str]] = field(default_factory=list)

    @property
    def score(self) -> Optional[float]:
        return mutation_score(self.matrix)


def _prepare(case: TestCase, module: CompiledModule, seeds: Sequence[int],
             budget: ExecutionBudget, regression: bool) -> tuple[Optional[TestCase], str, int]:
    """Add assertions to a copy of ``case``; returns (case or None, reason, fuse)."""
    case = case.clone()
    case.assertions = []
    case.expected_exception = None
    case.xfail = False
    runs = [execute(case, module, budget, seed=s)[0] for s in seeds]
    first = runs[0]
    if any(r.timeout for r in runs):
        return None, "timeout", 0
    if any((r.raised_index, r.exception) != (first.raised_index, first.exception) for r in runs):
        return None, "flaky exception", 0
    if first.raised_index is not None:
        exception_assertions(case, first, declared_for(case, first.raised_index))
    if regression and not case.xfail:
        case.assertions = base_assertions(case, module, seeds, budget)
    return case, "", mutant_fuse(first.instructions)


def generate_oracle(cases: Sequence[TestCase], module_ast: ModuleAst, module: CompiledModule,
                    seeds: Sequence[int] = (0, 1), mutate: bool = True, regression: bool = True,
                    budget: ExecutionBudget = ExecutionBudget()) -> OracleResult:
    """Attach regression assertions to copies of ``cases`` and minimize them against mutants.

    Raising cases always get their expected-exception or expected-failure
    marker; ``regression=False`` skips the value assertions.

    Cases that time out, or whose exception behaviour changes between the
    repeated executions, are excluded rather than emitted.
    """
    kept, fuses, excluded = [], [], []
    for c in cases:
        prepared, reason, fuse = _prepare(c, module, seeds, budget, regression)
        if prepared is None:
            excluded.append((c, reason))
        else:
            kept.append(prepared)
            fuses.append(fuse)
    mutants = generate_mutants(module_ast) if mutate else []
    matrix = minimize_assertions(kept, mutants, fuses, seed=seeds[0])
    return OracleResult(kept, fuses, mutants, matrix, excluded)


def verify_kills(result: OracleResult, module_ast: ModuleAst, seed: int = 0) -> list[tuple[int, int]]:
    """Replay the rendered tests; return killed pairs that do not reproduce.

    A pair reproduces when the test passes on the original module and fails
    on the mutant.
    """
    source = render(result.cases)
    names = [f"test_case_{i}" for i in range(len(result.cases))]
    fuse = dict(zip(names, result.fuses))
    original = run_tests(module_ast, source, fuse, seed=seed)
    per_mutant = {}
    bad = []
    for t, j in result.matrix.killed_pairs():
        m = result.mutants[j]
        if j not in per_mutant:
            per_mutant[j] = run_tests(m.ast, source, fuse, seed=seed)
        if original[names[t]].status != "pass" or per_mutant[j][names[t]].status != "fail":
            bad.append((t, j))
    return bad
