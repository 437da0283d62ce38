"""Run test cases against a compiled module and record what they cover."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from ..minidyn.compiler import CompiledModule
from ..testmodel import (
    CallStatement, CollectionStatement, ConstructorStatement, MethodStatement,
    PrimitiveStatement, TestCase,
)
from .distance import comparison_distances, levenshtein, truthiness_distances
from .trace import ExecutionTrace, branch_coverage, coverage_counts, merge_traces
from .values import MiniDynError, MSet, is_hashable
from .vm import BudgetExceeded, Interpreter, ensure_recursion_headroom

__all__ = [
    "ExecutionBudget", "ExecutionResult", "ExecutionTrace", "Outcome", "execute",
    "branch_coverage", "coverage_counts", "merge_traces", "comparison_distances",
    "truthiness_distances", "levenshtein", "BudgetExceeded",
]


@dataclass(frozen=True)
class ExecutionBudget:
    """Instruction fuse and wall-clock limit for one test case.

    The wall clock is only enforced when ``enforce_wall_clock`` is set, so
    that default runs stay reproducible; the fuse always applies.
    """

    max_instructions: int = 1_000_000
    wall_clock_s: float = 1.0
    enforce_wall_clock: bool = False

    def __post_init__(self):
        if self.max_instructions <= 0 or self.wall_clock_s <= 0:
            raise ValueError("budget limits must be positive")


@dataclass
class Outcome:
    kind: str  # value | exception | timeout | not-executed
    value: object = None
    exception: Optional[str] = None


@dataclass
class ExecutionResult:
    outcomes: list
    raised_index: Optional[int] = None
    exception: Optional[str] = None
    timeout: bool = False
    import_error: Optional[str] = None
    instructions: int = 0
    elapsed_s: float = 0.0
    constants: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.raised_index is None and not self.timeout and self.import_error is None

    @property
    def stopped_at(self) -> Optional[int]:
        """Index of the statement that ended execution early, if any."""
        if self.raised_index is not None:
            return self.raised_index
        for i, o in enumerate(self.outcomes):
            if o.kind == "timeout":
                return i
        return None


def _collection(s: CollectionStatement, env: dict):
    if s.kind == "Map":
        m = {}
        for k, v in s.elements:
            key = env[k]
            if not is_hashable(key):
                raise MiniDynError("TypeError", "unhashable key")
            m[key] = env[v]
        return m
    items = [env[v] for v in s.elements]
    if s.kind == "List":
        return items
    if s.kind == "Tuple":
        return tuple(items)
    if not all(is_hashable(x) for x in items):
        raise MiniDynError("TypeError", "unhashable set element")
    return MSet(items)


def evaluate_statement(s, env: dict, glob: dict, interp: Interpreter):
    if isinstance(s, PrimitiveStatement):
        return s.value
    if isinstance(s, CollectionStatement):
        return _collection(s, env)
    assert isinstance(s, CallStatement)
    c = s.callable
    if isinstance(s, MethodStatement):
        f = interp.get_attr(env[s.receiver], c.name)
    else:
        name = c.owner if isinstance(s, ConstructorStatement) else c.name
        if name not in glob:
            raise MiniDynError("NameError", f"name {name!r} is not defined")
        f = glob[name]
    args: list = []
    kwargs: dict = {}
    for p in c.params:
        b = s.bindings.get(p.name)
        if b is None:
            continue
        v = None if b.var is None else env[b.var]
        if b.mode == "positional":
            args.append(v)
        elif b.mode == "keyword":
            kwargs[p.name] = v
        elif b.mode == "star":
            if not isinstance(v, (list, tuple)):
                raise MiniDynError("TypeError", "argument after * must be a List")
            args.extend(v)
        else:
            if not isinstance(v, dict) or not all(isinstance(k, str) for k in v):
                raise MiniDynError("TypeError", "argument after ** must be a Map with Str keys")
            for k, x in v.items():
                if k in kwargs:
                    raise MiniDynError("TypeError", f"multiple values for {k!r}")
                kwargs[k] = x
    return interp.call(f, args, kwargs)


Observer = Callable[[int, object, object, dict], None]


def execute(case: TestCase, module: CompiledModule, budget: ExecutionBudget = ExecutionBudget(),
            seed: int = 0, observer: Optional[Observer] = None) -> tuple[ExecutionResult, ExecutionTrace]:
    """Interpret ``case`` statement by statement against a fresh module instance.

    The module body runs first (import coverage).  The first exception ends
    the case; an exhausted budget marks the statement as timed out and keeps
    the partial trace.  ``seed`` feeds the program's own nondeterminism.
    ``observer(i, statement, value, env)`` sees each completed statement.
    """
    ensure_recursion_headroom()
    interp = Interpreter(module, budget.max_instructions,
                         budget.wall_clock_s if budget.enforce_wall_clock else None, seed)
    started = time.perf_counter()
    n = len(case.statements)
    result = ExecutionResult([])
    try:
        glob = interp.load_module()
    except MiniDynError as e:
        result.import_error = e.cls
        glob = None
    except BudgetExceeded:
        result.import_error = "timeout"
        result.timeout = True
        glob = None
    if glob is not None:
        env: dict = {}
        for i, s in enumerate(case.statements):
            try:
                v = evaluate_statement(s, env, glob, interp)
            except MiniDynError as e:
                result.outcomes.append(Outcome("exception", exception=e.cls))
                result.raised_index = i
                result.exception = e.cls
                break
            except BudgetExceeded:
                result.outcomes.append(Outcome("timeout"))
                result.timeout = True
                break
            env[s.ret] = v
            result.outcomes.append(Outcome("value", v))
            if observer is not None:
                observer(i, s, v, env)
    result.outcomes += [Outcome("not-executed") for _ in range(n - len(result.outcomes))]
    result.instructions = interp.steps
    result.elapsed_s = time.perf_counter() - started
    result.constants = list(interp.tracer.constants.values())
    return result, ExecutionTrace.from_tracer(interp.tracer)
