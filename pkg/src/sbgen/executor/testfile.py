"""Run rendered MiniDyn test files against a module (or a mutant of it).

Tests and module are compiled together so that the tests can call the
module's functions directly.  Each test gets a fresh module instance.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from ..minidyn.compiler import compile_module
from ..minidyn.parser import parse_module
from ..minidyn.syntax import ModuleAst
from .values import MiniDynError
from .vm import BudgetExceeded, Interpreter, ensure_recursion_headroom


@dataclass(frozen=True)
class TestOutcome:
    __test__ = False  # not a pytest class
    status: str  # pass | fail | timeout
    detail: str = ""
    instructions: int = 0


def test_names(tests: ModuleAst) -> list[str]:
    return [f.name for f in tests.functions if f.name.startswith("test_")]


def run_tests(module: ModuleAst, tests, fuse: Union[int, dict] = 1_000_000,
              only: Optional[list[str]] = None, seed: int = 0) -> dict[str, TestOutcome]:
    """Run every ``test_*`` function of ``tests`` (source text or AST).

    ``fuse`` is an instruction budget, either shared or per test name.
    ``seed`` drives the program's own randomness.  An ``@xfail`` test passes
    only if its body raises.
    """
    ensure_recursion_headroom()
    if isinstance(tests, str):
        tests = parse_module(tests, "tests")
    merged = ModuleAst(module.name, tuple(module.items) + tuple(tests.items))
    compiled = compile_module(merged)
    xfail = {f.name: f.xfail for f in tests.functions}
    out: dict[str, TestOutcome] = {}
    for name in only if only is not None else test_names(tests):
        limit = fuse.get(name, 1_000_000) if isinstance(fuse, dict) else fuse
        interp = Interpreter(compiled, limit, None, seed)
        try:
            glob = interp.load_module()
            interp.call(glob[name], [], {})
        except MiniDynError as e:
            status = "pass" if xfail[name] else "fail"
            out[name] = TestOutcome(status, e.cls, interp.steps)
            continue
        except BudgetExceeded:
            out[name] = TestOutcome("timeout", "budget", interp.steps)
            continue
        if xfail[name]:
            out[name] = TestOutcome("fail", "expected failure passed", interp.steps)
        else:
            out[name] = TestOutcome("pass", "", interp.steps)
    return out
