"""Regression assertions and the two-run flakiness filter."""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Optional, Sequence

from ..executor import ExecutionBudget, ExecutionResult
from ..executor.values import Approx, MSet, exception_matches
from ..minidyn.compiler import CompiledModule
from ..minidyn.syntax import (
    Arg, Assert, Attribute, Call, Compare, Const, ListLit, MapLit, Name, SetLit, TupleLit,
)
from ..testmodel import CallStatement, MethodStatement, TestCase, Var, _assigns
from .observation import Observation, observe

KINDS = ("value", "float", "attribute", "length", "not-none")


def literal(v):
    """MiniDyn expression for an assertable value."""
    if v is None:
        return Const("none", None)
    if isinstance(v, bool):
        return Const("bool", v)
    if isinstance(v, int):
        return Const("int", v)
    if isinstance(v, float):
        return Const("float", v)
    if isinstance(v, str):
        return Const("str", v)
    if isinstance(v, bytes):
        return Const("bytes", v)
    if isinstance(v, list):
        return ListLit(tuple(literal(x) for x in v))
    if isinstance(v, tuple):
        return TupleLit(tuple(literal(x) for x in v))
    if isinstance(v, MSet):
        if not len(v):
            return Call(Name("set"))
        return SetLit(tuple(literal(x) for x in v))
    if isinstance(v, dict):
        return MapLit(tuple((literal(k), literal(x)) for k, x in v.items()))
    raise TypeError(f"no literal for {type(v).__name__}")


def _expected_expr(v):
    if isinstance(v, float):
        return Call(Name("approx"), (_arg(Const("float", v)),))
    return literal(v)


def _arg(e) -> Arg:
    return Arg("pos", e)


@dataclass(frozen=True, eq=False)
class Assertion:
    """A check on the variable ``var`` placed right after statement ``position``."""

    kind: str
    position: int
    var: Var
    expected: object = None
    attr: Optional[str] = None
    # attribute read from the receiver of a method call rather than its result
    on_receiver: bool = False

    def to_stmt(self, names) -> Assert:
        target = Name(names[self.var])
        if self.kind == "not-none":
            return Assert(Compare("is not", target, Const("none", None)))
        if self.kind == "length":
            return Assert(Compare("==", Call(Name("len"), (_arg(target),)), Const("int", self.expected)))
        if self.kind == "attribute":
            target = Attribute(target, self.attr)
        if self.expected is None:
            return Assert(Compare("is", target, Const("none", None)))
        return Assert(Compare("==", target, _expected_expr(self.expected)))

    def remap(self, mapping: dict) -> "Assertion":
        return replace(self, var=mapping.get(self.var, self.var))

    def holds(self, obs: Observation) -> bool:
        """Whether the observation of the same statement satisfies this assertion."""
        if not obs.executed:
            return False
        if self.kind == "not-none":
            return not obs.is_none
        if self.kind == "length":
            return obs.length == self.expected
        if self.kind == "attribute":
            attrs = obs.receiver_attrs if self.on_receiver else obs.attrs
            if self.attr not in attrs:
                return False
            return _equal(self.expected, attrs[self.attr])
        if not obs.has_value:
            return False
        return _equal(self.expected, obs.value)


def _equal(expected, actual) -> bool:
    if expected is None:
        return actual is None
    if isinstance(expected, float):
        return Approx(expected) == actual
    try:
        return bool(expected == actual)
    except TypeError:
        return False


def _candidates(case: TestCase, i: int, o: Observation) -> list[list[Assertion]]:
    """Candidate assertions for statement i, grouped by priority (best first)."""
    s = case.statements[i]
    groups: list[list[Assertion]] = []
    if _assigns(s):
        v = s.ret
        if o.has_value:
            # an assertable value that differs between runs gets no weaker stand-in
            kind = "float" if isinstance(o.value, float) else "value"
            return [[Assertion(kind, i, v, o.value)]]
        if o.attrs:
            groups.append([Assertion("attribute", i, v, x, k) for k, x in o.attrs.items()])
        if o.length is not None:
            groups.append([Assertion("length", i, v, o.length)])
        if not o.is_none:
            groups.append([Assertion("not-none", i, v)])
    return groups


def base_assertions(case: TestCase, module: CompiledModule, seeds: Sequence[int] = (0, 1),
                    budget: Optional[ExecutionBudget] = None) -> list[Assertion]:
    """Assertions on call results that agree across repeated executions.

    Each execution uses a different entropy seed; a candidate survives only
    if it holds in every run.  Assertable results are compared directly;
    other objects get the first stable group among public attributes,
    length and not-None.
    """
    runs = [observe(case, module, seed=s, budget=budget)[1] for s in seeds]
    first = runs[0]
    out: list[Assertion] = []
    for i, s in enumerate(case.statements):
        if not isinstance(s, CallStatement) or not all(r[i].executed for r in runs):
            continue
        for group in _candidates(case, i, first[i]):
            stable = [a for a in group if all(a.holds(r[i]) for r in runs)]
            if stable:
                out += stable
                break
        if isinstance(s, MethodStatement):
            for k, x in first[i].receiver_attrs.items():
                a = Assertion("attribute", i, s.receiver, x, k, on_receiver=True)
                if all(a.holds(r[i]) for r in runs):
                    out.append(a)
    return out


def exception_assertions(case: TestCase, result: ExecutionResult, declared: Iterable[str]) -> Optional[str]:
    """Mark the raising statement as expected, or the whole case as expected to fail.

    Statements after the raising one never ran, so they are dropped.  Returns
    ``"raises"``, ``"xfail"`` or None for a case that did not raise.
    """
    i = result.raised_index
    if i is None:
        return None
    del case.statements[i + 1:]
    case.assertions = [a for a in case.assertions if a.position < i]
    if any(exception_matches(result.exception, d) for d in declared):
        case.expected_exception = (i, result.exception)
        return "raises"
    case.xfail = True
    return "xfail"


def declared_for(case: TestCase, index: int) -> frozenset:
    s = case.statements[index]
    if isinstance(s, CallStatement):
        return s.callable.declared_exceptions
    return frozenset()
