"""Snapshots of the values a test case produces, statement by statement."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..executor import ExecutionBudget, ExecutionResult, execute
from ..executor.values import Instance, MSet
from ..minidyn.compiler import CompiledModule
from ..testmodel import MethodStatement, TestCase

_PRIMITIVES = (bool, int, float, str, bytes)


def assertable(v) -> bool:
    """Builtin values made only of builtin values can be compared literally."""
    if v is None or isinstance(v, _PRIMITIVES):
        return True
    if isinstance(v, (list, tuple, MSet)):
        return all(assertable(x) for x in v)
    if isinstance(v, dict):
        return all(assertable(k) and assertable(x) for k, x in v.items())
    return False


def snapshot(v):
    """Deep copy of an assertable value."""
    if isinstance(v, list):
        return [snapshot(x) for x in v]
    if isinstance(v, tuple):
        return tuple(snapshot(x) for x in v)
    if isinstance(v, MSet):
        return MSet(v)
    if isinstance(v, dict):
        return {k: snapshot(x) for k, x in v.items()}
    return v


def public_attributes(obj: Instance) -> dict:
    return {k: snapshot(v) for k, v in obj.attrs.items() if not k.startswith("_") and assertable(v)}


_MISSING = object()


@dataclass
class Observation:
    """What statement i left behind; ``value`` is ``_MISSING`` for opaque values."""

    executed: bool = False
    value: object = _MISSING
    is_none: bool = False
    attrs: dict = field(default_factory=dict)
    length: Optional[int] = None
    receiver_attrs: dict = field(default_factory=dict)
    exception: Optional[str] = None

    @property
    def has_value(self) -> bool:
        return self.value is not _MISSING


def _observe_value(v, obs: Observation) -> None:
    obs.is_none = v is None
    if assertable(v):
        obs.value = snapshot(v)
    if isinstance(v, Instance):
        obs.attrs = public_attributes(v)
    if isinstance(v, (list, tuple, dict, MSet, str, bytes)):
        obs.length = len(v)


def observe(case: TestCase, module: CompiledModule, seed: int = 0,
            budget: Optional[ExecutionBudget] = None) -> tuple[ExecutionResult, list[Observation]]:
    """Execute ``case`` once and snapshot every statement right after it ran."""
    obs = [Observation() for _ in case.statements]

    def observer(i, stmt, value, env):
        o = obs[i]
        o.executed = True
        _observe_value(value, o)
        if isinstance(stmt, MethodStatement):
            recv = env.get(stmt.receiver)
            if isinstance(recv, Instance):
                o.receiver_attrs = public_attributes(recv)

    result, _ = execute(case, module, budget or ExecutionBudget(), seed=seed, observer=observer)
    if result.raised_index is not None:
        obs[result.raised_index].exception = result.exception
    return result, obs
