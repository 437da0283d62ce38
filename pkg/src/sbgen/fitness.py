"""Suite- and goal-level fitness functions."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Union

from .executor.trace import ExecutionTrace, merge_traces
from .minidyn.cdg import ControlDependenceGraph
from .minidyn.compiler import CompiledModule


def normalize(x: float) -> float:
    """x / (x + 1), with the value at infinity taken as 1."""
    if x < 0:
        raise ValueError("distances are non-negative")
    if math.isinf(x):
        return 1.0
    return x / (x + 1.0)


@dataclass(frozen=True)
class CoverageGoal:
    kind: str  # branchless | branch
    id: int  # code object id or branch id

    def __str__(self) -> str:
        return f"{self.kind}:{self.id}"


def all_goals(module: CompiledModule) -> list[CoverageGoal]:
    goals = [CoverageGoal("branchless", c) for c in module.branchless_code_ids]
    goals += [CoverageGoal("branch", b.id) for b in module.branches]
    return goals


def is_covered(goal: CoverageGoal, trace: ExecutionTrace) -> bool:
    if goal.kind == "branchless":
        return goal.id in trace.executed
    return goal.id in trace.covered


def _as_trace(traces) -> ExecutionTrace:
    if isinstance(traces, ExecutionTrace):
        return traces
    return merge_traces(traces)


def actual_branch_distance(branch_id: int, traces) -> float:
    """d(b, T): 0 if covered, ν(d_min) once the predicate ran twice, else 1."""
    trace = _as_trace(traces)
    if branch_id in trace.covered:
        return 0.0
    if trace.counts.get(branch_id // 2, 0) >= 2:
        return normalize(trace.distance(branch_id))
    return 1.0


def suite_fitness(traces, module: CompiledModule) -> float:
    """|C_L \\ C_T| plus the sum of d(b, T) over all branches."""
    trace = _as_trace(traces)
    missing = sum(1 for c in module.branchless_code_ids if c not in trace.executed)
    return missing + sum(actual_branch_distance(b.id, trace) for b in module.branches)


def nearest_executed(cdg: ControlDependenceGraph, node: int,
                     executed: Union[set, frozenset]) -> tuple[int, set]:
    """Walk control dependences upward from ``node``.

    Returns the number of dependence steps to the closest governing node in
    ``executed`` and the edge labels reaching ``node``'s side at that level.
    When no governing node was executed the full depth is returned with no
    labels.
    """
    seen = {node}
    frontier = deque([(node, 0)])
    best_level = None
    labels: set = set()
    depth = 0
    while frontier:
        n, lvl = frontier.popleft()
        if best_level is not None and lvl >= best_level:
            break
        for src, label in cdg.deps.get(n, ()):
            if src == cdg.cfg.entry:
                depth = max(depth, lvl + 1)
                continue
            if src in executed:
                if best_level is None:
                    best_level = lvl + 1
                if lvl + 1 == best_level:
                    labels.add(label)
            elif src not in seen:
                seen.add(src)
                frontier.append((src, lvl + 1))
    if best_level is not None:
        return best_level, labels
    return max(depth, cdg.level.get(node, depth)), set()


def approach_level(trace: ExecutionTrace, branch_id: int, module: CompiledModule) -> int:
    return _approach(trace, branch_id, module)[0]


def _approach(trace: ExecutionTrace, branch_id: int, module: CompiledModule) -> tuple[int, float]:
    b = module.branches[branch_id]
    pid = b.predicate_id
    if trace.counts.get(pid, 0) > 0:
        return 0, trace.distance(branch_id)
    cdg = module.cdg(b.code_id)
    node = cdg.node_of_predicate(pid)
    if b.code_id not in trace.executed:
        return cdg.level.get(node, 1), math.inf
    executed_nodes = {n for n, p in cdg.cfg.predicate_of.items() if trace.counts.get(p, 0) > 0}
    level, labels = nearest_executed(cdg, node, executed_nodes)
    dist = min((trace.distance(lbl) for lbl in labels), default=math.inf)
    return level, dist


def case_fitness(trace: ExecutionTrace, goal: CoverageGoal, module: CompiledModule) -> float:
    """f_c for branchless code objects, approach level plus ν(distance) for branches."""
    if goal.kind == "branchless":
        return 0.0 if goal.id in trace.executed else 1.0
    if goal.id in trace.covered:
        return 0.0
    level, dist = _approach(trace, goal.id, module)
    return level + normalize(dist)


def goal_vector(trace: ExecutionTrace, goals: Iterable[CoverageGoal], module: CompiledModule) -> list[float]:
    return [case_fitness(trace, g, module) for g in goals]
