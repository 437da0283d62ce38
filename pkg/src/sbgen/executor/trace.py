"""Execution traces and the branch-coverage formula."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable


@dataclass
class ExecutionTrace:
    """Executed code objects, taken branches and minimal branch distances.

    ``counts`` holds, per executed predicate, how often it was evaluated;
    ``dmin`` holds both branch distances of every executed predicate.
    """

    executed: set = field(default_factory=set)
    covered: set = field(default_factory=set)
    counts: dict = field(default_factory=dict)
    dmin: dict = field(default_factory=dict)

    @classmethod
    def from_tracer(cls, tracer) -> "ExecutionTrace":
        counts = {p: c for p, c in enumerate(tracer.counts) if c}
        dmin = {}
        covered = set()
        for p in counts:
            for b in (2 * p, 2 * p + 1):
                d = tracer.dmin[b]
                dmin[b] = d
                if d == 0.0:
                    covered.add(b)
        return cls(set(tracer.executed), covered, counts, dmin)

    def distance(self, branch_id: int) -> float:
        return self.dmin.get(branch_id, math.inf)

    def merge(self, other: "ExecutionTrace") -> "ExecutionTrace":
        """Pointwise union: sets are joined, counts summed, distances minimised."""
        out = ExecutionTrace(self.executed | other.executed, self.covered | other.covered,
                             dict(self.counts), dict(self.dmin))
        for p, c in other.counts.items():
            out.counts[p] = out.counts.get(p, 0) + c
        for b, d in other.dmin.items():
            if d < out.dmin.get(b, math.inf):
                out.dmin[b] = d
        return out


def merge_traces(traces: Iterable[ExecutionTrace]) -> ExecutionTrace:
    out = ExecutionTrace()
    for t in traces:
        out = out.merge(t)
    return out


def coverage_counts(trace: ExecutionTrace, module) -> tuple[int, int]:
    """``(covered goals, total goals)`` for the branch-coverage formula."""
    branchless = module.branchless_code_ids
    hit = sum(1 for c in branchless if c in trace.executed) + len(trace.covered)
    return hit, len(branchless) + len(module.branches)


def branch_coverage(traces, module) -> float:
    """(|C_T ∩ C_L| + |B_T|) / (|C_L| + |B|) over the union of ``traces``."""
    if isinstance(traces, ExecutionTrace):
        traces = [traces]
    traces = list(traces)
    if not traces:
        return 0.0
    hit, total = coverage_counts(merge_traces(traces), module)
    return hit / total if total else 1.0
