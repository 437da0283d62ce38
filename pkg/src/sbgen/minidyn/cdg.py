"""Post-dominator trees and control-dependence graphs."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Optional

from .cfg import ControlFlowGraph

ENTRY_LABEL = "entry"


def _postorder(succ: dict, root) -> list:
    seen = {root}
    out = []
    stack = [(root, iter(succ[root]))]
    while stack:
        node, it = stack[-1]
        nxt = next(it, None)
        if nxt is None:
            out.append(node)
            stack.pop()
        elif nxt not in seen:
            seen.add(nxt)
            stack.append((nxt, iter(succ[nxt])))
    return out


def immediate_postdominators(cfg: ControlFlowGraph) -> dict[int, Optional[int]]:
    """Cooper/Harvey/Kennedy iteration on the reversed graph, rooted at exit.

    Nodes that cannot reach the exit are absent from the result.
    """
    rsucc: dict[int, list[int]] = {n: [] for n in cfg.nodes}  # reversed edges
    for n, ss in cfg.succ.items():
        for s, _ in ss:
            if n not in rsucc[s]:
                rsucc[s].append(n)
    order = _postorder(rsucc, cfg.exit)
    index = {n: i for i, n in enumerate(order)}
    rpo = list(reversed(order))
    fwd = {n: [s for s, _ in cfg.succ[n] if s in index] for n in cfg.nodes}
    idom: dict[int, Optional[int]] = {cfg.exit: cfg.exit}

    def intersect(a: int, b: int) -> int:
        while a != b:
            while index[a] < index[b]:
                a = idom[a]
            while index[b] < index[a]:
                b = idom[b]
        return a

    changed = True
    while changed:
        changed = False
        for n in rpo:
            if n == cfg.exit:
                continue
            new = None
            for p in fwd[n]:  # predecessors in the reversed graph
                if p in idom:
                    new = p if new is None else intersect(p, new)
            if new is not None and idom.get(n) != new:
                idom[n] = new
                changed = True
    idom[cfg.exit] = None
    return idom


@dataclass
class ControlDependenceGraph:
    """Control dependences between CFG nodes.

    ``deps[n]`` holds the ``(node, label)`` edges ``n`` is control dependent
    on; the synthetic entry appears as ``(entry, "entry")``.
    """

    cfg: ControlFlowGraph
    ipdom: dict[int, Optional[int]]
    deps: dict[int, set[tuple[int, Hashable]]]
    dependents: dict[tuple[int, Hashable], set[int]] = field(default_factory=dict)
    level: dict[int, int] = field(default_factory=dict)

    def is_root(self, node: int) -> bool:
        return (self.cfg.entry, ENTRY_LABEL) in self.deps.get(node, ())

    def governing_edges(self, node: int) -> set[tuple[int, Hashable]]:
        return {d for d in self.deps.get(node, ()) if d[0] != self.cfg.entry}

    def edges(self) -> set[tuple[tuple[int, Hashable], int]]:
        return {(d, n) for n, ds in self.deps.items() for d in ds}

    # branch-level views for compiled code
    def node_of_predicate(self, pid: int) -> int:
        for node, p in self.cfg.predicate_of.items():
            if p == pid:
                return node
        raise KeyError(pid)

    def branch_dependencies(self, pid: int) -> set[int]:
        """Branch ids governing predicate ``pid`` (entry excluded)."""
        node = self.node_of_predicate(pid)
        return {label for _, label in self.governing_edges(node)}

    def predicate_is_root(self, pid: int) -> bool:
        return self.is_root(self.node_of_predicate(pid))

    def predicate_depth(self, pid: int) -> int:
        return self.level.get(self.node_of_predicate(pid), 0)


def control_dependence(cfg: ControlFlowGraph) -> ControlDependenceGraph:
    """Ferrante/Ottenstein/Warren construction over the post-dominator tree.

    The entry is treated as a predicate with an extra edge to the exit, so
    nodes executed on every run depend on it.
    """
    ipdom = immediate_postdominators(cfg)
    deps: dict[int, set] = {n: set() for n in cfg.nodes}
    edges = [(x, s, label) for x, ss in cfg.succ.items() for s, label in ss]
    edges = [(x, s, ENTRY_LABEL if x == cfg.entry else label) for x, s, label in edges]
    for x, s, label in edges:
        if x not in ipdom or s not in ipdom:
            continue
        stop = cfg.exit if x == cfg.entry else ipdom[x]
        runner = s
        while runner is not None and runner != stop:
            deps[runner].add((x, label))
            runner = ipdom[runner]
    dependents: dict[tuple, set[int]] = {}
    for n, ds in deps.items():
        for d in ds:
            dependents.setdefault(d, set()).add(n)
    # breadth-first levels: entry-dependent nodes sit at level 1
    level = {cfg.entry: 0}
    queue = deque([cfg.entry])
    while queue:
        x = queue.popleft()
        for (src, label), ys in dependents.items():
            if src != x:
                continue
            for y in ys:
                if y not in level:
                    level[y] = level[x] + 1
                    queue.append(y)
    return ControlDependenceGraph(cfg, ipdom, deps, dependents, level)
