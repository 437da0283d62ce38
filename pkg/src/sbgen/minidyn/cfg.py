"""Basic-block control-flow graphs over MiniDyn bytecode."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .compiler import (
    CMP_JUMP_IF_FALSE, CMP_JUMP_IF_TRUE, CONDITIONAL_JUMPS, JUMP, JUMP_IF_FALSE,
    JUMP_IF_TRUE, SETUP_RAISES, TERMINATORS, CodeObject,
)


@dataclass(frozen=True)
class BasicBlock:
    id: int
    start: int
    end: int  # exclusive


@dataclass
class ControlFlowGraph:
    """A graph with one synthetic entry and one synthetic exit node.

    ``succ`` maps a node to ``(successor, label)`` pairs.  For an edge that
    leaves a conditional jump the label is the branch id it realises;
    other edges carry ``None``.
    """

    nodes: list[int]
    entry: int
    exit: int
    succ: dict[int, list[tuple[int, Optional[int]]]]
    blocks: dict[int, BasicBlock] = field(default_factory=dict)
    predicate_of: dict[int, int] = field(default_factory=dict)

    @property
    def pred(self) -> dict[int, list[tuple[int, Optional[int]]]]:
        out: dict[int, list] = {n: [] for n in self.nodes}
        for n, ss in self.succ.items():
            for s, label in ss:
                out[s].append((n, label))
        return out

    def successors(self, n: int) -> list[int]:
        return [s for s, _ in self.succ[n]]

    def block_of_offset(self, offset: int) -> int:
        for b in self.blocks.values():
            if b.start <= offset < b.end:
                return b.id
        raise KeyError(offset)

    def has_back_edge(self) -> bool:
        """True if a depth-first walk from entry meets a back edge."""
        state: dict[int, int] = {}
        stack = [(self.entry, iter(self.successors(self.entry)))]
        state[self.entry] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                state[node] = 2
                stack.pop()
            elif state.get(nxt) == 1:
                return True
            elif nxt not in state:
                state[nxt] = 1
                stack.append((nxt, iter(self.successors(nxt))))
        return False


def build_cfg(code: CodeObject) -> ControlFlowGraph:
    """Split ``code`` into basic blocks and connect them.

    Returns, raises and failed ``raises`` blocks flow to the synthetic exit.
    """
    ins = code.instructions
    n = len(ins)
    leaders = {0}
    for i, (op, arg) in enumerate(ins):
        if op == JUMP:
            leaders.add(arg)
            leaders.add(i + 1)
        elif op in (JUMP_IF_FALSE, JUMP_IF_TRUE):
            leaders.add(arg[0])
            leaders.add(i + 1)
        elif op in (CMP_JUMP_IF_FALSE, CMP_JUMP_IF_TRUE):
            leaders.add(arg[1])
            leaders.add(i + 1)
        elif op == SETUP_RAISES:
            leaders.add(arg[1])
            leaders.add(i + 1)
        elif op in TERMINATORS:
            leaders.add(i + 1)
    starts = sorted(x for x in leaders if x < n)
    blocks = {}
    block_at = {}
    for bid, s in enumerate(starts):
        e = starts[bid + 1] if bid + 1 < len(starts) else n
        blocks[bid] = BasicBlock(bid, s, e)
        block_at[s] = bid
    k = len(blocks)
    entry, exit_ = k, k + 1
    succ: dict[int, list] = {b: [] for b in range(k + 2)}
    predicate_of = {}
    if k:
        succ[entry].append((0, None))
    else:
        succ[entry].append((exit_, None))
    for bid, b in blocks.items():
        op, arg = ins[b.end - 1]
        fall = block_at.get(b.end, exit_)
        if op == JUMP:
            succ[bid].append((block_at[arg], None))
        elif op in CONDITIONAL_JUMPS:
            if op in (JUMP_IF_FALSE, JUMP_IF_TRUE):
                target, pid = arg
            else:
                _, target, pid = arg
            true_b, false_b = 2 * pid, 2 * pid + 1
            jump_label = false_b if op in (JUMP_IF_FALSE, CMP_JUMP_IF_FALSE) else true_b
            fall_label = true_b if jump_label == false_b else false_b
            succ[bid].append((fall, fall_label))
            succ[bid].append((block_at[target], jump_label))
            predicate_of[bid] = pid
        elif op == SETUP_RAISES:
            succ[bid].append((fall, None))
            succ[bid].append((block_at.get(arg[1], exit_), None))
        elif op in TERMINATORS:
            succ[bid].append((exit_, None))
        else:
            succ[bid].append((fall, None))
    return ControlFlowGraph(list(range(k + 2)), entry, exit_, succ, blocks, predicate_of)


def graph_from_edges(n_nodes: int, edges: list[tuple[int, int]], entry: int, exit_: int) -> ControlFlowGraph:
    """Build an abstract CFG; edges out of nodes with two successors get labels ``(src, i)``."""
    succ: dict[int, list] = {v: [] for v in range(n_nodes)}
    out_deg: dict[int, int] = {}
    for a, _ in edges:
        out_deg[a] = out_deg.get(a, 0) + 1
    for a, b in edges:
        label = (a, len(succ[a])) if out_deg[a] > 1 else None
        succ[a].append((b, label))
    return ControlFlowGraph(list(range(n_nodes)), entry, exit_, succ)
