"""Independent reference implementations used by the tests."""
import random

from sbgen.minidyn.cdg import ENTRY_LABEL
from sbgen.minidyn.cfg import graph_from_edges


def random_cfg(rng: random.Random, n: int):
    """Random CFG with entry 0, exit n-1, every node reachable, out-degree at most 2."""
    exit_ = n - 1
    succ = {v: [] for v in range(n)}
    for v in range(1, n):
        parent = rng.choice([u for u in range(v) if u != exit_ and len(succ[u]) < 2])
        succ[parent].append(v)
    for u in range(n - 1):
        if len(succ[u]) < 2 and rng.random() < 0.6:
            t = rng.randrange(1, n)
            if t not in succ[u]:
                succ[u].append(t)
        if not succ[u]:
            succ[u].append(exit_)
    edges = [(u, v) for u in range(n) for v in succ[u]]
    return graph_from_edges(n, edges, 0, exit_)


def reaches_exit(cfg) -> set:
    pred = {n: [] for n in cfg.nodes}
    for a, ss in cfg.succ.items():
        for b, _ in ss:
            pred[b].append(a)
    seen, stack = {cfg.exit}, [cfg.exit]
    while stack:
        for p in pred[stack.pop()]:
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return seen


def postdominator_sets(cfg) -> dict:
    """Cubic fixpoint of pdom(n) = {n} + intersection over successors, entry linked to exit."""
    live = reaches_exit(cfg)
    succ = {n: [s for s, _ in cfg.succ[n] if s in live] for n in live}
    succ[cfg.entry] = succ.get(cfg.entry, []) + [cfg.exit]
    pdom = {n: set(live) for n in live}
    pdom[cfg.exit] = {cfg.exit}
    changed = True
    while changed:
        changed = False
        for n in live:
            if n == cfg.exit:
                continue
            new = set(live)
            for s in succ[n]:
                new &= pdom[s]
            new |= {n}
            if new != pdom[n]:
                pdom[n] = new
                changed = True
    return pdom


def brute_force_deps(cfg) -> dict:
    """y depends on edge (x, label) iff y post-dominates the edge target but not x strictly."""
    pdom = postdominator_sets(cfg)
    deps = {n: set() for n in cfg.nodes}
    for x, ss in cfg.succ.items():
        if x not in pdom:
            continue
        for s, label in ss:
            if s not in pdom:
                continue
            label = ENTRY_LABEL if x == cfg.entry else label
            for y in pdom:
                if y in pdom[s] and not (y in pdom[x] and y != x):
                    deps[y].add((x, label))
    return deps


def diamond():
    return graph_from_edges(6, [(0, 1), (1, 2), (1, 3), (2, 4), (3, 4), (4, 5)], 0, 5)


def loop():
    return graph_from_edges(5, [(0, 1), (1, 2), (1, 4), (2, 3), (3, 1)], 0, 4)


def nested_loops():
    edges = [(0, 1), (1, 2), (1, 7), (2, 3), (3, 4), (3, 6), (4, 5), (5, 3), (6, 1)]
    return graph_from_edges(8, edges, 0, 7)


def recompute_suite_fitness(traces, module) -> float:
    """Suite fitness straight from the per-case traces, without merging them."""
    total = 0.0
    for c in module.branchless_code_ids:
        if not any(c in t.executed for t in traces):
            total += 1
    for b in module.branches:
        if any(b.id in t.covered for t in traces):
            continue
        runs = sum(t.counts.get(b.predicate_id, 0) for t in traces)
        if runs >= 2:
            d = min((t.dmin.get(b.id, float("inf")) for t in traces), default=float("inf"))
            total += 1.0 if d == float("inf") else d / (d + 1)
        else:
            total += 1.0
    return total


def recompute_coverage(traces, module) -> float:
    hit = sum(1 for c in module.branchless_code_ids if any(c in t.executed for t in traces))
    hit += sum(1 for b in module.branches if any(b.id in t.covered for t in traces))
    return hit / (len(module.branchless_code_ids) + len(module.branches))
