"""The five generation algorithms: Random, Whole Suite, MOSA, DynaMOSA and MIO."""
from __future__ import annotations

import dataclasses
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..cluster import TestCluster
from ..executor import ExecutionBudget, execute
from ..executor.trace import ExecutionTrace, branch_coverage, merge_traces
from ..fitness import CoverageGoal, all_goals, case_fitness, is_covered, suite_fitness
from ..minidyn.compiler import CompiledModule
from ..operators import (
    GenerationFailed, SearchConfig, StatementBuilder, crossover_cases, crossover_suites,
    mutate_case, mutate_suite, sample_test_case,
)
from ..testmodel import TestCase, TestSuite
from .archive import Archive, update_archive
from .budget import SearchClock, StoppingCondition, Timeline
from .ranking import crowding_distance, preference_sort, tournament


@dataclass(frozen=True)
class GaConfig:
    population_size: int = 50
    crossover_probability: float = 0.75
    tournament_size: int = 5
    elitism: int = 1
    # initial suite sizes for Whole Suite
    min_initial_tests: int = 1
    max_initial_tests: int = 10

    def __post_init__(self):
        if self.population_size < 2:
            raise ValueError("population size must be at least 2")
        if not 1 <= self.tournament_size <= self.population_size:
            raise ValueError("tournament size must lie in [1, population size]")
        if not 0 <= self.elitism < self.population_size:
            raise ValueError("elitism must be smaller than the population")


@dataclass(frozen=True)
class MioConfig:
    """Exploration and exploitation values of (n, R, M) and the focus start F."""

    exploration: tuple = (10, 0.5, 1)
    exploitation: tuple = (1, 0.0, 10)
    focus_start: float = 0.5

    def __post_init__(self):
        if not 0.0 < self.focus_start <= 1.0:
            raise ValueError("focus start must lie in (0, 1]")

    def parameters(self, progress: float) -> tuple[int, float, int]:
        """Linear interpolation up to the focus start, exploitation values after it."""
        f = min(max(progress / self.focus_start, 0.0), 1.0)
        (n0, r0, m0), (n1, r1, m1) = self.exploration, self.exploitation
        n = round(n0 + (n1 - n0) * f)
        r = r0 + (r1 - r0) * f
        m = round(m0 + (m1 - m0) * f)
        return n, r, m


@dataclass
class RunResult:
    algorithm: str
    tests: list
    coverage: float
    timeseries: list
    executions: int
    iterations: int
    elapsed_s: float
    goals: int
    # covered-goal count after every iteration or generation
    covered_history: list = field(default_factory=list)
    failing: list = field(default_factory=list)
    fitness_history: list = field(default_factory=list)
    # DynaMOSA only: (active goals, covered goals) per generation
    active_log: list = field(default_factory=list)
    stats: Counter = field(default_factory=Counter)


class SearchContext:
    """Shared state of one run: the cost clock, execution cache and constant seeding."""

    def __init__(self, module: CompiledModule, cluster: TestCluster, cfg: Optional[SearchConfig],
                 rng: random.Random, stop: Optional[StoppingCondition],
                 budget: Optional[ExecutionBudget] = None):
        self.module = module
        # per-run copy so dynamic constants and counters never leak between runs
        self.cluster = dataclasses.replace(cluster, constants=cluster.constants.copy(), stats=Counter())
        self.cfg = cfg or SearchConfig()
        self.rng = rng
        self.stop = stop or StoppingCondition()
        self.budget = budget or ExecutionBudget()
        self.clock = SearchClock(self.stop.clock)
        self.goals = all_goals(module)
        self.timeline = Timeline(self.stop.budget_s)
        self.executions = 0
        self.iterations = 0
        self.covered_history: list[int] = []
        # loading the module alone covers the module body and class bodies
        self.import_trace = self.run(TestCase())[1]
        self.baseline = frozenset(_covered_goals(self.goals, self.import_trace))

    def run(self, case: TestCase) -> tuple:
        """Execute ``case`` unless a cached result exists."""
        if case.last is not None:
            return case.last
        result, trace = execute(case, self.module, self.budget)
        self.clock.charge_execution(len(case.statements), result.instructions)
        self.cluster.constants.add_dynamic(result.constants)
        self.executions += 1
        case.last = (result, trace)
        return case.last

    def exhausted(self) -> bool:
        if self.stop.max_evaluations is not None and self.executions >= self.stop.max_evaluations:
            return True
        return self.clock.elapsed >= self.stop.budget_s

    def record(self, covered: int) -> None:
        total = len(self.goals)
        self.timeline.advance(self.clock.elapsed, covered / total if total else 1.0)
        self.covered_history.append(covered)

    def complete(self, covered: int) -> bool:
        return self.stop.early_exit and covered >= len(self.goals)

    def sample(self) -> Optional[TestCase]:
        try:
            return sample_test_case(self.rng, self.cfg, self.cluster)
        except GenerationFailed:
            self.clock.charge_generation()
            return None

    def result(self, name: str, tests: list, **kw) -> RunResult:
        traces = [t.last[1] for t in tests if t.last is not None] + [self.import_trace]
        return RunResult(
            name, tests, branch_coverage(traces, self.module),
            self.timeline.finish(), self.executions, self.iterations, self.clock.elapsed,
            len(self.goals), self.covered_history, stats=Counter(self.cluster.stats), **kw)


def _covered_goals(goals, trace: ExecutionTrace) -> set:
    return {g for g in goals if is_covered(g, trace)}


# --- Random -------------------------------------------------------------------


def run_random(module: CompiledModule, cluster: TestCluster, cfg: Optional[SearchConfig] = None,
               rng: Optional[random.Random] = None, stop: Optional[StoppingCondition] = None,
               budget: Optional[ExecutionBudget] = None) -> RunResult:
    """Feedback-directed random generation.

    Extends a random passing sequence (or an empty one) by a call to a random
    public callable; duplicates are skipped.  The reported suite keeps the
    sequences that added coverage when they were found.
    """
    ctx = SearchContext(module, cluster, cfg, rng or random.Random(0), stop, budget)
    rng, cfg = ctx.rng, ctx.cfg
    passing: list[TestCase] = []
    failing: list[TestCase] = []
    seen: set = set()
    covered: set = set(ctx.baseline)
    contributors: list[TestCase] = []
    ctx.record(len(covered))
    while not ctx.exhausted() and not ctx.complete(len(covered)) and ctx.cluster.accessible:
        ctx.iterations += 1
        ctx.clock.charge_generation()
        c = rng.choice(ctx.cluster.accessible)
        k = rng.randrange(len(passing) + 1)
        base = passing[k] if k < len(passing) and len(passing[k].statements) < cfg.L else TestCase()
        new = base.clone()
        new.last = None
        try:
            StatementBuilder(new, rng, cfg, ctx.cluster).call(c, len(new.statements), 0)
        except GenerationFailed:
            continue
        key = new.key()
        if len(new.statements) > cfg.L or key in seen:
            continue
        seen.add(key)
        result, trace = ctx.run(new)
        (passing if result.passed else failing).append(new)
        gained = _covered_goals(ctx.goals, trace) - covered
        if gained:
            covered |= gained
            contributors.append(new)
        ctx.record(len(covered))
    return ctx.result("random", contributors, failing=failing)


# --- Whole Suite --------------------------------------------------------------


def _suite_eval(ctx: SearchContext, suite: TestSuite) -> tuple[float, int]:
    traces = [ctx.run(c)[1] for c in suite.cases] + [ctx.import_trace]
    return suite_fitness(merge_traces(traces), ctx.module), sum(len(c.statements) for c in suite.cases)


def run_whole_suite(module: CompiledModule, cluster: TestCluster, cfg: Optional[SearchConfig] = None,
                    rng: Optional[random.Random] = None, stop: Optional[StoppingCondition] = None,
                    ga: Optional[GaConfig] = None, budget: Optional[ExecutionBudget] = None) -> RunResult:
    """Monotonic GA over test suites, minimising the summed branch distances."""
    ctx = SearchContext(module, cluster, cfg, rng or random.Random(0), stop, budget)
    rng, cfg, ga = ctx.rng, ctx.cfg, ga or GaConfig()
    pop: list[TestSuite] = []
    for _ in range(ga.population_size):
        cases = [c for c in (ctx.sample() for _ in range(rng.randint(ga.min_initial_tests, ga.max_initial_tests)))
                 if c is not None]
        pop.append(TestSuite(cases))
    scores = [_suite_eval(ctx, s) for s in pop]
    best_i = min(range(len(pop)), key=lambda i: scores[i])
    best, best_score = pop[best_i], scores[best_i]
    fitness_history = [best_score[0]]

    def covered_count(suite):
        traces = [c.last[1] for c in suite.cases] + [ctx.import_trace]
        return len(_covered_goals(ctx.goals, merge_traces(traces)))

    ctx.record(covered_count(best))
    while not ctx.exhausted() and not ctx.complete(covered_count(best)):
        ctx.iterations += 1
        order = sorted(range(len(pop)), key=lambda i: scores[i])
        new_pop = [pop[i] for i in order[:ga.elitism]]
        new_scores = [scores[i] for i in order[:ga.elitism]]
        rank = {i: r for r, i in enumerate(order)}
        ranks = [rank[i] for i in range(len(pop))]
        zeros = [0.0] * len(pop)
        while len(new_pop) < ga.population_size:
            ctx.clock.charge_generation()
            i1 = tournament(ranks, zeros, rng, ga.tournament_size)
            i2 = tournament(ranks, zeros, rng, ga.tournament_size)
            p1, p2 = pop[i1], pop[i2]
            if rng.random() < ga.crossover_probability:
                o1, o2 = crossover_suites(p1, p2, rng)
            else:
                o1, o2 = p1.clone(), p2.clone()
            mutate_suite(o1, rng, cfg, ctx.cluster)
            mutate_suite(o2, rng, cfg, ctx.cluster)
            s1, s2 = _suite_eval(ctx, o1), _suite_eval(ctx, o2)
            if min(s1, s2) < min(scores[i1], scores[i2]):
                new_pop += [o1, o2]
                new_scores += [s1, s2]
            else:
                new_pop += [p1, p2]
                new_scores += [scores[i1], scores[i2]]
        pop, scores = new_pop[:ga.population_size], new_scores[:ga.population_size]
        gen_best = min(range(len(pop)), key=lambda i: scores[i])
        if scores[gen_best] < best_score:
            best, best_score = pop[gen_best], scores[gen_best]
        fitness_history.append(best_score[0])
        ctx.record(covered_count(best))
    return ctx.result("ws", list(best.cases), fitness_history=fitness_history)


# --- MOSA and DynaMOSA -----------------------------------------------------------


def goal_dependencies(module: CompiledModule, goal: CoverageGoal) -> frozenset:
    """Branch goals that control ``goal``; a predicate's own branches are ignored."""
    if goal.kind == "branchless":
        return frozenset()
    b = module.branches[goal.id]
    cdg = module.cdg(b.code_id)
    if cdg.predicate_is_root(b.predicate_id):
        return frozenset()
    own = {2 * b.predicate_id, 2 * b.predicate_id + 1}
    return frozenset(CoverageGoal("branch", d) for d in cdg.branch_dependencies(b.predicate_id) if d not in own)


def active_goals(module: CompiledModule, goals: list, covered: set, deps: dict) -> list:
    """Uncovered goals whose control dependencies are all covered."""
    return [g for g in goals if g not in covered and deps[g] <= covered]


def _mosa(name: str, module, cluster, cfg, rng, stop, ga, budget, dynamic: bool) -> RunResult:
    ctx = SearchContext(module, cluster, cfg, rng or random.Random(0), stop, budget)
    rng, cfg, ga = ctx.rng, ctx.cfg, ga or GaConfig()
    archive = Archive(ctx.goals, ctx.baseline)
    deps = {g: goal_dependencies(module, g) for g in ctx.goals}
    fit_cache: dict = {}

    def targets() -> list:
        if dynamic:
            return active_goals(module, ctx.goals, archive.covered, deps)
        return archive.uncovered()

    def evaluate(cases):
        for c in cases:
            ctx.run(c)
        update_archive(archive, [(c, c.last[1]) for c in cases])

    def matrix(cases, goals):
        F = np.empty((len(cases), len(goals)))
        for i, c in enumerate(cases):
            row = fit_cache.setdefault(id(c.last[1]), {})
            for j, g in enumerate(goals):
                if g not in row:
                    row[g] = case_fitness(c.last[1], g, module)
                F[i, j] = row[g]
        return F

    pop = [c for c in (ctx.sample() for _ in range(ga.population_size)) if c is not None]
    evaluate(pop)
    active_log = []
    ctx.record(len(archive))
    ranks = [0] * len(pop)
    crowd = [0.0] * len(pop)
    while pop and not ctx.exhausted() and not ctx.complete(len(archive)):
        goals = targets()
        if dynamic:
            active_log.append((frozenset(goals), frozenset(archive.covered)))
        if not goals:
            break
        ctx.iterations += 1
        offspring: list[TestCase] = []
        while len(offspring) < ga.population_size:
            ctx.clock.charge_generation()
            p1 = pop[tournament(ranks, crowd, rng, ga.tournament_size)]
            p2 = pop[tournament(ranks, crowd, rng, ga.tournament_size)]
            if rng.random() < ga.crossover_probability:
                o1, o2 = crossover_cases(p1, p2, rng, ctx.cluster, cfg)
            else:
                o1, o2 = p1.clone(), p2.clone()
            for o in (o1, o2):
                mutate_case(o, rng, cfg, ctx.cluster, o.last[0] if o.last else None)
                if o.statements:
                    offspring.append(o)
                else:
                    ctx.clock.charge_generation()
                    if ctx.exhausted():
                        break
            if ctx.exhausted():
                break
        evaluate(offspring)
        union = pop + offspring
        goals = targets()
        if not goals:
            pop = union[:ga.population_size]
            ctx.record(len(archive))
            break
        F = matrix(union, goals)
        fronts = preference_sort(F, [len(c.statements) for c in union])
        chosen: list[int] = []
        new_rank, new_crowd = [], []
        for r, front in enumerate(fronts):
            d = crowding_distance(F[front])
            if len(chosen) + len(front) <= ga.population_size:
                chosen += front
                new_rank += [r] * len(front)
                new_crowd += d.tolist()
            else:
                order = sorted(range(len(front)), key=lambda k: -d[k])
                take = order[:ga.population_size - len(chosen)]
                chosen += [front[k] for k in take]
                new_rank += [r] * len(take)
                new_crowd += [float(d[k]) for k in take]
                break
        pop = [union[i] for i in chosen]
        ranks, crowd = new_rank, new_crowd
        alive = {id(c.last[1]) for c in pop}
        fit_cache = {k: v for k, v in fit_cache.items() if k in alive}
        ctx.record(len(archive))
    if dynamic:
        active_log.append((frozenset(targets()), frozenset(archive.covered)))
    return ctx.result(name, archive.cases(), active_log=active_log)


def run_mosa(module: CompiledModule, cluster: TestCluster, cfg: Optional[SearchConfig] = None,
             rng: Optional[random.Random] = None, stop: Optional[StoppingCondition] = None,
             ga: Optional[GaConfig] = None, budget: Optional[ExecutionBudget] = None) -> RunResult:
    """Many-objective GA with preference sorting over all uncovered goals."""
    return _mosa("mosa", module, cluster, cfg, rng, stop, ga, budget, dynamic=False)


def run_dynamosa(module: CompiledModule, cluster: TestCluster, cfg: Optional[SearchConfig] = None,
                 rng: Optional[random.Random] = None, stop: Optional[StoppingCondition] = None,
                 ga: Optional[GaConfig] = None, budget: Optional[ExecutionBudget] = None) -> RunResult:
    """MOSA restricted to goals whose controlling branches are already covered."""
    return _mosa("dynamosa", module, cluster, cfg, rng, stop, ga, budget, dynamic=True)


# --- MIO --------------------------------------------------------------------------


def _reached(goal: CoverageGoal, trace: ExecutionTrace, module: CompiledModule) -> bool:
    if goal.kind == "branchless":
        return goal.id in trace.executed
    return module.branches[goal.id].code_id in trace.executed


def run_mio(module: CompiledModule, cluster: TestCluster, cfg: Optional[SearchConfig] = None,
            rng: Optional[random.Random] = None, stop: Optional[StoppingCondition] = None,
            mio: Optional[MioConfig] = None, budget: Optional[ExecutionBudget] = None) -> RunResult:
    """Many independent objectives: per-goal populations, sampling focus and a shifting exploit phase."""
    ctx = SearchContext(module, cluster, cfg, rng or random.Random(0), stop, budget)
    rng, cfg, mio = ctx.rng, ctx.cfg, mio or MioConfig()
    archive = Archive(ctx.goals, ctx.baseline)
    pops: dict[CoverageGoal, list] = {}  # goal -> [(fitness, case)]
    counters: Counter = Counter()
    n, R, M = mio.parameters(0.0)
    current: Optional[TestCase] = None
    m = 1
    max_seen = 0
    ctx.record(len(archive))
    while not ctx.exhausted() and not ctx.complete(len(archive)):
        ctx.iterations += 1
        ctx.clock.charge_generation()
        if current is not None and m < M:
            p = current.clone()
            mutate_case(p, rng, cfg, ctx.cluster, p.last[0] if p.last else None)
            m += 1
        elif current is None or rng.random() < R or not any(pops.values()):
            p = ctx.sample()
            m = 1
        else:
            live = [g for g in ctx.goals if pops.get(g)]
            low = min(counters[g] for g in live)
            g = rng.choice([x for x in live if counters[x] == low])
            counters[g] += 1
            p = rng.choice(pops[g])[1].clone()
            mutate_case(p, rng, cfg, ctx.cluster, p.last[0] if p.last else None)
            m = 1
        if p is None or not p.statements:
            current = None
            continue
        result, trace = ctx.run(p)
        current = p
        update_archive(archive, [(p, trace)])
        for g in ctx.goals:
            if g in archive:
                pops.pop(g, None)
                continue
            if not _reached(g, trace, module):
                continue
            f = case_fitness(trace, g, module)
            zs = pops.setdefault(g, [])
            if not zs or f < min(x[0] for x in zs):
                counters[g] = 0
            zs.append((f, p))
            _shrink(zs, n)
            max_seen = max(max_seen, len(zs))
        n, R, M = mio.parameters(ctx.clock.elapsed / ctx.stop.budget_s)
        for zs in pops.values():
            _shrink(zs, n)
        ctx.record(len(archive))
    res = ctx.result("mio", archive.cases())
    res.stats["max_population"] = max_seen
    return res


def _shrink(zs: list, n: int) -> None:
    """Drop the worst tests (highest fitness, then longest) until at most n remain."""
    while len(zs) > n:
        worst = max(range(len(zs)), key=lambda i: (zs[i][0], len(zs[i][1].statements), i))
        del zs[worst]


ALGORITHMS: dict[str, Callable[..., RunResult]] = {
    "random": run_random,
    "ws": run_whole_suite,
    "mosa": run_mosa,
    "dynamosa": run_dynamosa,
    "mio": run_mio,
}


def run_algorithm(name: str, module: CompiledModule, cluster: TestCluster, seed: int = 0,
                  stop: Optional[StoppingCondition] = None, cfg: Optional[SearchConfig] = None,
                  budget: Optional[ExecutionBudget] = None) -> RunResult:
    if name not in ALGORITHMS:
        raise KeyError(f"unknown algorithm {name!r}")
    return ALGORITHMS[name](module, cluster, cfg, random.Random(seed), stop, budget=budget)
