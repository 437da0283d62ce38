import math
import random

import pytest
from hypothesis import given, strategies as st

from sbgen.cluster import build_test_cluster
from sbgen.executor import ExecutionBudget, branch_coverage, execute
from sbgen.executor.trace import ExecutionTrace
from sbgen.fitness import (
    CoverageGoal, actual_branch_distance, all_goals, approach_level, case_fitness, normalize, suite_fitness,
)
from sbgen.operators import SearchConfig, sample_test_case
from sbgen.testmodel import Binding, FunctionStatement, PrimitiveStatement, TestCase, Var

from conftest import load
from oracles import recompute_coverage, recompute_suite_fitness


@given(st.floats(0, 1e300))
def test_normalize_is_monotone_in_unit_interval(x):
    y = normalize(x)
    assert 0 <= y < 1 or x > 1e15
    assert normalize(x + 1) >= y


def test_normalize_values():
    assert normalize(0) == 0
    assert normalize(1) == 0.5
    assert normalize(math.inf) == 1.0
    with pytest.raises(ValueError):
        normalize(-1)


def call(m, name, *args):
    cl = build_test_cluster(m)
    f = cl.by_qualname(name)
    stmts, binds = [], {}
    for p, a in zip(f.params, args):
        v = Var("Int")
        stmts.append(PrimitiveStatement(v, "Int", a))
        binds[p.name] = Binding(v, "positional")
    stmts.append(FunctionStatement(Var(f.returns), f, binds))
    return execute(TestCase(stmts), m)[1]


def test_branch_distance_needs_two_evaluations():
    _, m = load("examples/control_dependency")
    check = m.code_by_name("check").id
    outer_true = [b for b in m.branches if b.code_id == check][0].id
    once = call(m, "check", 50, 0)
    # evaluated once and missed: the distance is not trusted yet
    assert actual_branch_distance(outer_true, once) == 1.0
    twice = [once, call(m, "check", 45, 0)]
    assert actual_branch_distance(outer_true, twice) == normalize(45 - 42 + 1)


def test_approach_level_for_nested_branch():
    _, m = load("examples/control_dependency")
    deep = m.code_by_name("deep").id
    branches = [b for b in m.branches if b.code_id == deep]
    innermost_true = branches[4].id
    t = call(m, "deep", -1, 0, 0)
    assert approach_level(t, innermost_true, m) == 2
    assert case_fitness(t, CoverageGoal("branch", innermost_true), m) == pytest.approx(2 + normalize(2))
    t = call(m, "deep", 1, 2, 5)
    assert approach_level(t, innermost_true, m) == 0
    assert case_fitness(t, CoverageGoal("branch", innermost_true), m) == pytest.approx(normalize(2))


def test_branchless_goal_fitness():
    _, m = load("flutes/ceil_div")
    goals = [g for g in all_goals(m) if g.kind == "branchless"]
    t = call(m, "ceil_div", 7, 2)
    assert all(case_fitness(t, g, m) == 0 for g in goals)
    assert case_fitness(ExecutionTrace(), goals[0], m) == 1.0


def test_fitness_zero_iff_full_coverage_on_sorting_module():
    _, m = load("algos/sorting")
    cl = build_test_cluster(m)
    rng = random.Random(5)
    cfg = SearchConfig()
    for _ in range(20):
        traces = [execute(sample_test_case(rng, cfg, cl), m, ExecutionBudget(200_000))[1] for _ in range(5)]
        f = suite_fitness(traces, m)
        assert f == pytest.approx(recompute_suite_fitness(traces, m), abs=1e-12)
        assert branch_coverage(traces, m) == pytest.approx(recompute_coverage(traces, m))
        assert (f == 0) == (branch_coverage(traces, m) == 1)
