import random
from collections import Counter

import pytest

from sbgen.cluster import build_test_cluster
from sbgen.executor import ExecutionBudget, execute
from sbgen.operators import (
    MUTATIONS, GenerationFailed, SearchConfig, change_statement, choose_mutation, crossover_cases,
    crossover_suites, insert_statement, mutate_case, mutate_suite, remove_statement, sample_test_case,
)
from sbgen.testmodel import TestSuite, render, validate_test_case

from conftest import load


@pytest.fixture(scope="module")
def setting():
    _, m = load("shapes/geometry")
    return m, build_test_cluster(m), SearchConfig()


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(crossover_probability=1.5)
    with pytest.raises(ValueError):
        SearchConfig(delta_int=0)


def test_sampled_cases_are_valid(setting):
    m, cl, cfg = setting
    rng = random.Random(1)
    for _ in range(200):
        c = sample_test_case(rng, cfg, cl)
        assert 1 <= len(c) <= cfg.L
        assert validate_test_case(c, cfg.L) == []


def test_sampling_fails_without_callables():
    _, m = load("flutes/timing")
    with pytest.raises(GenerationFailed):
        sample_test_case(random.Random(0), SearchConfig(), build_test_cluster(m))


def test_mutations_keep_cases_valid(setting):
    m, cl, cfg = setting
    rng = random.Random(2)
    for _ in range(300):
        c = sample_test_case(rng, cfg, cl)
        result, _ = execute(c, m, ExecutionBudget(100_000))
        mutate_case(c, rng, cfg, cl, result)
        assert validate_test_case(c, cfg.L) == []
        if c.statements:
            i = rng.randrange(len(c))
            remove_statement(c, i, rng)
            assert validate_test_case(c, cfg.L) == []
        if c.statements:
            change_statement(c, rng.randrange(len(c)), rng, cfg, cl)
            assert validate_test_case(c, cfg.L) == []
        insert_statement(c, rng, cfg, cl)
        assert validate_test_case(c, cfg.L) == []


def test_mutation_choice_is_uniform():
    rng = random.Random(3)
    counts = Counter(choose_mutation(rng) for _ in range(30_000))
    assert set(counts) == set(MUTATIONS)
    assert all(abs(n / 30_000 - 1 / 3) < 0.02 for n in counts.values())


def test_case_crossover_offspring_are_valid(setting):
    m, cl, cfg = setting
    rng = random.Random(4)
    for _ in range(300):
        p1, p2 = sample_test_case(rng, cfg, cl), sample_test_case(rng, cfg, cl)
        for o in crossover_cases(p1, p2, rng, cl, cfg):
            assert validate_test_case(o, cfg.L) == []


def test_case_crossover_at_zero_swaps_parents(setting):
    m, cl, cfg = setting
    rng = random.Random(5)
    p1, p2 = sample_test_case(rng, cfg, cl), sample_test_case(rng, cfg, cl)
    o1, o2 = crossover_cases(p1, p2, rng, cl, cfg, alpha=0.0)
    # every statement of p2's tail refers to p2's own earlier statements, so nothing needs repair
    assert render(o1) == render(p2) and render(o2) == render(p1)


@pytest.mark.parametrize("n1,n2", [(4, 4), (2, 8), (1, 9), (7, 3)])
def test_suite_crossover_size_inequality(setting, n1, n2):
    m, cl, cfg = setting
    rng = random.Random(6)
    p1 = TestSuite([sample_test_case(rng, cfg, cl) for _ in range(n1)])
    p2 = TestSuite([sample_test_case(rng, cfg, cl) for _ in range(n2)])
    for _ in range(50):
        o1, o2 = crossover_suites(p1, p2, rng)
        assert abs(len(o1) - len(o2)) <= abs(n1 - n2)
        assert max(len(o1), len(o2)) <= max(n1, n2)
        assert len(o1) + len(o2) == n1 + n2


def test_suite_crossover_of_identical_parents(setting):
    m, cl, cfg = setting
    rng = random.Random(7)
    p = TestSuite([sample_test_case(rng, cfg, cl) for _ in range(3)])
    o1, o2 = crossover_suites(p, p.clone(), rng, alpha=0.5)
    assert [render(c) for c in o1.cases] == [render(c) for c in p.cases] == [render(c) for c in o2.cases]


def test_suite_mutation_respects_bounds(setting):
    m, cl, cfg = setting
    rng = random.Random(8)
    T = TestSuite([sample_test_case(rng, cfg, cl) for _ in range(3)])
    for _ in range(100):
        mutate_suite(T, rng, cfg, cl)
        assert len(T) <= cfg.N
        assert all(c.statements and validate_test_case(c, cfg.L) == [] for c in T.cases)
