import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import mannwhitneyu

from sbgen.cli.stats import DegenerateSample, EmptySample, mann_whitney_p, pearson_r, vargha_delaney_a12

samples = st.lists(st.integers(0, 6), min_size=1, max_size=7)


def enumerate_a12(xs, ys):
    pairs = list(itertools.product(xs, ys))
    return sum(1.0 if x > y else 0.5 if x == y else 0.0 for x, y in pairs) / len(pairs)


def enumerate_p(xs, ys):
    # every split of the pooled sample into groups of the original sizes
    pooled = sorted(xs + ys)
    ranks = {}
    for v in set(pooled):
        idx = [i + 1 for i, w in enumerate(pooled) if w == v]
        ranks[v] = sum(idx) / len(idx)
    allr = [ranks[v] for v in xs + ys]
    n = len(xs)
    mean = n * sum(allr) / len(allr)
    obs = abs(sum(allr[:n]) - mean)
    splits = list(itertools.combinations(range(len(allr)), n))
    hits = sum(abs(sum(allr[i] for i in s) - mean) >= obs - 1e-9 for s in splits)
    return hits / len(splits)


def test_a12_values():
    assert vargha_delaney_a12([1, 2, 3], [1, 2, 3]) == 0.5
    assert vargha_delaney_a12([5, 6], [1, 2]) == 1.0
    assert vargha_delaney_a12([1, 2], [1, 3]) == 0.375
    with pytest.raises(EmptySample):
        vargha_delaney_a12([], [1])


@given(samples, samples)
def test_a12_matches_enumeration_and_is_antisymmetric(xs, ys):
    assert vargha_delaney_a12(xs, ys) == pytest.approx(enumerate_a12(xs, ys))
    assert vargha_delaney_a12(xs, ys) + vargha_delaney_a12(ys, xs) == pytest.approx(1.0)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(0, 4), min_size=1, max_size=5), st.lists(st.integers(0, 4), min_size=1, max_size=5))
def test_exact_p_matches_enumeration_with_ties(xs, ys):
    if len(set(xs + ys)) == 1:
        assert mann_whitney_p(xs, ys) == 1.0
    else:
        assert mann_whitney_p(xs, ys) == pytest.approx(enumerate_p(xs, ys))


def test_p_values():
    assert mann_whitney_p([3, 3, 3], [3, 3, 3]) == 1.0
    assert mann_whitney_p([1, 2, 3, 4, 5], [6, 7, 8, 9, 10]) < 0.05
    assert mann_whitney_p([1, 3, 5, 7], [2, 4, 6, 8]) > 0.5


def test_exact_agrees_with_scipy_without_ties():
    rng = random.Random(1)
    for _ in range(50):
        xs = [rng.random() for _ in range(rng.randint(1, 8))]
        ys = [rng.random() for _ in range(rng.randint(1, 10))]
        expected = mannwhitneyu(xs, ys, alternative="two-sided", method="exact").pvalue
        assert mann_whitney_p(xs, ys, "exact") == pytest.approx(expected)


def test_large_samples_use_normal_approximation():
    rng = random.Random(2)
    xs = [rng.gauss(0, 1) for _ in range(30)]
    ys = [rng.gauss(0.5, 1) for _ in range(30)]
    expected = mannwhitneyu(xs, ys, alternative="two-sided", method="asymptotic").pvalue
    assert mann_whitney_p(xs, ys) == pytest.approx(expected)


def test_pearson():
    xs = [1.0, 2.0, 4.0, 7.0, 11.0]
    assert pearson_r(xs, [2 * x for x in xs]) == pytest.approx(1.0, abs=1e-12)
    assert pearson_r(xs, [-x for x in xs]) == pytest.approx(-1.0, abs=1e-12)
    ys = [2.0, 1.0, 5.0, 6.0, 9.0]
    mx, my = sum(xs) / 5, sum(ys) / 5
    num = sum((a - mx) * (b - my) for a, b in zip(xs, ys))
    den = (sum((a - mx) ** 2 for a in xs) * sum((b - my) ** 2 for b in ys)) ** 0.5
    assert pearson_r(xs, ys) == pytest.approx(num / den)
    with pytest.raises(DegenerateSample):
        pearson_r([1, 1, 1], [1, 2, 3])
    with pytest.raises(DegenerateSample):
        pearson_r([1, 2], [1, 2])
