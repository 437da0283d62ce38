import itertools
import random

import numpy as np
from hypothesis import given, settings, strategies as st

from sbgen.engines import crowding_distance, non_dominated_fronts, preference_sort, tournament

matrices = st.integers(1, 9).flatmap(lambda n: st.integers(1, 4).flatmap(
    lambda g: st.lists(st.lists(st.sampled_from([0.0, 0.25, 0.5, 1.0, 2.0]), min_size=g, max_size=g),
                       min_size=n, max_size=n)))


def dominates(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b)) and any(x < y for x, y in zip(a, b))


def brute_fronts(F):
    left = list(range(len(F)))
    out = []
    while left:
        front = [i for i in left if not any(dominates(F[j], F[i]) for j in left)]
        out.append(front)
        left = [i for i in left if i not in front]
    return out


@settings(max_examples=200)
@given(matrices)
def test_fronts_match_brute_force(rows):
    F = np.array(rows)
    assert non_dominated_fronts(F) == brute_fronts(rows)


@settings(max_examples=200)
@given(matrices, st.data())
def test_preference_sort_puts_goal_champions_first(rows, data):
    F = np.array(rows)
    lengths = data.draw(st.lists(st.integers(1, 5), min_size=len(rows), max_size=len(rows)))
    fronts = preference_sort(F, lengths)
    assert sorted(itertools.chain.from_iterable(fronts)) == list(range(len(rows)))
    first = set(fronts[0])
    for j in range(F.shape[1]):
        best = F[:, j].min()
        tied = [i for i in range(len(rows)) if F[i, j] == best]
        shortest = min(lengths[i] for i in tied)
        # one shortest champion of every goal sits in front 0
        assert any(i in first for i in tied if lengths[i] == shortest)


def test_preference_sort_example():
    F = np.array([[0.0, 1.0], [1.0, 0.0], [0.5, 0.5], [0.9, 0.9]])
    assert preference_sort(F, [3, 3, 3, 3]) == [[0, 1], [2], [3]]


def test_crowding_distance():
    F = np.array([[0.0, 4.0], [1.0, 2.0], [2.0, 1.0], [4.0, 0.0]])
    d = crowding_distance(F)
    assert np.isinf(d[0]) and np.isinf(d[3])
    assert d[1] == (2 - 0) / 4 + (4 - 1) / 4
    assert np.isinf(crowding_distance(F[:2])).all()


def test_tournament_prefers_rank_then_crowding():
    rng = random.Random(0)
    wins = [tournament([1, 0, 0], [0.0, 1.0, 5.0], rng, 3) for _ in range(2000)]
    assert wins.count(2) > wins.count(1) > wins.count(0)
