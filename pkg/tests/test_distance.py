import math

import pytest
from hypothesis import given, settings, strategies as st

from sbgen.executor.distance import (
    COMPLEMENT, K, comparison_distances, falsy_distance, holds, levenshtein, truthiness_distances,
)
from sbgen.executor.values import MSet

from strategies import OPS, values


def dp_edit_distance(a, b) -> int:
    # full-table Wagner-Fischer, written independently of the library version
    rows, cols = len(a) + 1, len(b) + 1
    t = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        t[i][0] = i
    for j in range(cols):
        t[0][j] = j
    for i in range(1, rows):
        for j in range(1, cols):
            t[i][j] = min(t[i - 1][j] + 1, t[i][j - 1] + 1, t[i - 1][j - 1] + (a[i - 1] != b[j - 1]))
    return t[-1][-1]


@pytest.mark.parametrize("op,a,b,expected", [
    ("==", 3, 7, (4.0, 0.0)),
    ("<", 5, 3, (3.0, 0.0)),
    ("<", 3, 5, (0.0, 3.0)),
    ("<=", 5, 5, (0.0, 1.0)),
    ("<=", 6, 5, (2.0, 0.0)),
    (">", 5, 5, (1.0, 0.0)),
    (">=", 2, 5, (4.0, 0.0)),
    ("!=", 4, 4, (K, 0.0)),
    ("==", "abc", "abd", (1.0, 0.0)),
    ("==", "abc", "abc", (0.0, K)),
    ("in", 3, [1, 5], (2.0, 0.0)),
    ("in", 3, [1, 3], (0.0, K)),
    ("not in", "x", "abc", (0.0, K)),
    ("is", None, None, (0.0, K)),
    ("is not", None, None, (K, 0.0)),
])
def test_spot_values(op, a, b, expected):
    assert comparison_distances(op, a, b) == expected


def test_truthiness_spot_values():
    assert truthiness_distances(0) == (1.0, 0.0)
    assert truthiness_distances(5) == (0.0, 5.0)
    assert truthiness_distances(-2.5) == (0.0, 2.5)
    assert truthiness_distances("ab") == (0.0, 2.0)
    assert truthiness_distances([]) == (1.0, 0.0)
    assert truthiness_distances(None) == (1.0, 0.0)


def test_string_equality_matches_edit_distance_oracle():
    assert comparison_distances("==", "abc", "abd")[0] == dp_edit_distance("abc", "abd") == 1


@settings(max_examples=300)
@given(st.text(max_size=8), st.text(max_size=8))
def test_levenshtein_matches_table_oracle(a, b):
    assert levenshtein(a, b) == dp_edit_distance(a, b)


@settings(max_examples=500)
@given(st.sampled_from(OPS), values, values)
def test_distance_axioms(op, a, b):
    dt, df = comparison_distances(op, a, b)
    assert (dt == 0) == holds(op, a, b)
    assert (dt == 0) != (df == 0)
    assert dt >= 0 and df >= 0
    assert comparison_distances(COMPLEMENT[op], a, b) == (df, dt)


@settings(max_examples=300)
@given(values)
def test_truthiness_axioms(v):
    dt, df = truthiness_distances(v)
    assert (dt == 0) == bool(v)
    assert (dt == 0) != (df == 0)


@settings(max_examples=200)
@given(st.integers(-10**9, 10**9), st.integers(-10**9, 10**9))
def test_integer_distances_are_exact(a, b):
    assert comparison_distances("==", a, b)[0] == abs(a - b)
    if a >= b:
        assert comparison_distances("<", a, b)[0] == a - b + 1


def test_distinct_close_floats_never_get_zero_distance():
    a, b = 1.0, math.nextafter(1.0, 2.0)
    assert comparison_distances("==", a, b)[0] > 0


def test_unordered_operands():
    # sets and dicts are not ordered, so < is false at an infinite distance
    assert comparison_distances("<", MSet([1]), MSet([2])) == (math.inf, 0.0)
    assert comparison_distances(">=", {1: 2}, 3) == (0.0, math.inf)
    assert falsy_distance(object()) == math.inf
