"""Effect size, rank test and correlation used to compare configurations."""
from __future__ import annotations

import statistics
from typing import Sequence

import numpy as np
from scipy.stats import mannwhitneyu, rankdata

EXACT_LIMIT = 8


class EmptySample(ValueError):
    pass


class DegenerateSample(ValueError):
    pass


def _check(xs, ys) -> tuple[np.ndarray, np.ndarray]:
    if len(xs) == 0 or len(ys) == 0:
        raise EmptySample("both samples must be non-empty")
    return np.asarray(xs, dtype=float), np.asarray(ys, dtype=float)


def vargha_delaney_a12(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Probability that a draw from xs beats one from ys, ties counting half."""
    x, y = _check(xs, ys)
    gt = (x[:, None] > y[None, :]).sum()
    eq = (x[:, None] == y[None, :]).sum()
    return float((gt + 0.5 * eq) / (len(x) * len(y)))


def _exact_p(x: np.ndarray, y: np.ndarray) -> float:
    """Two-sided p by enumerating rank sums of every size-n subset of the pooled ranks.

    Midranks are doubled so that tied samples stay on an integer grid.
    """
    n = len(x)
    ranks = (2 * rankdata(np.concatenate([x, y]))).astype(int)
    total = int(ranks.sum())
    # dp[k][s]: number of k-subsets with doubled rank sum s
    dp = np.zeros((n + 1, total + 1), dtype=float)
    dp[0, 0] = 1.0
    for r in ranks:
        for k in range(n, 0, -1):
            dp[k, r:] += dp[k - 1, :total + 1 - r]
    dist = dp[n]
    sums = np.arange(total + 1)
    expected = n * total / len(ranks)
    observed = abs(ranks[:n].sum() - expected)
    extreme = np.abs(sums - expected) >= observed - 1e-9
    return float(min(1.0, dist[extreme].sum() / dist.sum()))


def mann_whitney_p(xs: Sequence[float], ys: Sequence[float], method: str = "auto") -> float:
    """Two-sided Mann-Whitney U p-value.

    ``auto`` enumerates exactly when the smaller sample has at most eight
    values and otherwise uses the normal approximation with tie and
    continuity corrections.
    """
    x, y = _check(xs, ys)
    if method == "auto":
        method = "exact" if min(len(x), len(y)) <= EXACT_LIMIT else "asymptotic"
    if np.all(np.concatenate([x, y]) == x[0]):
        return 1.0
    if method == "exact":
        return _exact_p(x, y) if len(x) <= len(y) else _exact_p(y, x)
    if method == "asymptotic":
        res = mannwhitneyu(x, y, alternative="two-sided", method="asymptotic", use_continuity=True)
        return float(min(1.0, res.pvalue))
    raise ValueError(f"unknown method {method!r}")


def pearson_r(xs: Sequence[float], ys: Sequence[float]) -> float:
    if len(xs) != len(ys) or len(xs) < 3:
        raise DegenerateSample("need two samples of equal length, at least 3")
    try:
        return statistics.correlation([float(v) for v in xs], [float(v) for v in ys])
    except statistics.StatisticsError as e:
        raise DegenerateSample(str(e)) from e


def median(values: Sequence[float]) -> float:
    if not values:
        raise EmptySample("median of an empty sample")
    return float(statistics.median(values))
