"""Preference sorting, non-dominated fronts, crowding distance and tournaments."""
from __future__ import annotations

import random
from typing import Sequence

import numpy as np


def dominance_matrix(F: np.ndarray) -> np.ndarray:
    """``D[i, j]`` is True when row i Pareto-dominates row j (minimisation)."""
    le = (F[:, None, :] <= F[None, :, :]).all(axis=2)
    lt = (F[:, None, :] < F[None, :, :]).any(axis=2)
    return le & lt


def non_dominated_fronts(F: np.ndarray) -> list[list[int]]:
    n = F.shape[0]
    if n == 0:
        return []
    if F.shape[1] == 0:
        return [list(range(n))]
    D = dominance_matrix(F)
    dominated_by = D.sum(axis=0)
    remaining = np.ones(n, dtype=bool)
    fronts = []
    while remaining.any():
        front = np.flatnonzero(remaining & (dominated_by == 0))
        fronts.append(front.tolist())
        remaining[front] = False
        dominated_by = dominated_by - D[front].sum(axis=0)
    return fronts


def preference_sort(F: np.ndarray, lengths: Sequence[int]) -> list[list[int]]:
    """Rank rows of the fitness matrix ``F`` (tests x uncovered goals).

    Front 0 holds, for each goal, the best test on it (ties go to the shorter
    case, then to the earlier row).  The remaining tests are ranked by
    non-dominated sorting.
    """
    n, g = F.shape
    if n == 0:
        return []
    best: list[int] = []
    order_len = np.asarray(lengths)
    for j in range(g):
        col = F[:, j]
        cands = np.flatnonzero(col == col.min())
        k = int(cands[np.argmin(order_len[cands])])
        if k not in best:
            best.append(k)
    best.sort()
    rest = [i for i in range(n) if i not in set(best)]
    fronts = [best] if best else []
    for front in non_dominated_fronts(F[rest]):
        fronts.append([rest[i] for i in front])
    return fronts


def crowding_distance(F: np.ndarray) -> np.ndarray:
    """NSGA-II crowding distance with infinite boundary points."""
    n, g = F.shape
    dist = np.zeros(n)
    if n <= 2:
        return np.full(n, np.inf)
    for j in range(g):
        order = np.argsort(F[:, j], kind="stable")
        lo, hi = F[order[0], j], F[order[-1], j]
        dist[order[0]] = dist[order[-1]] = np.inf
        if hi == lo:
            continue
        gaps = (F[order[2:], j] - F[order[:-2], j]) / (hi - lo)
        dist[order[1:-1]] += gaps
    return dist


def tournament(rank: Sequence[int], crowd: Sequence[float], rng: random.Random, size: int) -> int:
    """Winner of ``size`` draws with replacement: lower rank, then larger crowding distance."""
    best = rng.randrange(len(rank))
    for _ in range(size - 1):
        i = rng.randrange(len(rank))
        if rank[i] < rank[best] or (rank[i] == rank[best] and crowd[i] > crowd[best]):
            best = i
    return best
