"""Branch distances for binary comparisons and truthiness predicates.

All functions here are total: every operand pair yields a ``(d_true,
d_false)`` pair with exactly one zero entry.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Number

from .values import MSet

K = 1.0
INF = math.inf

COMPLEMENT = {
    "==": "!=", "!=": "==", "<": ">=", ">=": "<", "<=": ">", ">": "<=",
    "in": "not in", "not in": "in", "is": "is not", "is not": "is",
}
_SCALARS = (bool, int, float, str, bytes, type(None))


class Incomparable(Exception):
    """Operands cannot be ordered or tested for membership."""


def is_numeric(z) -> bool:
    return isinstance(z, Number) and not (isinstance(z, float) and math.isnan(z))


def is_sized(z) -> bool:
    return isinstance(z, (str, bytes, list, tuple, MSet, set, dict, frozenset))


def levenshtein(a, b) -> int:
    if a == b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def identical(a, b) -> bool:
    """MiniDyn ``is``: value identity for immutable scalars, reference identity otherwise."""
    if isinstance(a, _SCALARS) and isinstance(b, _SCALARS):
        if type(a) is not type(b):
            return False
        if isinstance(a, float) and math.isnan(a):
            return math.isnan(b)
        return a == b
    return a is b


def _lt(a, b) -> bool:
    if isinstance(a, (MSet, set, frozenset, dict)) or isinstance(b, (MSet, set, frozenset, dict)):
        raise Incomparable
    try:
        return bool(a < b)
    except TypeError:
        raise Incomparable from None


def _le(a, b) -> bool:
    if isinstance(a, (MSet, set, frozenset, dict)) or isinstance(b, (MSet, set, frozenset, dict)):
        raise Incomparable
    try:
        return bool(a <= b)
    except TypeError:
        raise Incomparable from None


def _contains(a, b) -> bool:
    if isinstance(b, (str, bytes)):
        if type(a) is not type(b):
            raise Incomparable
        return a in b
    if not isinstance(b, (list, tuple, MSet, set, frozenset, dict)):
        raise Incomparable
    try:
        return a in b
    except TypeError:  # unhashable probe
        raise Incomparable from None


def evaluate(op: str, a, b) -> bool:
    """Evaluate ``a op b`` with MiniDyn semantics.

    ``>`` and ``>=`` are the negations of ``<=`` and ``<`` so that every
    operator is the exact complement of its partner.  Raises
    :class:`Incomparable` for unordered operands.
    """
    if op == "==":
        return bool(a == b)
    if op == "!=":
        return not (a == b)
    if op == "<":
        return _lt(a, b)
    if op == "<=":
        return _le(a, b)
    if op == ">":
        return not _le(a, b)
    if op == ">=":
        return not _lt(a, b)
    if op == "in":
        return _contains(a, b)
    if op == "not in":
        return not _contains(a, b)
    if op == "is":
        return identical(a, b)
    if op == "is not":
        return not identical(a, b)
    raise ValueError(f"unknown comparison operator {op!r}")


def holds(op: str, a, b) -> bool:
    """Total version of :func:`evaluate`; unordered operands make ``<``/``<=``/``in`` false."""
    try:
        return evaluate(op, a, b)
    except Incomparable:
        return op in (">", ">=", "not in")


def _as_distance(x) -> float:
    try:
        x = float(x)
    except OverflowError:
        return INF
    return INF if math.isnan(x) else x


def _num_diff(a, b) -> float:
    """|a - b| for distinct numbers, never rounding to zero."""
    d = _as_distance(abs(a - b))
    if d == 0.0:
        d = float(abs(Fraction(a) - Fraction(b))) or 5e-324
    return d


def _gap(a, b) -> float:
    """a - b + k for numeric a >= b; the result is always positive."""
    if isinstance(a, int) and isinstance(b, int):
        return _as_distance(a - b + 1)
    d = _as_distance(a - b + K)
    if d <= 0.0:
        d = K
    return d


def distance_eq(a, b) -> float:
    """Distance of ``a == b`` to holding."""
    if a == b:
        return 0.0
    if is_numeric(a) and is_numeric(b):
        if math.isinf(a) or math.isinf(b):
            return INF
        return _num_diff(a, b)
    if isinstance(a, str) and isinstance(b, str):
        return float(levenshtein(a, b))
    if isinstance(a, bytes) and isinstance(b, bytes):
        return float(levenshtein(a.decode("latin-1"), b.decode("latin-1")))
    return INF


def distance_lt(a, b) -> float:
    if holds("<", a, b):
        return 0.0
    if is_numeric(a) and is_numeric(b):
        return _gap(a, b)
    return INF


def distance_le(a, b) -> float:
    if holds("<=", a, b):
        return 0.0
    if is_numeric(a) and is_numeric(b):
        return _gap(a, b)
    return INF


def distance_in(a, b) -> float:
    if holds("in", a, b):
        return 0.0
    if isinstance(b, (str, bytes)):
        if type(a) is not type(b):
            return INF
        # probe against every same-length window of the container
        n = len(a)
        if n == 0 or n > len(b):
            return distance_eq(a, b) if n > len(b) else INF
        return min(distance_eq(a, b[i:i + n]) for i in range(len(b) - n + 1))
    if isinstance(b, (list, tuple, MSet, set, frozenset, dict)):
        return min((distance_eq(a, x) for x in b), default=INF)
    return INF


def comparison_distances(op: str, a, b, truth: bool | None = None) -> tuple[float, float]:
    """Return ``(d_true, d_false)`` for the predicate ``a op b``.

    ``truth`` may carry the already evaluated outcome; the zero side is then
    taken from it.
    """
    if truth is None:
        truth = holds(op, a, b)
    if op in ("==", "!="):
        eq = truth if op == "==" else not truth
        pair = (0.0, K) if eq else (distance_eq(a, b), 0.0)
        return pair if op == "==" else (pair[1], pair[0])
    if op in ("<", ">="):
        lt = truth if op == "<" else not truth
        if lt:
            pair = (0.0, _gap(b, a) if is_numeric(a) and is_numeric(b) else INF)
        else:
            pair = (_gap(a, b) if is_numeric(a) and is_numeric(b) else INF, 0.0)
        return pair if op == "<" else (pair[1], pair[0])
    if op in ("<=", ">"):
        le = truth if op == "<=" else not truth
        if le:
            pair = (0.0, _gap(b, a) if is_numeric(a) and is_numeric(b) else INF)
        else:
            pair = (_gap(a, b) if is_numeric(a) and is_numeric(b) else INF, 0.0)
        return pair if op == "<=" else (pair[1], pair[0])
    if op in ("in", "not in"):
        inside = truth if op == "in" else not truth
        pair = (0.0, K) if inside else (distance_in(a, b), 0.0)
        return pair if op == "in" else (pair[1], pair[0])
    if op in ("is", "is not"):
        return (0.0, K) if truth else (K, 0.0)
    raise ValueError(f"unknown comparison operator {op!r}")


def falsy_distance(v) -> float:
    """Distance of a truthy value to becoming false."""
    if is_sized(v):
        return float(len(v))
    if is_numeric(v):
        return _as_distance(abs(v))
    return INF


def truthiness_distances(v, truth: bool | None = None) -> tuple[float, float]:
    if truth is None:
        truth = bool(v)
    if not truth:
        return (K, 0.0)
    return (0.0, falsy_distance(v))
