"""Runtime values of the MiniDyn interpreter.

Scalars and most collections are plain Python objects (``int``, ``float``,
``bool``, ``str``, ``bytes``, ``None``, ``list``, ``tuple``, ``dict``).  Sets
use :class:`MSet`, which iterates in insertion order so that runs do not
depend on the host's string hashing.
"""
from __future__ import annotations

import math
from typing import Callable, Iterable, Optional

INT_MIN = -(2 ** 63)
INT_MAX = 2 ** 63 - 1
MAX_SEQUENCE = 100_000

EXCEPTION_PARENTS = {"RecursionError": "RuntimeError"}


class MiniDynError(Exception):
    """An exception raised inside the interpreted program."""

    def __init__(self, cls: str, message: str = ""):
        super().__init__(f"{cls}: {message}" if message else cls)
        self.cls = cls
        self.message = message


def exception_matches(raised: str, expected: str) -> bool:
    while raised is not None:
        if raised == expected or expected == "Exception":
            return True
        raised = EXCEPTION_PARENTS.get(raised)
    return False


class MSet:
    """Set with insertion-ordered iteration; equality is set equality."""

    __slots__ = ("_d",)
    __hash__ = None  # type: ignore[assignment]

    def __init__(self, items: Iterable = ()):
        self._d = dict.fromkeys(items)

    def __contains__(self, x) -> bool:
        return x in self._d

    def __iter__(self):
        return iter(self._d)

    def __len__(self) -> int:
        return len(self._d)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MSet):
            return False
        return len(self._d) == len(other._d) and all(x in other._d for x in self._d)

    def __repr__(self) -> str:
        if not self._d:
            return "set()"
        return "{" + ", ".join(repr(x) for x in self._d) + "}"

    def add(self, x) -> None:
        self._d[x] = None

    def discard(self, x) -> None:
        self._d.pop(x, None)

    def remove(self, x) -> None:
        del self._d[x]

    def pop(self):
        if not self._d:
            raise KeyError("pop from an empty set")
        x = next(iter(self._d))
        del self._d[x]
        return x

    def clear(self) -> None:
        self._d.clear()

    def copy(self) -> "MSet":
        return MSet(self._d)

    def union(self, other) -> "MSet":
        out = MSet(self._d)
        for x in other:
            out.add(x)
        return out

    def intersection(self, other) -> "MSet":
        o = other if isinstance(other, MSet) else MSet(other)
        return MSet(x for x in self._d if x in o)

    def difference(self, other) -> "MSet":
        o = other if isinstance(other, MSet) else MSet(other)
        return MSet(x for x in self._d if x not in o)

    def issubset(self, other) -> bool:
        o = other if isinstance(other, MSet) else MSet(other)
        return all(x in o for x in self._d)


class ClassValue:
    __hash__ = None  # type: ignore[assignment]

    def __init__(self, name: str, methods: dict):
        self.name = name
        self.methods = methods

    def __repr__(self) -> str:
        return f"<class {self.name}>"


class Instance:
    """An object of a MiniDyn class; compares by identity, not hashable."""

    __slots__ = ("cls", "attrs")
    __hash__ = None  # type: ignore[assignment]

    def __init__(self, cls: ClassValue):
        self.cls = cls
        self.attrs: dict = {}

    def __repr__(self) -> str:
        return f"<{self.cls.name} object>"


class FunctionValue:
    __slots__ = ("code", "defaults", "globals")
    __hash__ = None  # type: ignore[assignment]

    def __init__(self, code, defaults: tuple, globals_: dict):
        self.code = code
        self.defaults = defaults
        self.globals = globals_

    def __repr__(self) -> str:
        return f"<function {self.code.name}>"


class BoundMethod:
    __slots__ = ("receiver", "function")
    __hash__ = None  # type: ignore[assignment]

    def __init__(self, receiver, function: FunctionValue):
        self.receiver = receiver
        self.function = function

    def __repr__(self) -> str:
        return f"<bound method {self.function.code.name}>"


class BuiltinFunction:
    """A host function exposed to MiniDyn (keyword arguments are rejected)."""

    __hash__ = None  # type: ignore[assignment]

    def __init__(self, name: str, fn: Callable):
        self.name = name
        self.fn = fn

    def __repr__(self) -> str:
        return f"<builtin {self.name}>"


class BuiltinType(BuiltinFunction):
    """A builtin kind usable in ``isinstance`` checks and as a converter."""

    def __init__(self, name: str, pytypes: tuple, fn: Optional[Callable]):
        super().__init__(name, fn)
        self.pytypes = pytypes

    def __repr__(self) -> str:
        return f"<type {self.name}>"


class ExceptionClass:
    __hash__ = None  # type: ignore[assignment]

    def __init__(self, name: str):
        self.name = name

    def __repr__(self) -> str:
        return f"<exception {self.name}>"


class Approx:
    """Approximate float equality with relative 1e-6 and absolute 1e-12 tolerance."""

    __hash__ = None  # type: ignore[assignment]
    REL = 1e-6
    ABS = 1e-12

    def __init__(self, expected):
        if isinstance(expected, bool) or not isinstance(expected, (int, float)):
            raise TypeError("approx() expects a number")
        self.expected = expected

    def __eq__(self, other) -> bool:
        if isinstance(other, bool) or not isinstance(other, (int, float)):
            return False
        tol = max(self.REL * abs(self.expected), self.ABS)
        return abs(other - self.expected) <= tol

    def __repr__(self) -> str:
        return f"approx({self.expected!r})"


def kind_of(v) -> str:
    """The MiniDyn kind name of a runtime value."""
    if v is None:
        return "NoneType"
    if isinstance(v, bool):
        return "Bool"
    if isinstance(v, int):
        return "Int"
    if isinstance(v, float):
        return "Float"
    if isinstance(v, str):
        return "Str"
    if isinstance(v, bytes):
        return "Bytes"
    if isinstance(v, list):
        return "List"
    if isinstance(v, tuple):
        return "Tuple"
    if isinstance(v, MSet):
        return "Set"
    if isinstance(v, dict):
        return "Map"
    if isinstance(v, Instance):
        return v.cls.name
    return "Object"


def check_int(v):
    if isinstance(v, int) and not isinstance(v, bool) and not INT_MIN <= v <= INT_MAX:
        raise MiniDynError("OverflowError", "integer result out of 64-bit range")
    return v


def check_float(v):
    if isinstance(v, float) and not math.isfinite(v):
        raise MiniDynError("OverflowError", "float result out of range")
    return v


def is_hashable(v) -> bool:
    if isinstance(v, tuple):
        return all(is_hashable(x) for x in v)
    return v is None or isinstance(v, (bool, int, float, str, bytes))


def display(v) -> str:
    """Text form used by ``str()``."""
    if isinstance(v, str):
        return v
    if isinstance(v, float):
        return repr(v)
    return repr(v)
