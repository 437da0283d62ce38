"""A tracing stack interpreter for compiled MiniDyn code.

Every conditional jump reports the branch distances of both of its branches
to the active :class:`Tracer`.  Execution is bounded by an instruction fuse
and, optionally, a wall-clock limit.
"""
from __future__ import annotations

import math
import random
import sys
import time
from typing import Optional

from ..minidyn.compiler import (
    BINARY, BUILD_LIST, BUILD_MAP, BUILD_SET, BUILD_TUPLE, BUILTIN_FUNCTIONS,
    BUILTIN_TYPES, CALL, CMP_JUMP_IF_FALSE, CMP_JUMP_IF_TRUE, COMPARE, DUP,
    EXCEPTION_CLASSES, JUMP, JUMP_IF_FALSE, JUMP_IF_TRUE, LOAD_ATTR,
    LOAD_BUILTIN, LOAD_CONST, LOAD_FAST, LOAD_GLOBAL, LOAD_INDEX, MAKE_CLASS,
    MAKE_FUNCTION, NEG, NOT, POP, POP_RAISES, RAISE, RETURN, SETUP_RAISES,
    STORE_ATTR, STORE_CLASSATTR, STORE_FAST, STORE_GLOBAL, STORE_INDEX,
    CompiledModule,
)
from .distance import Incomparable, comparison_distances, evaluate, falsy_distance
from .values import (
    MAX_SEQUENCE, Approx, BoundMethod, BuiltinFunction, BuiltinType, ClassValue,
    ExceptionClass, FunctionValue, Instance, MiniDynError, MSet, check_float,
    check_int, display, exception_matches, is_hashable,
)

MAX_DEPTH = 200
MAX_OBSERVED_CONSTANTS = 64
INF = math.inf

_UNBOUND = object()

# host exceptions that surface as MiniDyn exceptions of the same name
_HOST_ERRORS = (ZeroDivisionError, TypeError, ValueError, IndexError, KeyError,
                AttributeError, OverflowError, MemoryError)


class BudgetExceeded(Exception):
    """Raised inside the interpreter when the fuse or the wall clock fires."""


class Tracer:
    """Per-execution coverage and distance bookkeeping."""

    __slots__ = ("executed", "counts", "dmin", "constants")

    def __init__(self, n_predicates: int):
        self.executed: set[int] = set()
        self.counts = [0] * n_predicates
        self.dmin = [INF] * (2 * n_predicates)
        self.constants: dict = {}

    def record(self, pid: int, d_true: float, d_false: float) -> None:
        self.counts[pid] += 1
        t = 2 * pid
        dmin = self.dmin
        if d_true < dmin[t]:
            dmin[t] = d_true
        if d_false < dmin[t + 1]:
            dmin[t + 1] = d_false

    def observe(self, a, b) -> None:
        consts = self.constants
        if len(consts) >= MAX_OBSERVED_CONSTANTS:
            return
        for v in (a, b):
            if isinstance(v, bool):
                continue
            if isinstance(v, (int, float)) or (isinstance(v, (str, bytes)) and len(v) <= 64):
                consts[(type(v).__name__, v)] = v


# --- binary operators --------------------------------------------------------


def _repeat_guard(a, b) -> None:
    seq, n = (a, b) if isinstance(a, (str, bytes, list, tuple)) else (b, a)
    if isinstance(seq, (str, bytes, list, tuple)) and isinstance(n, int) and len(seq) * max(n, 0) > MAX_SEQUENCE:
        raise MiniDynError("MemoryError", "sequence too long")


def binary(op: str, a, b):
    if isinstance(a, (Approx, MSet, dict)) or isinstance(b, (Approx, MSet, dict)):
        raise MiniDynError("TypeError", f"unsupported operand types for {op}")
    if op == "+":
        r = a + b
        if isinstance(r, (str, bytes, list, tuple)) and len(r) > MAX_SEQUENCE:
            raise MiniDynError("MemoryError", "sequence too long")
    elif op == "-":
        r = a - b
    elif op == "*":
        _repeat_guard(a, b)
        r = a * b
    elif op == "/":
        r = a / b
    elif op == "//":
        r = a // b
    elif op == "%":
        if isinstance(a, (str, bytes)):
            raise MiniDynError("TypeError", "string formatting is not supported")
        r = a % b
    else:
        raise MiniDynError("TypeError", f"unknown operator {op}")
    if isinstance(r, float):
        return check_float(r)
    return check_int(r)


def negate(v):
    if isinstance(v, (bool, int, float)):
        return check_int(-v)
    raise MiniDynError("TypeError", "bad operand type for unary -")


# --- builtins ----------------------------------------------------------------


def _len(x):
    if isinstance(x, (str, bytes, list, tuple, MSet, dict)):
        return len(x)
    raise MiniDynError("TypeError", "object has no len()")


def _iterable(x):
    if isinstance(x, (str, bytes, list, tuple, MSet, dict)):
        return list(x)
    raise MiniDynError("TypeError", "object is not iterable")


def _to_int(x=0):
    if isinstance(x, (str, bytes)):
        text = x.decode("latin-1") if isinstance(x, bytes) else x
        return check_int(int(text.strip()))
    if isinstance(x, (bool, int, float)):
        return check_int(int(x))
    raise MiniDynError("TypeError", "int() argument must be a string or a number")


def _to_float(x=0.0):
    if isinstance(x, str):
        text = x.strip().lower()
        if any(w in text for w in ("nan", "inf")):
            raise MiniDynError("ValueError", "could not convert string to float")
        return check_float(float(x))
    if isinstance(x, (bool, int, float)):
        return check_float(float(x))
    raise MiniDynError("TypeError", "float() argument must be a string or a number")


def _to_str(x=""):
    return display(x)


def _to_bytes(x=b""):
    if isinstance(x, bytes):
        return x
    if isinstance(x, str):
        return x.encode("utf-8")
    if isinstance(x, list) and all(isinstance(i, int) and not isinstance(i, bool) for i in x):
        return bytes(x)
    raise MiniDynError("TypeError", "cannot convert to Bytes")


def _min_max(fn):
    def f(*args):
        items = _iterable(args[0]) if len(args) == 1 else list(args)
        if not items:
            raise MiniDynError("ValueError", "empty sequence")
        try:
            return fn(items)
        except TypeError:
            raise MiniDynError("TypeError", "values are not comparable") from None
    return f


def _sorted(x):
    try:
        return sorted(_iterable(x))
    except TypeError:
        raise MiniDynError("TypeError", "values are not comparable") from None


def _to_set(x=()):
    items = _iterable(x) if x != () else []
    for i in items:
        if not is_hashable(i):
            raise MiniDynError("TypeError", "unhashable element")
    return MSet(items)


def _to_map(x=None):
    if x is None:
        return {}
    if isinstance(x, dict):
        return dict(x)
    raise MiniDynError("TypeError", "Map() expects a Map")


def _abs(x):
    if isinstance(x, (bool, int, float)):
        return check_int(abs(x))
    raise MiniDynError("TypeError", "bad operand type for abs()")


_TYPE_TABLE = {
    "Int": ((int,), _to_int),
    "Float": ((float,), _to_float),
    "Bool": ((bool,), bool),
    "Str": ((str,), _to_str),
    "Bytes": ((bytes,), _to_bytes),
    "NoneType": ((type(None),), None),
    "List": ((list,), lambda x=(): _iterable(x) if x != () else []),
    "Set": ((MSet,), _to_set),
    "Map": ((dict,), _to_map),
    "Tuple": ((tuple,), lambda x=(): tuple(_iterable(x)) if x != () else ()),
}

# Receiver methods callable on builtin values.
BUILTIN_METHODS = {
    list: frozenset({"append", "pop", "insert", "index", "count", "remove", "copy",
                     "extend", "clear", "reverse", "sort"}),
    dict: frozenset({"get", "pop", "copy", "clear", "keys", "values", "items",
                     "setdefault", "update"}),
    MSet: frozenset({"add", "remove", "discard", "copy", "union", "intersection",
                     "difference", "issubset", "clear", "pop"}),
    str: frozenset({"upper", "lower", "strip", "startswith", "endswith", "split",
                    "join", "find", "replace", "count", "isdigit", "isalpha", "index"}),
    bytes: frozenset({"startswith", "endswith", "find", "count", "upper", "lower"}),
    tuple: frozenset({"index", "count"}),
}


def _host_method(obj, name: str) -> BuiltinFunction:
    fn = getattr(obj, name)

    def call(*args):
        if isinstance(obj, (dict, MSet)) and name in ("setdefault", "add") and args and not is_hashable(args[0]):
            raise MiniDynError("TypeError", "unhashable key")
        if isinstance(obj, list) and name in ("append", "insert", "extend"):
            extra = len(args[-1]) if name == "extend" and hasattr(args[-1], "__len__") else 1
            if len(obj) + extra > MAX_SEQUENCE:
                raise MiniDynError("MemoryError", "list too long")
        if name == "replace" and isinstance(obj, str) and len(args) >= 2:
            if len(obj) * (len(args[1]) + 1) + len(args[1]) > MAX_SEQUENCE:
                raise MiniDynError("MemoryError", "string too long")
        if name == "join" and isinstance(obj, str):
            args = (_iterable(args[0]),) + args[1:] if args else args
        r = fn(*args)
        if isinstance(r, (type({}.keys()), type({}.values()))):
            return list(r)
        if isinstance(r, type({}.items())):
            return [tuple(p) for p in r]
        return r
    return BuiltinFunction(f"{type(obj).__name__}.{name}", call)


class Interpreter:
    """Executes code of one :class:`CompiledModule` while tracing predicates."""

    def __init__(self, module: CompiledModule, fuse: int = 1_000_000,
                 wall_clock_s: Optional[float] = None, seed: int = 0):
        self.module = module
        self.codes = module.code_objects
        self.fuse = fuse
        self.wall_clock_s = wall_clock_s
        self.started = time.perf_counter()
        self.steps = 0
        self.depth = 0
        self.tracer = Tracer(len(module.predicates))
        self.entropy = random.Random(seed)
        self.builtins = self._make_builtins()

    # -- builtins
    def _make_builtins(self) -> dict:
        b: dict = {}
        for name in BUILTIN_TYPES:
            pytypes, fn = _TYPE_TABLE[name]
            b[name] = BuiltinType(name, pytypes, fn)
        for name in EXCEPTION_CLASSES:
            b[name] = ExceptionClass(name)
        fns = {
            "len": _len, "abs": _abs, "min": _min_max(min), "max": _min_max(max),
            "str": _to_str, "int": _to_int, "float": _to_float, "bool": bool,
            "isinstance": self._isinstance, "set": _to_set,
            "list": _TYPE_TABLE["List"][1], "tuple": _TYPE_TABLE["Tuple"][1],
            "approx": Approx, "random_int": self._random_int, "id": self._id,
            "sorted": _sorted,
        }
        assert set(fns) == set(BUILTIN_FUNCTIONS)
        for name, fn in fns.items():
            b[name] = BuiltinFunction(name, fn)
        return b

    def _isinstance(self, v, t) -> bool:
        if isinstance(t, BuiltinType):
            if t.name == "Int":
                return isinstance(v, int)
            return isinstance(v, t.pytypes)
        if isinstance(t, ClassValue):
            return isinstance(v, Instance) and v.cls is t
        raise MiniDynError("TypeError", "isinstance() arg 2 must be a type")

    def _random_int(self, lo: int, hi: int) -> int:
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in (lo, hi)) or lo > hi:
            raise MiniDynError("ValueError", "empty range for random_int()")
        return self.entropy.randint(lo, hi)

    def _id(self, v) -> int:
        return self.entropy.getrandbits(31)

    # -- module loading
    def load_module(self) -> dict:
        """Run the module body (and class bodies) and return the globals."""
        glob: dict = {}
        self.run(self.codes[self.module.module_code_id], [], glob)
        return glob

    # -- calls
    def call(self, f, args: list, kwargs: dict):
        if isinstance(f, FunctionValue):
            return self.run(f.code, self.bind(f, args, kwargs), f.globals)
        if isinstance(f, BoundMethod):
            return self.call(f.function, [f.receiver] + list(args), kwargs)
        if isinstance(f, ClassValue):
            inst = Instance(f)
            init = f.methods.get("__init__")
            if init is not None:
                self.call(init, [inst] + list(args), kwargs)
            elif args or kwargs:
                raise MiniDynError("TypeError", f"{f.name}() takes no arguments")
            return inst
        if isinstance(f, BuiltinFunction):
            if kwargs:
                raise MiniDynError("TypeError", f"{f.name}() takes no keyword arguments")
            if f.fn is None:
                raise MiniDynError("TypeError", f"{f.name} is not callable")
            try:
                r = f.fn(*args)
            except MiniDynError:
                raise
            except _HOST_ERRORS as e:
                raise MiniDynError(type(e).__name__, str(e)) from None
            except Incomparable:
                raise MiniDynError("TypeError", "values are not comparable") from None
            return r
        raise MiniDynError("TypeError", f"{type(f).__name__} object is not callable")

    def bind(self, f: FunctionValue, args: list, kwargs: dict) -> list:
        code = f.code
        params = code.params
        local = [_UNBOUND] * code.nlocals
        normal = [p for p in params if p.kind == "positional-or-keyword"]
        star = next((p for p in params if p.kind == "star"), None)
        dstar = next((p for p in params if p.kind == "dstar"), None)
        if len(args) > len(normal) and star is None:
            raise MiniDynError("TypeError", f"{code.name}() takes {len(normal)} positional arguments but {len(args)} were given")
        for p, v in zip(normal, args):
            local[p.position] = v
        if star is not None:
            local[star.position] = tuple(args[len(normal):])
        extra: dict = {}
        by_name = {p.name: p for p in normal}
        for k, v in kwargs.items():
            p = by_name.get(k)
            if p is not None:
                if local[p.position] is not _UNBOUND:
                    raise MiniDynError("TypeError", f"{code.name}() got multiple values for argument {k!r}")
                local[p.position] = v
            elif dstar is not None:
                extra[k] = v
            else:
                raise MiniDynError("TypeError", f"{code.name}() got an unexpected keyword argument {k!r}")
        if dstar is not None:
            local[dstar.position] = extra
        first_default = len(normal) - len(f.defaults)
        for i, p in enumerate(normal):
            if local[p.position] is _UNBOUND:
                if i >= first_default:
                    local[p.position] = f.defaults[i - first_default]
                else:
                    raise MiniDynError("TypeError", f"{code.name}() missing required argument {p.name!r}")
        return local

    def get_attr(self, obj, name: str):
        if isinstance(obj, Instance):
            if name in obj.attrs:
                return obj.attrs[name]
            m = obj.cls.methods.get(name)
            if m is not None:
                return BoundMethod(obj, m)
        elif isinstance(obj, ClassValue):
            m = obj.methods.get(name)
            if m is not None:
                return m
        else:
            allowed = BUILTIN_METHODS.get(type(obj))
            if allowed is not None and name in allowed:
                return _host_method(obj, name)
        raise MiniDynError("AttributeError", f"object has no attribute {name!r}")

    # -- the interpreter loop
    def run(self, code, local: list, glob: dict, cls_ns: Optional[dict] = None):
        if self.depth >= MAX_DEPTH:
            raise MiniDynError("RecursionError", "maximum recursion depth exceeded")
        self.depth += 1
        try:
            return self._run(code, local, glob, cls_ns)
        finally:
            self.depth -= 1

    def _run(self, code, local: list, glob: dict, cls_ns: Optional[dict]):
        tracer = self.tracer
        tracer.executed.add(code.id)
        ins = code.instructions
        stack: list = []
        push = stack.append
        pop = stack.pop
        handlers: list = []
        pc = 0
        fuse = self.fuse
        wall = self.wall_clock_s
        record = tracer.record
        while True:
            try:
                while True:
                    op, arg = ins[pc]
                    pc += 1
                    self.steps += 1
                    if self.steps > fuse:
                        raise BudgetExceeded("instruction fuse")
                    if wall is not None and not self.steps & 0xFFF and \
                            time.perf_counter() - self.started > wall:
                        raise BudgetExceeded("wall clock")
                    if op == LOAD_FAST:
                        v = local[arg]
                        if v is _UNBOUND:
                            raise MiniDynError("UnboundLocalError", f"local {code.local_names[arg]!r} referenced before assignment")
                        push(v)
                    elif op == LOAD_CONST:
                        push(arg)
                    elif op == STORE_FAST:
                        local[arg] = pop()
                    elif op == CMP_JUMP_IF_FALSE or op == CMP_JUMP_IF_TRUE:
                        cop, target, pid = arg
                        b = pop()
                        a = pop()
                        try:
                            truth = evaluate(cop, a, b)
                        except Incomparable:
                            raise MiniDynError("TypeError", f"'{cop}' not supported between these operands") from None
                        dt, df = comparison_distances(cop, a, b, truth)
                        record(pid, dt, df)
                        tracer.observe(a, b)
                        if truth == (op == CMP_JUMP_IF_TRUE):
                            pc = target
                    elif op == JUMP_IF_FALSE or op == JUMP_IF_TRUE:
                        target, pid = arg
                        v = pop()
                        truth = bool(v)
                        if truth:
                            record(pid, 0.0, falsy_distance(v))
                        else:
                            record(pid, 1.0, 0.0)
                        if truth == (op == JUMP_IF_TRUE):
                            pc = target
                    elif op == JUMP:
                        pc = arg
                    elif op == LOAD_GLOBAL:
                        try:
                            push(glob[arg])
                        except KeyError:
                            raise MiniDynError("NameError", f"name {arg!r} is not defined") from None
                    elif op == LOAD_BUILTIN:
                        push(self.builtins[arg])
                    elif op == BINARY:
                        b = pop()
                        push(binary(arg, pop(), b))
                    elif op == COMPARE:
                        b = pop()
                        a = pop()
                        try:
                            push(evaluate(arg, a, b))
                        except Incomparable:
                            raise MiniDynError("TypeError", f"'{arg}' not supported between these operands") from None
                    elif op == CALL:
                        args: list = []
                        kwargs: dict = {}
                        values = stack[len(stack) - len(arg):]
                        del stack[len(stack) - len(arg):]
                        for kind, v in zip(arg, values):
                            if kind == "p":
                                args.append(v)
                            elif kind == "s":
                                args.extend(_iterable(v))
                            elif kind == "d":
                                if not isinstance(v, dict) or not all(isinstance(k, str) for k in v):
                                    raise MiniDynError("TypeError", "argument after ** must be a Map with Str keys")
                                for k, x in v.items():
                                    if k in kwargs:
                                        raise MiniDynError("TypeError", f"got multiple values for keyword argument {k!r}")
                                    kwargs[k] = x
                            else:
                                if kind[1] in kwargs:
                                    raise MiniDynError("TypeError", f"got multiple values for keyword argument {kind[1]!r}")
                                kwargs[kind[1]] = v
                        f = pop()
                        push(self.call(f, args, kwargs))
                    elif op == RETURN:
                        return pop()
                    elif op == POP:
                        pop()
                    elif op == DUP:
                        push(stack[-1])
                    elif op == LOAD_ATTR:
                        push(self.get_attr(pop(), arg))
                    elif op == STORE_ATTR:
                        obj = pop()
                        v = pop()
                        if not isinstance(obj, Instance):
                            raise MiniDynError("AttributeError", "cannot set attributes on this object")
                        obj.attrs[arg] = v
                    elif op == LOAD_INDEX:
                        idx = pop()
                        obj = pop()
                        if isinstance(obj, dict):
                            if not is_hashable(idx):
                                raise MiniDynError("TypeError", "unhashable key")
                            try:
                                push(obj[idx])
                            except KeyError:
                                raise MiniDynError("KeyError", repr(idx)) from None
                        elif isinstance(obj, (list, tuple, str, bytes)):
                            if not isinstance(idx, int):
                                raise MiniDynError("TypeError", "indices must be integers")
                            try:
                                push(obj[idx])
                            except IndexError:
                                raise MiniDynError("IndexError", "index out of range") from None
                        else:
                            raise MiniDynError("TypeError", "object is not subscriptable")
                    elif op == STORE_INDEX:
                        idx = pop()
                        obj = pop()
                        v = pop()
                        if isinstance(obj, dict):
                            if not is_hashable(idx):
                                raise MiniDynError("TypeError", "unhashable key")
                            obj[idx] = v
                        elif isinstance(obj, list):
                            if not isinstance(idx, int):
                                raise MiniDynError("TypeError", "indices must be integers")
                            try:
                                obj[idx] = v
                            except IndexError:
                                raise MiniDynError("IndexError", "assignment index out of range") from None
                        else:
                            raise MiniDynError("TypeError", "object does not support item assignment")
                    elif op == NOT:
                        push(not pop())
                    elif op == NEG:
                        push(negate(pop()))
                    elif op == BUILD_LIST:
                        if arg:
                            items = stack[-arg:]
                            del stack[-arg:]
                        else:
                            items = []
                        push(items)
                    elif op == BUILD_TUPLE:
                        if arg:
                            items = stack[-arg:]
                            del stack[-arg:]
                        else:
                            items = []
                        push(tuple(items))
                    elif op == BUILD_SET:
                        items = stack[-arg:] if arg else []
                        if arg:
                            del stack[-arg:]
                        if not all(is_hashable(x) for x in items):
                            raise MiniDynError("TypeError", "unhashable set element")
                        push(MSet(items))
                    elif op == BUILD_MAP:
                        flat = stack[-2 * arg:] if arg else []
                        if arg:
                            del stack[-2 * arg:]
                        m = {}
                        for i in range(0, len(flat), 2):
                            if not is_hashable(flat[i]):
                                raise MiniDynError("TypeError", "unhashable key")
                            m[flat[i]] = flat[i + 1]
                        push(m)
                    elif op == STORE_GLOBAL:
                        glob[arg] = pop()
                    elif op == RAISE:
                        exc, has_msg = arg
                        msg = display(pop()) if has_msg else ""
                        raise MiniDynError(exc, msg)
                    elif op == MAKE_FUNCTION:
                        code_id, ndef = arg
                        if ndef:
                            defaults = tuple(stack[-ndef:])
                            del stack[-ndef:]
                        else:
                            defaults = ()
                        push(FunctionValue(self.codes[code_id], defaults, glob))
                    elif op == MAKE_CLASS:
                        body = self.codes[arg]
                        ns: dict = {}
                        self.run(body, [], glob, ns)
                        push(ClassValue(body.name, ns))
                    elif op == STORE_CLASSATTR:
                        cls_ns[arg] = pop()
                    elif op == SETUP_RAISES:
                        handlers.append((arg[0], arg[1], len(stack)))
                    elif op == POP_RAISES:
                        handlers.pop()
                        raise MiniDynError("AssertionError", f"did not raise {arg}")
                    else:
                        raise RuntimeError(f"bad opcode {op}")
            except MiniDynError as e:
                exc = e
            except RecursionError:
                exc = MiniDynError("RecursionError", "maximum recursion depth exceeded")
            except _HOST_ERRORS as e:
                exc = MiniDynError(type(e).__name__, str(e))
            if handlers and exception_matches(exc.cls, handlers[-1][0]):
                _, pc, height = handlers.pop()
                del stack[height:]
                continue
            raise exc


def ensure_recursion_headroom(limit: int = 10_000) -> None:
    if sys.getrecursionlimit() < limit:
        sys.setrecursionlimit(limit)
