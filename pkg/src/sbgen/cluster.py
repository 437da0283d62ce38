"""Static analysis of a module under test: callables, type maps, constants.

The cluster exposes every public callable of the module, maps types to the
callables able to produce them (generators) or consume them (modifiers) and
collects literal constants for seeding.  With type hints disabled all
annotations are erased; the maps themselves stay the same.
"""
from __future__ import annotations

import re
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .minidyn.compiler import CompiledModule
from .minidyn.syntax import (
    Const, FunctionDef, ModuleAst, Raise, TypeAnn, UnaryOp, iter_nodes,
)

PRIMITIVE_TYPES = ("Int", "Float", "Bool", "Str", "Bytes")
COLLECTION_TYPES = ("List", "Set", "Map", "Tuple")
BUILTIN_TYPES = PRIMITIVE_TYPES + COLLECTION_TYPES
_ALIASES = {"Dict": "Map", "None": "NoneType", "Any": None}


class UnknownType(KeyError):
    """The type is neither builtin nor declared by the module."""


def outer_type(ann: Optional[TypeAnn]) -> Optional[str]:
    """Reduce an annotation to its outer constructor, ``None`` meaning unknown."""
    if ann is None:
        return None
    return _ALIASES.get(ann.name, ann.name)


@dataclass(frozen=True)
class ParamInfo:
    name: str
    kind: str  # positional-or-keyword | star | dstar
    annotation: Optional[str] = None
    has_default: bool = False

    @property
    def optional(self) -> bool:
        return self.has_default or self.kind != "positional-or-keyword"


@dataclass(frozen=True)
class CallableInfo:
    kind: str  # function | method | constructor
    name: str  # function, method or class name
    owner: Optional[str]  # class of a method or constructor
    params: tuple[ParamInfo, ...]
    returns: Optional[str]
    declared_exceptions: frozenset = frozenset()
    code_id: Optional[int] = None

    @property
    def qualname(self) -> str:
        if self.kind == "method":
            return f"{self.owner}.{self.name}"
        return self.name

    @property
    def result_type(self) -> Optional[str]:
        """Type of the value the call produces, as far as the cluster knows."""
        if self.kind == "constructor":
            return self.owner
        return self.returns


@dataclass(frozen=True)
class LiteralGenerator:
    """Pseudo-generator for builtin types: values are synthesised directly."""

    type: str

    @property
    def qualname(self) -> str:
        return f"<literal {self.type}>"


class ConstantPool:
    """Seeding constants by kind; dynamic additions use a bounded FIFO."""

    KINDS = ("Int", "Float", "Str", "Bytes")

    def __init__(self, capacity: int = 500):
        self.static: dict[str, list] = {k: [] for k in self.KINDS}
        self._static_keys: set = set()
        self.dynamic: deque = deque()
        self._dynamic_keys: set = set()
        self.capacity = capacity

    @staticmethod
    def kind(v) -> Optional[str]:
        if isinstance(v, bool):
            return None
        return {int: "Int", float: "Float", str: "Str", bytes: "Bytes"}.get(type(v))

    def add_static(self, v) -> None:
        k = self.kind(v)
        if k is not None and (k, v) not in self._static_keys:
            self._static_keys.add((k, v))
            self.static[k].append(v)

    def add_dynamic(self, values: Iterable) -> None:
        for v in values:
            k = self.kind(v)
            if k is None or (k, v) in self._dynamic_keys or (k, v) in self._static_keys:
                continue
            if len(self.dynamic) >= self.capacity:
                old = self.dynamic.popleft()
                self._dynamic_keys.discard(old)
            self.dynamic.append((k, v))
            self._dynamic_keys.add((k, v))

    def values(self, kind: str) -> list:
        return self.static.get(kind, []) + [v for k, v in self.dynamic if k == kind]

    def __contains__(self, v) -> bool:
        k = self.kind(v)
        return (k, v) in self._static_keys or (k, v) in self._dynamic_keys

    def __len__(self) -> int:
        return len(self._static_keys) + len(self.dynamic)

    def copy(self) -> "ConstantPool":
        out = ConstantPool(self.capacity)
        out.static = {k: list(v) for k, v in self.static.items()}
        out._static_keys = set(self._static_keys)
        return out


@dataclass
class TestCluster:
    __test__ = False  # not a pytest class
    module: CompiledModule
    use_type_hints: bool
    accessible: tuple[CallableInfo, ...]
    generators: dict[str, tuple[CallableInfo, ...]]
    modifiers: dict[str, tuple[CallableInfo, ...]]
    classes: tuple[str, ...]
    constants: ConstantPool
    # how often an operator let an annotation pick a type or generator
    stats: Counter = field(default_factory=Counter)

    @property
    def types(self) -> tuple[str, ...]:
        """Types a randomly typed parameter may take."""
        return BUILTIN_TYPES + self.classes

    @property
    def known_types(self) -> frozenset:
        return frozenset(self.types) | {"NoneType"} | frozenset(self.generators)

    def functions(self) -> list[CallableInfo]:
        return [c for c in self.accessible if c.kind == "function"]

    def methods_of(self, cls: str) -> list[CallableInfo]:
        return [c for c in self.accessible if c.kind == "method" and c.owner == cls]

    def constructor(self, cls: str) -> Optional[CallableInfo]:
        for c in self.accessible:
            if c.kind == "constructor" and c.owner == cls:
                return c
        return None

    def by_qualname(self, name: str) -> CallableInfo:
        for c in self.accessible:
            if c.qualname == name or (c.kind == "constructor" and c.owner == name):
                return c
        raise KeyError(name)


def _private(name: str) -> bool:
    return name.startswith("_")


_RAISES_HEADER = re.compile(r"^\s*Raises\s*:\s*$")
_RAISES_ENTRY = re.compile(r"^\s+([A-Za-z_][A-Za-z0-9_]*)\s*:")


def _doc_raises(doc: Optional[str]) -> set[str]:
    if not doc:
        return set()
    out: set[str] = set()
    in_section = False
    for line in doc.splitlines():
        if _RAISES_HEADER.match(line):
            in_section = True
            continue
        if in_section:
            m = _RAISES_ENTRY.match(line)
            if m:
                out.add(m.group(1))
            elif line.strip():
                in_section = False
    return out


def raised_exceptions(f: FunctionDef) -> frozenset:
    """Raise targets in the body plus ``Raises:`` entries of the doc comment."""
    names = {n.exc for s in f.body for n in iter_nodes(s) if isinstance(n, Raise)}
    return frozenset(names | _doc_raises(f.doc))


def declared_exceptions(c: CallableInfo) -> frozenset:
    return c.declared_exceptions


def _params(f: FunctionDef, skip_self: bool, hints: bool) -> tuple[ParamInfo, ...]:
    out = []
    params = f.params[1:] if skip_self else f.params
    kinds = {"normal": "positional-or-keyword", "star": "star", "dstar": "dstar"}
    for p in params:
        ann = outer_type(p.annotation) if hints else None
        out.append(ParamInfo(p.name, kinds[p.kind], ann, p.default is not None))
    return tuple(out)


def build_test_cluster(module: CompiledModule, use_type_hints: bool = True) -> TestCluster:
    ast = module.ast
    accessible: list[CallableInfo] = []
    raw_returns: dict[str, Optional[str]] = {}
    raw_params: dict[str, tuple[ParamInfo, ...]] = {}
    public_classes = tuple(c.name for c in ast.classes if not _private(c.name))
    for f in ast.functions:
        if _private(f.name):
            continue
        info = CallableInfo(
            "function", f.name, None, _params(f, False, use_type_hints),
            outer_type(f.returns) if use_type_hints else None,
            raised_exceptions(f), module.functions[f.name],
        )
        accessible.append(info)
        raw_returns[info.qualname] = outer_type(f.returns)
        raw_params[info.qualname] = _params(f, False, True)
    for cls in ast.classes:
        if _private(cls.name):
            continue
        methods = {m.name: m for m in cls.methods}
        init = methods.get("__init__")
        ctor = CallableInfo(
            "constructor", cls.name, cls.name,
            _params(init, True, use_type_hints) if init else (),
            cls.name, raised_exceptions(init) if init else frozenset(),
            module.classes[cls.name].get("__init__"),
        )
        accessible.append(ctor)
        raw_returns[ctor.qualname] = cls.name
        raw_params[ctor.qualname] = _params(init, True, True) if init else ()
        for m in cls.methods:
            if m.name == "__init__" or _private(m.name):
                continue
            info = CallableInfo(
                "method", m.name, cls.name, _params(m, True, use_type_hints),
                outer_type(m.returns) if use_type_hints else None,
                raised_exceptions(m), module.classes[cls.name][m.name],
            )
            accessible.append(info)
            raw_returns[info.qualname] = outer_type(m.returns)
            raw_params[info.qualname] = _params(m, True, True)
    # the type maps are built from the declared annotations in both modes
    generators: dict[str, list[CallableInfo]] = {}
    modifiers: dict[str, list[CallableInfo]] = {}
    for c in accessible:
        ret = raw_returns[c.qualname]
        if ret is not None and ret != "NoneType":
            generators.setdefault(ret, []).append(c)
        consumed = {p.annotation for p in raw_params[c.qualname] if p.annotation}
        if c.kind == "method":
            consumed.add(c.owner)
        for t in sorted(consumed):
            modifiers.setdefault(t, []).append(c)
    return TestCluster(
        module, use_type_hints, tuple(accessible),
        {k: tuple(v) for k, v in generators.items()},
        {k: tuple(v) for k, v in modifiers.items()},
        public_classes, seed_constants(ast),
    )


def generators_for_type(cluster: TestCluster, t: str) -> list:
    """Callables able to produce a value of type ``t``.

    Builtin types yield a literal pseudo-generator.  With hints off only
    constructors qualify, since return annotations are unknown.
    """
    if t in BUILTIN_TYPES:
        return [LiteralGenerator(t)]
    if t not in cluster.known_types:
        raise UnknownType(t)
    out = []
    for c in cluster.generators.get(t, ()):
        if c.kind == "constructor" or c.returns == t:
            out.append(c)
    return out


def modifiers_for_type(cluster: TestCluster, t: str) -> list[CallableInfo]:
    return list(cluster.modifiers.get(t, ()))


def seed_constants(ast: ModuleAst) -> ConstantPool:
    pool = ConstantPool()
    for node in iter_nodes(ast):
        if isinstance(node, Const) and node.kind in ("int", "float", "str", "bytes"):
            pool.add_static(node.value)
        elif isinstance(node, UnaryOp) and node.op == "-" and isinstance(node.operand, Const) \
                and node.operand.kind in ("int", "float"):
            pool.add_static(-node.operand.value)
    return pool
