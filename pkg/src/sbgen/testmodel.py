"""Test cases as chromosomes: statements over variables, plus rendering.

A statement defines one variable.  Calls bind each formal parameter to an
earlier variable, to the ``None`` literal, or leave it out.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Union

from .cluster import CallableInfo
from .minidyn.parser import render_module
from .minidyn.syntax import (
    Arg, Assign, Attribute, Call, Const, ExprStmt, FunctionDef, ListLit, MapLit,
    ModuleAst, Name, SetLit, TupleLit, WithRaises,
)

DEFAULT_L = 50
DEFAULT_N = 50

_LITERAL_KIND = {"Int": "int", "Float": "float", "Bool": "bool", "Str": "str", "Bytes": "bytes"}
_NAME_PREFIX = {
    "Int": "int", "Float": "float", "Bool": "bool", "Str": "str", "Bytes": "bytes",
    "List": "list", "Set": "set", "Map": "dict", "Tuple": "tuple", "NoneType": "none",
}


class Var:
    """A variable defined by exactly one statement; identity matters, not value."""

    __slots__ = ("type",)

    def __init__(self, type: Optional[str] = None):
        self.type = type

    def __repr__(self) -> str:
        return f"Var({self.type})"


@dataclass(eq=False)
class Binding:
    var: Optional[Var]  # None stands for the NoneVal literal
    mode: str  # positional | keyword | star | dstar


@dataclass(eq=False)
class Statement:
    ret: Var

    def uses(self) -> list[Var]:
        return []

    def replace(self, old: Var, new: Var) -> None:
        pass

    def clone(self, mapping: dict) -> "Statement":
        raise NotImplementedError


@dataclass(eq=False)
class PrimitiveStatement(Statement):
    kind: str = "Int"
    value: object = 0

    def clone(self, mapping: dict) -> "PrimitiveStatement":
        return PrimitiveStatement(_fresh(self.ret, mapping), self.kind, self.value)


@dataclass(eq=False)
class CollectionStatement(Statement):
    kind: str = "List"  # List | Set | Map | Tuple
    elements: list = field(default_factory=list)  # Vars, or (key, value) pairs for Map

    def uses(self) -> list[Var]:
        if self.kind == "Map":
            return [v for pair in self.elements for v in pair]
        return list(self.elements)

    def replace(self, old: Var, new: Var) -> None:
        if self.kind == "Map":
            self.elements = [(new if k is old else k, new if v is old else v) for k, v in self.elements]
        else:
            self.elements = [new if v is old else v for v in self.elements]

    def clone(self, mapping: dict) -> "CollectionStatement":
        if self.kind == "Map":
            els = [(mapping.get(k, k), mapping.get(v, v)) for k, v in self.elements]
        else:
            els = [mapping.get(v, v) for v in self.elements]
        return CollectionStatement(_fresh(self.ret, mapping), self.kind, els)


@dataclass(eq=False)
class CallStatement(Statement):
    callable: CallableInfo = None  # type: ignore[assignment]
    bindings: dict = field(default_factory=dict)  # param name -> Binding

    def uses(self) -> list[Var]:
        return [b.var for b in self.bindings.values() if b.var is not None]

    def replace(self, old: Var, new: Var) -> None:
        for b in self.bindings.values():
            if b.var is old:
                b.var = new

    def _clone_bindings(self, mapping: dict) -> dict:
        return {k: Binding(mapping.get(b.var, b.var) if b.var is not None else None, b.mode)
                for k, b in self.bindings.items()}


@dataclass(eq=False)
class FunctionStatement(CallStatement):
    def clone(self, mapping: dict) -> "FunctionStatement":
        return FunctionStatement(_fresh(self.ret, mapping), self.callable, self._clone_bindings(mapping))


@dataclass(eq=False)
class ConstructorStatement(CallStatement):
    def clone(self, mapping: dict) -> "ConstructorStatement":
        return ConstructorStatement(_fresh(self.ret, mapping), self.callable, self._clone_bindings(mapping))


@dataclass(eq=False)
class MethodStatement(CallStatement):
    receiver: Var = None  # type: ignore[assignment]

    def uses(self) -> list[Var]:
        return [self.receiver] + super().uses()

    def replace(self, old: Var, new: Var) -> None:
        if self.receiver is old:
            self.receiver = new
        super().replace(old, new)

    def clone(self, mapping: dict) -> "MethodStatement":
        return MethodStatement(_fresh(self.ret, mapping), self.callable, self._clone_bindings(mapping),
                               mapping.get(self.receiver, self.receiver))


def _fresh(v: Var, mapping: dict) -> Var:
    new = Var(v.type)
    mapping[v] = new
    return new


@dataclass(eq=False)
class TestCase:
    __test__ = False  # not a pytest class
    statements: list = field(default_factory=list)
    # regression oracle, filled in after the search
    assertions: list = field(default_factory=list)
    expected_exception: Optional[tuple[int, str]] = None
    xfail: bool = False
    # cached last execution (result, trace); cleared on change
    last: Optional[tuple] = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.statements)

    def clone(self) -> "TestCase":
        return clone_with_rename(self)

    def defined_before(self, index: int) -> list[Var]:
        return [s.ret for s in self.statements[:index]]

    def index_of(self, v: Var) -> int:
        for i, s in enumerate(self.statements):
            if s.ret is v:
                return i
        raise KeyError(v)

    def key(self) -> str:
        """Canonical text used for duplicate detection."""
        return render_case(self, 0)


@dataclass(eq=False)
class TestSuite:
    __test__ = False  # not a pytest class
    cases: list = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.cases)

    def clone(self) -> "TestSuite":
        return TestSuite([c.clone() for c in self.cases])


def clone_with_rename(case: TestCase) -> TestCase:
    """Deep copy with fresh statements and variables; behaviour is unchanged."""
    mapping: dict = {}
    out = TestCase([s.clone(mapping) for s in case.statements])
    out.assertions = [a.remap(mapping) for a in case.assertions]
    out.expected_exception = case.expected_exception
    out.xfail = case.xfail
    out.last = case.last
    return out


# --- validation --------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str  # forward-ref | binding | receiver | size | duplicate
    index: int
    message: str


def _binding_violations(s: CallStatement, i: int, defined_at: dict, stmts: list) -> list[Violation]:
    out = []
    keyword_seen = False
    for p in s.callable.params:
        b = s.bindings.get(p.name)
        if b is None:
            if not p.optional:
                out.append(Violation("binding", i, f"required parameter {p.name!r} omitted"))
            if p.kind == "positional-or-keyword":
                keyword_seen = True
            continue
        if p.kind == "positional-or-keyword":
            if b.mode == "positional":
                if keyword_seen:
                    out.append(Violation("binding", i, f"positional {p.name!r} after keyword or omitted"))
            elif b.mode == "keyword":
                keyword_seen = True
            else:
                out.append(Violation("binding", i, f"mode {b.mode} on a plain parameter"))
        elif p.kind == "star":
            if b.mode != "star" or b.var is None or b.var.type != "List":
                out.append(Violation("binding", i, f"star parameter {p.name!r} needs a List"))
        elif p.kind == "dstar":
            ok = b.mode == "dstar" and b.var is not None and b.var.type == "Map"
            if ok:
                src = stmts[defined_at[b.var]] if b.var in defined_at else None
                ok = isinstance(src, CollectionStatement) and src.kind == "Map" and \
                    all(k.type == "Str" for k, _ in src.elements)
            if not ok:
                out.append(Violation("binding", i, f"double-star parameter {p.name!r} needs a Map with Str keys"))
    names = {p.name for p in s.callable.params}
    for k in s.bindings:
        if k not in names:
            out.append(Violation("binding", i, f"unknown parameter {k!r}"))
    return out


def validate_test_case(case: TestCase, L: int = DEFAULT_L, require_nonempty: bool = False) -> list[Violation]:
    """Return the list of violated constraints (empty when valid)."""
    out: list[Violation] = []
    if len(case.statements) > L:
        out.append(Violation("size", len(case.statements), f"{len(case.statements)} statements exceed L={L}"))
    if require_nonempty and not case.statements:
        out.append(Violation("size", 0, "empty test case"))
    defined_at: dict = {}
    for i, s in enumerate(case.statements):
        for v in s.uses():
            if v not in defined_at:
                out.append(Violation("forward-ref", i, f"statement {i} uses a variable not defined before it"))
        if isinstance(s, MethodStatement):
            if s.receiver.type != s.callable.owner:
                out.append(Violation("receiver", i, "receiver type does not own the method"))
        if isinstance(s, CollectionStatement):
            if s.kind == "Map" and any(not isinstance(p, tuple) or len(p) != 2 for p in s.elements):
                out.append(Violation("binding", i, "map entries must be pairs"))
        if isinstance(s, CallStatement):
            out += _binding_violations(s, i, defined_at, case.statements)
        if s.ret in defined_at:
            out.append(Violation("duplicate", i, "variable defined twice"))
        defined_at[s.ret] = i
    return out


# --- rendering ---------------------------------------------------------------


def _snake(name: str) -> str:
    return re.sub(r"(?<!^)(?=[A-Z])", "_", name).lower()


class Namer:
    """Assigns ``<kind>_<counter>`` names in order of first definition."""

    def __init__(self):
        self.names: dict = {}
        self.counters: dict[str, int] = {}

    def prefix(self, v: Var) -> str:
        if v.type is None:
            return "var"
        return _NAME_PREFIX.get(v.type) or _snake(v.type)

    def define(self, v: Var) -> str:
        p = self.prefix(v)
        n = self.counters.get(p, 0)
        self.counters[p] = n + 1
        self.names[v] = f"{p}_{n}"
        return self.names[v]

    def __getitem__(self, v: Var) -> str:
        return self.names[v]


def _value_expr(v: Optional[Var], names: Namer):
    return Const("none", None) if v is None else Name(names[v])


def statement_expr(s: Statement, names: Namer):
    """The right-hand side of ``s`` as a MiniDyn expression."""
    if isinstance(s, PrimitiveStatement):
        return Const(_LITERAL_KIND[s.kind], s.value)
    if isinstance(s, CollectionStatement):
        if s.kind == "Map":
            return MapLit(tuple((Name(names[k]), Name(names[v])) for k, v in s.elements))
        lit = {"List": ListLit, "Set": SetLit, "Tuple": TupleLit}[s.kind]
        return lit(tuple(Name(names[v]) for v in s.elements))
    assert isinstance(s, CallStatement)
    args = []
    for p in s.callable.params:
        b = s.bindings.get(p.name)
        if b is None:
            continue
        value = _value_expr(b.var, names)
        kind = {"positional": "pos", "keyword": "kw", "star": "star", "dstar": "dstar"}[b.mode]
        args.append(Arg(kind, value, p.name if kind == "kw" else None))
    if isinstance(s, MethodStatement):
        func = Attribute(Name(names[s.receiver]), s.callable.name)
    else:
        func = Name(s.callable.owner if isinstance(s, ConstructorStatement) else s.callable.name)
    return Call(func, tuple(args))


def _assigns(s: Statement) -> bool:
    return not (isinstance(s, CallStatement) and s.callable.returns == "NoneType"
                and not isinstance(s, ConstructorStatement))


def case_to_function(case: TestCase, index: int) -> FunctionDef:
    names = Namer()
    body: list = []
    raising = case.expected_exception
    for i, s in enumerate(case.statements):
        expr = statement_expr(s, names)
        if _assigns(s):
            stmt = Assign(Name(names.define(s.ret)), expr)
        else:
            names.define(s.ret)
            stmt = ExprStmt(expr)
        if raising is not None and raising[0] == i:
            body.append(WithRaises(raising[1], (stmt,)))
        else:
            body.append(stmt)
        for a in case.assertions:
            if a.position == i:
                body.append(a.to_stmt(names))
    return FunctionDef(f"test_case_{index}", (), tuple(body), xfail=case.xfail)


def render_case(case: TestCase, index: int = 0) -> str:
    return render_module(ModuleAst("tests", (case_to_function(case, index),)))


def render(obj: Union[TestCase, TestSuite, list]) -> str:
    """Render a case or suite as MiniDyn test source, one ``test_case_<i>`` per case."""
    if isinstance(obj, TestCase):
        cases = [obj]
    elif isinstance(obj, TestSuite):
        cases = obj.cases
    else:
        cases = list(obj)
    return render_module(ModuleAst("tests", tuple(case_to_function(c, i) for i, c in enumerate(cases))))
