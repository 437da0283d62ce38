"""AST node types for MiniDyn.

Nodes are frozen dataclasses so that two parses of the same text compare
equal.  Source positions are carried for diagnostics but excluded from
equality.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

BINARY_OPS = ("+", "-", "*", "/", "//", "%")
COMPARE_OPS = ("==", "!=", "<", "<=", ">", ">=", "in", "not in", "is", "is not")
BOOL_OPS = ("and", "or")


@dataclass(frozen=True)
class Node:
    pass


# --- expressions -----------------------------------------------------------


@dataclass(frozen=True)
class Const(Node):
    kind: str  # int | float | bool | str | bytes | none
    value: object
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Name(Node):
    id: str
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class BinOp(Node):
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class UnaryOp(Node):
    op: str  # "-" | "not"
    operand: "Expr"


@dataclass(frozen=True)
class BoolOp(Node):
    op: str  # "and" | "or"
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Compare(Node):
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Arg(Node):
    kind: str  # pos | kw | star | dstar
    value: "Expr"
    name: Optional[str] = None


@dataclass(frozen=True)
class Call(Node):
    func: "Expr"
    args: tuple[Arg, ...] = ()
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Attribute(Node):
    obj: "Expr"
    name: str


@dataclass(frozen=True)
class Index(Node):
    obj: "Expr"
    index: "Expr"


@dataclass(frozen=True)
class ListLit(Node):
    elts: tuple["Expr", ...] = ()


@dataclass(frozen=True)
class TupleLit(Node):
    elts: tuple["Expr", ...] = ()


@dataclass(frozen=True)
class SetLit(Node):
    elts: tuple["Expr", ...] = ()


@dataclass(frozen=True)
class MapLit(Node):
    items: tuple[tuple["Expr", "Expr"], ...] = ()


Expr = Union[Const, Name, BinOp, UnaryOp, BoolOp, Compare, Call, Attribute,
             Index, ListLit, TupleLit, SetLit, MapLit]


# --- statements ------------------------------------------------------------


@dataclass(frozen=True)
class Assign(Node):
    target: Expr  # Name | Attribute | Index
    value: Expr
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class ExprStmt(Node):
    value: Expr
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Return(Node):
    value: Optional[Expr] = None
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Raise(Node):
    exc: str
    message: Optional[Expr] = None
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Pass(Node):
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Assert(Node):
    test: Expr
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class If(Node):
    test: Expr
    body: tuple["Stmt", ...]
    orelse: tuple["Stmt", ...] = ()
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class While(Node):
    test: Expr
    body: tuple["Stmt", ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class WithRaises(Node):
    """``with raises(Cls):`` block, used by emitted test files."""

    exc: str
    body: tuple["Stmt", ...]
    line: int = field(default=0, compare=False)


Stmt = Union[Assign, ExprStmt, Return, Raise, Pass, Assert, If, While, WithRaises]


# --- declarations ----------------------------------------------------------


@dataclass(frozen=True)
class TypeAnn(Node):
    name: str
    args: tuple["TypeAnn", ...] = ()

    def __str__(self) -> str:
        if not self.args:
            return self.name
        return f"{self.name}[{', '.join(str(a) for a in self.args)}]"


@dataclass(frozen=True)
class Param(Node):
    name: str
    kind: str = "normal"  # normal | star | dstar
    annotation: Optional[TypeAnn] = None
    default: Optional[Expr] = None


@dataclass(frozen=True)
class FunctionDef(Node):
    name: str
    params: tuple[Param, ...]
    body: tuple[Stmt, ...]
    returns: Optional[TypeAnn] = None
    doc: Optional[str] = None
    xfail: bool = False
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class ClassDef(Node):
    name: str
    methods: tuple[FunctionDef, ...]
    doc: Optional[str] = None
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class ModuleAst(Node):
    name: str
    items: tuple[Union[FunctionDef, ClassDef, Assign], ...]

    @property
    def functions(self) -> list[FunctionDef]:
        return [i for i in self.items if isinstance(i, FunctionDef)]

    @property
    def classes(self) -> list[ClassDef]:
        return [i for i in self.items if isinstance(i, ClassDef)]

    @property
    def constants(self) -> list[Assign]:
        return [i for i in self.items if isinstance(i, Assign)]


def iter_nodes(node):
    """Yield ``node`` and every AST node below it, depth first."""
    yield node
    if isinstance(node, Node):
        for name in node.__dataclass_fields__:
            yield from _iter_value(getattr(node, name))


def _iter_value(value):
    if isinstance(value, Node):
        yield from iter_nodes(value)
    elif isinstance(value, tuple):
        for v in value:
            yield from _iter_value(v)
