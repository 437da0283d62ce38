"""Tokenizer, recursive-descent parser and renderer for MiniDyn source."""
from __future__ import annotations

import ast as _pyast
import re
from dataclasses import dataclass
from typing import Optional

from .syntax import (
    Arg, Assert, Assign, Attribute, BinOp, BoolOp, Call, ClassDef, Compare,
    Const, Expr, ExprStmt, FunctionDef, If, Index, ListLit, MapLit, ModuleAst,
    Name, Param, Pass, Raise, Return, SetLit, Stmt, TupleLit, TypeAnn, UnaryOp,
    While, WithRaises,
)

KEYWORDS = {
    "def", "class", "if", "elif", "else", "while", "return", "raise", "pass",
    "assert", "and", "or", "not", "in", "is", "True", "False", "None", "with",
}


class MiniDynSyntaxError(Exception):
    """Parse failure with a 1-based line/column position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass
class Token:
    kind: str  # NAME KEYWORD INT FLOAT STR BYTES OP NEWLINE INDENT DEDENT EOF
    text: str
    line: int
    col: int
    value: object = None


_TRIPLE = r'"""(?:[^\\]|\\.)*?"""' + "|" + r"'''(?:[^\\]|\\.)*?'''"
_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t]+)"
    r"|(?P<comment>\#[^\n]*)"
    r"|(?P<nl>\r?\n)"
    r"""|(?P<bytes>[bB](?:'(?:[^'\\\n]|\\.)*'|"(?:[^"\\\n]|\\.)*"))"""
    r"|(?P<str>" + _TRIPLE + r"""|'(?:[^'\\\n]|\\.)*'|"(?:[^"\\\n]|\\.)*")"""
    r"|(?P<float>(?:\d+\.\d*|\.\d+)(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+)"
    r"|(?P<int>\d+)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>\*\*|//|==|!=|<=|>=|->|\+=|-=|\*=|/=|%=|[-+*/%<>=()\[\]{},:.@])",
    re.DOTALL,
)


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    indents = [0]
    depth = 0
    line_start = True
    line, col0 = 1, 0
    pos = 0
    n = len(source)
    while pos < n:
        if line_start and depth == 0:
            # measure indentation of a logical line; skip blank/comment lines
            m = re.compile(r"[ \t]*").match(source, pos)
            width = len(m.group(0).expandtabs(4))
            after = m.end()
            if after >= n or source[after] in "\r\n#":
                nl = source.find("\n", after)
                if nl < 0:
                    pos = n
                    break
                pos = nl + 1
                line += 1
                col0 = pos
                continue
            if width > indents[-1]:
                indents.append(width)
                tokens.append(Token("INDENT", "", line, 1))
            else:
                while width < indents[-1]:
                    indents.pop()
                    tokens.append(Token("DEDENT", "", line, 1))
                if width != indents[-1]:
                    raise MiniDynSyntaxError("inconsistent dedent", line, width + 1)
            pos = after
            line_start = False
            continue
        m = _TOKEN_RE.match(source, pos)
        if not m:
            raise MiniDynSyntaxError(f"unexpected character {source[pos]!r}", line, pos - col0 + 1)
        kind = m.lastgroup
        text = m.group(0)
        col = pos - col0 + 1
        pos = m.end()
        if kind in ("ws", "comment"):
            continue
        if kind == "nl":
            if depth == 0:
                tokens.append(Token("NEWLINE", "", line, col))
                line_start = True
            line += 1
            col0 = pos
            continue
        if kind == "name":
            tokens.append(Token("KEYWORD" if text in KEYWORDS else "NAME", text, line, col))
        elif kind == "int":
            tokens.append(Token("INT", text, line, col, int(text)))
        elif kind == "float":
            tokens.append(Token("FLOAT", text, line, col, float(text)))
        elif kind in ("str", "bytes"):
            try:
                value = _pyast.literal_eval(text)
            except (ValueError, SyntaxError) as exc:
                raise MiniDynSyntaxError(f"bad literal: {exc}", line, col) from None
            tokens.append(Token("BYTES" if kind == "bytes" else "STR", text, line, col, value))
            if "\n" in text:
                line += text.count("\n")
                col0 = pos - (len(text) - text.rfind("\n") - 1)
        else:
            if text in "([{":
                depth += 1
            elif text in ")]}":
                depth = max(0, depth - 1)
            tokens.append(Token("OP", text, line, col))
    col = pos - col0 + 1
    if tokens and tokens[-1].kind not in ("NEWLINE", "INDENT", "DEDENT") and depth == 0:
        tokens.append(Token("NEWLINE", "", line, col))
    for _ in indents[1:]:
        tokens.append(Token("DEDENT", "", line, col))
    tokens.append(Token("EOF", "", line, col))
    return tokens


_AUG = {"+=": "+", "-=": "-", "*=": "*", "/=": "/", "%=": "%"}
_COMPARE_TOKENS = {"==", "!=", "<", "<=", ">", ">="}


class Parser:
    def __init__(self, source: str):
        self.toks = tokenize(source)
        self.i = 0

    # -- helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg: str, tok: Optional[Token] = None):
        t = tok or self.tok
        found = t.text or t.kind
        raise MiniDynSyntaxError(f"{msg} (found {found!r})", t.line, t.col)

    def at(self, kind: str, text: Optional[str] = None) -> bool:
        t = self.tok
        return t.kind == kind and (text is None or t.text == text)

    def at_op(self, text: str) -> bool:
        return self.at("OP", text)

    def at_kw(self, text: str) -> bool:
        return self.at("KEYWORD", text)

    def expect(self, kind: str, text: Optional[str] = None) -> Token:
        if not self.at(kind, text):
            self.error(f"expected {text or kind}")
        t = self.tok
        self.i += 1
        return t

    def accept(self, kind: str, text: Optional[str] = None) -> Optional[Token]:
        if self.at(kind, text):
            t = self.tok
            self.i += 1
            return t
        return None

    # -- module level
    def parse_module(self, name: str) -> ModuleAst:
        items = []
        while not self.at("EOF"):
            if self.accept("NEWLINE"):
                continue
            if self.at_op("@") or self.at_kw("def"):
                items.append(self.parse_funcdef())
            elif self.at_kw("class"):
                items.append(self.parse_classdef())
            elif self.at("NAME") and self.peek().kind == "OP" and self.peek().text == "=":
                t = self.expect("NAME")
                self.expect("OP", "=")
                value = self.parse_expr()
                self.expect("NEWLINE")
                items.append(Assign(Name(t.text, t.line), value, line=t.line))
            else:
                self.error("expected a definition")
        return ModuleAst(name, tuple(items))

    def parse_funcdef(self) -> FunctionDef:
        xfail = False
        if self.accept("OP", "@"):
            t = self.expect("NAME")
            if t.text != "xfail":
                self.error("only the @xfail marker is supported", t)
            self.expect("NEWLINE")
            xfail = True
        start = self.expect("KEYWORD", "def")
        name = self.expect("NAME").text
        self.expect("OP", "(")
        params: list[Param] = []
        while not self.at_op(")"):
            params.append(self.parse_param())
            if not self.accept("OP", ","):
                break
        self.expect("OP", ")")
        returns = None
        if self.accept("OP", "->"):
            returns = self.parse_annotation()
        self.expect("OP", ":")
        body = self.parse_suite()
        doc = None
        if body and isinstance(body[0], ExprStmt) and isinstance(body[0].value, Const) \
                and body[0].value.kind == "str":
            doc = body[0].value.value
            body = body[1:]
        seen = set()
        for p in params:
            if p.name in seen:
                self.error(f"duplicate parameter {p.name!r}", start)
            seen.add(p.name)
        return FunctionDef(name, tuple(params), tuple(body), returns, doc, xfail, line=start.line)

    def parse_param(self) -> Param:
        kind = "normal"
        if self.accept("OP", "**"):
            kind = "dstar"
        elif self.accept("OP", "*"):
            kind = "star"
        name = self.expect("NAME").text
        ann = None
        if self.accept("OP", ":"):
            ann = self.parse_annotation()
        default = None
        if kind == "normal" and self.accept("OP", "="):
            default = self.parse_expr()
        return Param(name, kind, ann, default)

    def parse_annotation(self) -> TypeAnn:
        if self.at_kw("None"):
            self.i += 1
            return TypeAnn("None")
        name = self.expect("NAME").text
        args: list[TypeAnn] = []
        if self.accept("OP", "["):
            args.append(self.parse_annotation())
            while self.accept("OP", ","):
                args.append(self.parse_annotation())
            self.expect("OP", "]")
        return TypeAnn(name, tuple(args))

    def parse_classdef(self) -> ClassDef:
        start = self.expect("KEYWORD", "class")
        name = self.expect("NAME").text
        self.expect("OP", ":")
        self.expect("NEWLINE")
        self.expect("INDENT")
        methods = []
        doc = None
        if self.at("STR"):
            doc = self.tok.value
            self.i += 1
            self.expect("NEWLINE")
        while not self.at("DEDENT"):
            if self.accept("NEWLINE"):
                continue
            if self.at_kw("pass"):
                self.i += 1
                self.expect("NEWLINE")
                continue
            methods.append(self.parse_funcdef())
        self.expect("DEDENT")
        return ClassDef(name, tuple(methods), doc, line=start.line)

    # -- statements
    def parse_suite(self) -> list[Stmt]:
        if not self.at("NEWLINE"):
            stmt = self.parse_simple()
            self.expect("NEWLINE")
            return [stmt]
        self.expect("NEWLINE")
        self.expect("INDENT")
        body = []
        while not self.at("DEDENT"):
            if self.accept("NEWLINE"):
                continue
            body.append(self.parse_stmt())
        self.expect("DEDENT")
        return body

    def parse_stmt(self) -> Stmt:
        t = self.tok
        if self.at_kw("if"):
            return self.parse_if()
        if self.at_kw("while"):
            self.i += 1
            test = self.parse_expr()
            self.expect("OP", ":")
            return While(test, tuple(self.parse_suite()), line=t.line)
        if self.at_kw("with"):
            self.i += 1
            fn = self.expect("NAME")
            if fn.text != "raises":
                self.error("only 'with raises(...)' is supported", fn)
            self.expect("OP", "(")
            exc = self.expect("NAME").text
            self.expect("OP", ")")
            self.expect("OP", ":")
            return WithRaises(exc, tuple(self.parse_suite()), line=t.line)
        if self.at_kw("def") or self.at_kw("class"):
            self.error("nested definitions are not supported")
        stmt = self.parse_simple()
        self.expect("NEWLINE")
        return stmt

    def parse_if(self) -> If:
        t = self.tok
        self.i += 1  # if / elif
        test = self.parse_expr()
        self.expect("OP", ":")
        body = tuple(self.parse_suite())
        orelse: tuple = ()
        if self.at_kw("elif"):
            orelse = (self.parse_if(),)
        elif self.accept("KEYWORD", "else"):
            self.expect("OP", ":")
            orelse = tuple(self.parse_suite())
        return If(test, body, orelse, line=t.line)

    def parse_simple(self) -> Stmt:
        t = self.tok
        if self.accept("KEYWORD", "return"):
            if self.at("NEWLINE"):
                return Return(None, line=t.line)
            return Return(self.parse_expr(), line=t.line)
        if self.accept("KEYWORD", "pass"):
            return Pass(line=t.line)
        if self.accept("KEYWORD", "assert"):
            return Assert(self.parse_expr(), line=t.line)
        if self.accept("KEYWORD", "raise"):
            exc = self.expect("NAME").text
            self.expect("OP", "(")
            msg = None if self.at_op(")") else self.parse_expr()
            self.expect("OP", ")")
            return Raise(exc, msg, line=t.line)
        expr = self.parse_expr()
        if self.at_op("=") or (self.tok.kind == "OP" and self.tok.text in _AUG):
            if not isinstance(expr, (Name, Attribute, Index)):
                self.error("invalid assignment target", t)
            op = self.tok.text
            self.i += 1
            value = self.parse_expr()
            if op != "=":
                value = BinOp(_AUG[op], expr, value)
            return Assign(expr, value, line=t.line)
        return ExprStmt(expr, line=t.line)

    # -- expressions
    def parse_expr(self) -> Expr:
        left = self.parse_and()
        while self.accept("KEYWORD", "or"):
            left = BoolOp("or", left, self.parse_and())
        return left

    def parse_and(self) -> Expr:
        left = self.parse_not()
        while self.accept("KEYWORD", "and"):
            left = BoolOp("and", left, self.parse_not())
        return left

    def parse_not(self) -> Expr:
        if self.accept("KEYWORD", "not"):
            return UnaryOp("not", self.parse_not())
        return self.parse_comparison()

    def _compare_op(self) -> Optional[str]:
        t = self.tok
        if t.kind == "OP" and t.text in _COMPARE_TOKENS:
            self.i += 1
            return t.text
        if t.kind == "KEYWORD":
            if t.text == "in":
                self.i += 1
                return "in"
            if t.text == "not" and self.peek().kind == "KEYWORD" and self.peek().text == "in":
                self.i += 2
                return "not in"
            if t.text == "is":
                self.i += 1
                if self.accept("KEYWORD", "not"):
                    return "is not"
                return "is"
        return None

    def parse_comparison(self) -> Expr:
        left = self.parse_arith()
        op = self._compare_op()
        if op is None:
            return left
        right = self.parse_arith()
        if self._compare_op() is not None:
            self.error("chained comparisons are not supported", self.toks[self.i - 1])
        return Compare(op, left, right)

    def parse_arith(self) -> Expr:
        left = self.parse_term()
        while self.tok.kind == "OP" and self.tok.text in ("+", "-"):
            op = self.tok.text
            self.i += 1
            left = BinOp(op, left, self.parse_term())
        return left

    def parse_term(self) -> Expr:
        left = self.parse_unary()
        while self.tok.kind == "OP" and self.tok.text in ("*", "/", "//", "%"):
            op = self.tok.text
            self.i += 1
            left = BinOp(op, left, self.parse_unary())
        return left

    def parse_unary(self) -> Expr:
        if self.accept("OP", "-"):
            return UnaryOp("-", self.parse_unary())
        return self.parse_postfix()

    def parse_postfix(self) -> Expr:
        expr = self.parse_atom()
        while True:
            t = self.tok
            if self.accept("OP", "("):
                expr = Call(expr, tuple(self.parse_args()), line=t.line)
            elif self.accept("OP", "."):
                expr = Attribute(expr, self.expect("NAME").text)
            elif self.accept("OP", "["):
                idx = self.parse_expr()
                self.expect("OP", "]")
                expr = Index(expr, idx)
            else:
                return expr

    def parse_args(self) -> list[Arg]:
        args: list[Arg] = []
        while not self.at_op(")"):
            if self.accept("OP", "**"):
                args.append(Arg("dstar", self.parse_expr()))
            elif self.accept("OP", "*"):
                args.append(Arg("star", self.parse_expr()))
            elif self.at("NAME") and self.peek().kind == "OP" and self.peek().text == "=":
                name = self.expect("NAME").text
                self.expect("OP", "=")
                args.append(Arg("kw", self.parse_expr(), name))
            else:
                if any(a.kind != "pos" for a in args):
                    self.error("positional argument after keyword or unpacking")
                args.append(Arg("pos", self.parse_expr()))
            if not self.accept("OP", ","):
                break
        self.expect("OP", ")")
        return args

    def parse_atom(self) -> Expr:
        t = self.tok
        if t.kind == "INT":
            self.i += 1
            return Const("int", t.value, line=t.line)
        if t.kind == "FLOAT":
            self.i += 1
            return Const("float", t.value, line=t.line)
        if t.kind == "STR":
            self.i += 1
            return Const("str", t.value, line=t.line)
        if t.kind == "BYTES":
            self.i += 1
            return Const("bytes", t.value, line=t.line)
        if t.kind == "KEYWORD" and t.text in ("True", "False"):
            self.i += 1
            return Const("bool", t.text == "True", line=t.line)
        if t.kind == "KEYWORD" and t.text == "None":
            self.i += 1
            return Const("none", None, line=t.line)
        if t.kind == "NAME":
            self.i += 1
            return Name(t.text, line=t.line)
        if self.accept("OP", "("):
            if self.accept("OP", ")"):
                return TupleLit(())
            first = self.parse_expr()
            if self.accept("OP", ")"):
                return first
            elts = [first]
            while self.accept("OP", ","):
                if self.at_op(")"):
                    break
                elts.append(self.parse_expr())
            self.expect("OP", ")")
            return TupleLit(tuple(elts))
        if self.accept("OP", "["):
            elts = []
            while not self.at_op("]"):
                elts.append(self.parse_expr())
                if not self.accept("OP", ","):
                    break
            self.expect("OP", "]")
            return ListLit(tuple(elts))
        if self.accept("OP", "{"):
            if self.accept("OP", "}"):
                return MapLit(())
            first = self.parse_expr()
            if self.accept("OP", ":"):
                items = [(first, self.parse_expr())]
                while self.accept("OP", ","):
                    if self.at_op("}"):
                        break
                    k = self.parse_expr()
                    self.expect("OP", ":")
                    items.append((k, self.parse_expr()))
                self.expect("OP", "}")
                return MapLit(tuple(items))
            elts = [first]
            while self.accept("OP", ","):
                if self.at_op("}"):
                    break
                elts.append(self.parse_expr())
            self.expect("OP", "}")
            return SetLit(tuple(elts))
        self.error("expected an expression")


def parse_module(source: str, name: str = "module") -> ModuleAst:
    """Parse MiniDyn source text into a :class:`ModuleAst`.

    Raises :class:`MiniDynSyntaxError` carrying a 1-based line and column.
    """
    return Parser(source).parse_module(name)


# --- rendering -------------------------------------------------------------

_PREC = {"or": 1, "and": 2, "not": 3, "cmp": 4, "+": 5, "-": 5, "*": 6, "/": 6,
         "//": 6, "%": 6, "neg": 7, "postfix": 8, "atom": 9}


def _prec(e: Expr) -> int:
    if isinstance(e, BoolOp):
        return _PREC[e.op]
    if isinstance(e, UnaryOp):
        return _PREC["not"] if e.op == "not" else _PREC["neg"]
    if isinstance(e, Compare):
        return _PREC["cmp"]
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, (Call, Attribute, Index)):
        return _PREC["postfix"]
    if isinstance(e, Const) and e.kind in ("int", "float") and _is_negative(e.value):
        return _PREC["neg"]
    return _PREC["atom"]


def _is_negative(v) -> bool:
    return v < 0 or (isinstance(v, float) and str(v).startswith("-"))


def render_literal(kind: str, value) -> str:
    if kind == "none":
        return "None"
    if kind == "bool":
        return "True" if value else "False"
    if kind == "float":
        text = repr(float(value))
        if text in ("inf", "-inf", "nan"):
            raise ValueError(f"non-finite float {text} has no MiniDyn literal")
        return text
    if kind == "int":
        return str(int(value))
    return repr(value)


def _wrap(e: Expr, min_prec: int) -> str:
    text = render_expr(e)
    return f"({text})" if _prec(e) < min_prec else text


def render_expr(e: Expr) -> str:
    if isinstance(e, Const):
        return render_literal(e.kind, e.value)
    if isinstance(e, Name):
        return e.id
    if isinstance(e, BoolOp):
        p = _PREC[e.op]
        return f"{_wrap(e.left, p)} {e.op} {_wrap(e.right, p + 1)}"
    if isinstance(e, UnaryOp):
        if e.op == "not":
            return f"not {_wrap(e.operand, _PREC['not'])}"
        return f"-{_wrap(e.operand, _PREC['neg'])}"
    if isinstance(e, Compare):
        return f"{_wrap(e.left, 5)} {e.op} {_wrap(e.right, 5)}"
    if isinstance(e, BinOp):
        p = _PREC[e.op]
        return f"{_wrap(e.left, p)} {e.op} {_wrap(e.right, p + 1)}"
    if isinstance(e, Call):
        return f"{_wrap(e.func, _PREC['postfix'])}({', '.join(_render_arg(a) for a in e.args)})"
    if isinstance(e, Attribute):
        return f"{_wrap(e.obj, _PREC['postfix'])}.{e.name}"
    if isinstance(e, Index):
        return f"{_wrap(e.obj, _PREC['postfix'])}[{render_expr(e.index)}]"
    if isinstance(e, ListLit):
        return "[" + ", ".join(render_expr(x) for x in e.elts) + "]"
    if isinstance(e, TupleLit):
        if len(e.elts) == 1:
            return f"({render_expr(e.elts[0])},)"
        return "(" + ", ".join(render_expr(x) for x in e.elts) + ")"
    if isinstance(e, SetLit):
        if not e.elts:
            return "set()"
        return "{" + ", ".join(render_expr(x) for x in e.elts) + "}"
    if isinstance(e, MapLit):
        return "{" + ", ".join(f"{render_expr(k)}: {render_expr(v)}" for k, v in e.items) + "}"
    raise TypeError(f"cannot render {e!r}")


def _render_arg(a: Arg) -> str:
    if a.kind == "pos":
        return render_expr(a.value)
    if a.kind == "kw":
        return f"{a.name}={render_expr(a.value)}"
    if a.kind == "star":
        return f"*{render_expr(a.value)}"
    return f"**{render_expr(a.value)}"


def render_stmt(s: Stmt, indent: int = 0) -> list[str]:
    pad = "    " * indent
    if isinstance(s, Assign):
        return [f"{pad}{render_expr(s.target)} = {render_expr(s.value)}"]
    if isinstance(s, ExprStmt):
        return [f"{pad}{render_expr(s.value)}"]
    if isinstance(s, Return):
        return [f"{pad}return" + ("" if s.value is None else f" {render_expr(s.value)}")]
    if isinstance(s, Raise):
        msg = "" if s.message is None else render_expr(s.message)
        return [f"{pad}raise {s.exc}({msg})"]
    if isinstance(s, Pass):
        return [f"{pad}pass"]
    if isinstance(s, Assert):
        return [f"{pad}assert {render_expr(s.test)}"]
    if isinstance(s, If):
        lines = [f"{pad}if {render_expr(s.test)}:"] + render_block(s.body, indent + 1)
        orelse = s.orelse
        while len(orelse) == 1 and isinstance(orelse[0], If):
            e = orelse[0]
            lines += [f"{pad}elif {render_expr(e.test)}:"] + render_block(e.body, indent + 1)
            orelse = e.orelse
        if orelse:
            lines += [f"{pad}else:"] + render_block(orelse, indent + 1)
        return lines
    if isinstance(s, While):
        return [f"{pad}while {render_expr(s.test)}:"] + render_block(s.body, indent + 1)
    if isinstance(s, WithRaises):
        return [f"{pad}with raises({s.exc}):"] + render_block(s.body, indent + 1)
    raise TypeError(f"cannot render {s!r}")


def render_block(body, indent: int) -> list[str]:
    if not body:
        return ["    " * indent + "pass"]
    out: list[str] = []
    for s in body:
        out += render_stmt(s, indent)
    return out


def _render_param(p: Param) -> str:
    prefix = {"normal": "", "star": "*", "dstar": "**"}[p.kind]
    text = prefix + p.name
    if p.annotation is not None:
        text += f": {p.annotation}"
    if p.default is not None:
        text += f" = {render_expr(p.default)}"
    return text


def render_function(f: FunctionDef, indent: int = 0) -> list[str]:
    pad = "    " * indent
    lines = [f"{pad}@xfail"] if f.xfail else []
    ret = f" -> {f.returns}" if f.returns is not None else ""
    lines.append(f"{pad}def {f.name}({', '.join(_render_param(p) for p in f.params)}){ret}:")
    if f.doc is not None:
        lines.append(f"{pad}    {f.doc!r}")
        for s in f.body:
            lines += render_stmt(s, indent + 1)
    else:
        lines += render_block(f.body, indent + 1)
    return lines


def render_module(m: ModuleAst) -> str:
    """Render a module back to parseable MiniDyn text."""
    chunks: list[list[str]] = []
    for item in m.items:
        if isinstance(item, FunctionDef):
            chunks.append(render_function(item))
        elif isinstance(item, ClassDef):
            lines = [f"class {item.name}:"]
            if item.doc is not None:
                lines.append(f"    {item.doc!r}")
            if not item.methods and item.doc is None:
                lines.append("    pass")
            for i, meth in enumerate(item.methods):
                if i:
                    lines.append("")
                lines += render_function(meth, 1)
            chunks.append(lines)
        else:
            chunks.append(render_stmt(item))
    out: list[str] = []
    for i, chunk in enumerate(chunks):
        if i:
            out += ["", ""] if len(chunk) > 1 or len(chunks[i - 1]) > 1 else []
        out += chunk
    return "\n".join(out) + "\n"
