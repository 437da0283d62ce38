"""Compile MiniDyn ASTs to a small stack bytecode.

Every conditional jump is an instrumented predicate that owns a pair of
branches.  ``and``/``or`` in a condition are lowered to nested atomic jumps.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .syntax import (
    Assert, Assign, Attribute, BinOp, BoolOp, Call, ClassDef, Compare, Const,
    ExprStmt, FunctionDef, If, Index, ListLit, MapLit, ModuleAst, Name, Pass,
    Raise, Return, SetLit, TupleLit, TypeAnn, UnaryOp, While, WithRaises,
    iter_nodes,
)

# opcodes
(LOAD_CONST, LOAD_FAST, STORE_FAST, LOAD_GLOBAL, STORE_GLOBAL, LOAD_BUILTIN,
 LOAD_ATTR, STORE_ATTR, LOAD_INDEX, STORE_INDEX, BINARY, NEG, NOT, COMPARE,
 BUILD_LIST, BUILD_TUPLE, BUILD_SET, BUILD_MAP, CALL, RETURN, RAISE, JUMP,
 JUMP_IF_FALSE, JUMP_IF_TRUE, CMP_JUMP_IF_FALSE, CMP_JUMP_IF_TRUE, POP, DUP,
 MAKE_FUNCTION, MAKE_CLASS, STORE_CLASSATTR, SETUP_RAISES, POP_RAISES) = range(33)

OPNAMES = [
    "LOAD_CONST", "LOAD_FAST", "STORE_FAST", "LOAD_GLOBAL", "STORE_GLOBAL",
    "LOAD_BUILTIN", "LOAD_ATTR", "STORE_ATTR", "LOAD_INDEX", "STORE_INDEX",
    "BINARY", "NEG", "NOT", "COMPARE", "BUILD_LIST", "BUILD_TUPLE", "BUILD_SET",
    "BUILD_MAP", "CALL", "RETURN", "RAISE", "JUMP", "JUMP_IF_FALSE",
    "JUMP_IF_TRUE", "CMP_JUMP_IF_FALSE", "CMP_JUMP_IF_TRUE", "POP", "DUP",
    "MAKE_FUNCTION", "MAKE_CLASS", "STORE_CLASSATTR", "SETUP_RAISES", "POP_RAISES",
]

CONDITIONAL_JUMPS = frozenset({JUMP_IF_FALSE, JUMP_IF_TRUE, CMP_JUMP_IF_FALSE, CMP_JUMP_IF_TRUE})
TERMINATORS = frozenset({RETURN, RAISE, POP_RAISES})

BUILTIN_TYPES = ("Int", "Float", "Bool", "Str", "Bytes", "NoneType", "List", "Set", "Map", "Tuple")
COLLECTION_TYPES = ("List", "Set", "Map", "Tuple")
EXCEPTION_CLASSES = (
    "Exception", "ValueError", "TypeError", "ZeroDivisionError", "IndexError",
    "KeyError", "AttributeError", "OverflowError", "AssertionError",
    "RuntimeError", "RecursionError", "MemoryError", "NotImplementedError",
    "UnboundLocalError", "NameError",
)
BUILTIN_FUNCTIONS = (
    "len", "abs", "min", "max", "str", "int", "float", "bool", "isinstance",
    "set", "list", "tuple", "approx", "random_int", "id", "sorted",
)
BUILTIN_NAMES = frozenset(BUILTIN_TYPES + EXCEPTION_CLASSES + BUILTIN_FUNCTIONS)
ANNOTATION_NAMES = frozenset(BUILTIN_TYPES + ("Any", "None", "Dict"))


class ResolutionError(Exception):
    """A name, annotation or exception class that does not resolve."""

    def __init__(self, message: str, line: int = 0):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


@dataclass(frozen=True)
class ParamDesc:
    name: str
    position: int
    kind: str  # positional-or-keyword | star | dstar
    has_default: bool = False
    annotation: Optional[TypeAnn] = None


@dataclass
class CodeObject:
    id: int
    name: str  # qualified, e.g. "Foo.bar"
    kind: str  # module-body | class-body | function | method | constructor
    instructions: tuple = ()
    params: tuple[ParamDesc, ...] = ()
    nlocals: int = 0
    local_names: tuple[str, ...] = ()
    owner: Optional[str] = None
    lines: tuple[int, ...] = ()

    @property
    def branchless(self) -> bool:
        return not any(ins[0] in CONDITIONAL_JUMPS for ins in self.instructions)

    def disassemble(self) -> str:
        out = []
        for i, (op, arg) in enumerate(self.instructions):
            out.append(f"{i:4d} {OPNAMES[op]:<18} {'' if arg is None and op != LOAD_CONST else repr(arg)}")
        return "\n".join(out)


@dataclass(frozen=True)
class Predicate:
    id: int
    code_id: int
    offset: int
    form: str  # comparison operator or "truth"


@dataclass(frozen=True)
class Branch:
    id: int
    code_id: int
    predicate_id: int
    polarity: bool  # True -> true-branch
    form: str


@dataclass
class CompiledModule:
    name: str
    ast: ModuleAst
    code_objects: list[CodeObject]
    predicates: list[Predicate]
    branches: list[Branch]
    module_code_id: int = 0
    functions: dict[str, int] = field(default_factory=dict)
    classes: dict[str, dict[str, int]] = field(default_factory=dict)
    class_body_ids: dict[str, int] = field(default_factory=dict)
    global_names: frozenset = frozenset()
    _cfgs: dict = field(default_factory=dict, repr=False)
    _cdgs: dict = field(default_factory=dict, repr=False)

    @property
    def branchless_code_ids(self) -> list[int]:
        return [c.id for c in self.code_objects if c.branchless]

    def branch_pair(self, predicate_id: int) -> tuple[int, int]:
        return 2 * predicate_id, 2 * predicate_id + 1

    def cfg(self, code_id: int):
        from .cfg import build_cfg
        if code_id not in self._cfgs:
            self._cfgs[code_id] = build_cfg(self.code_objects[code_id])
        return self._cfgs[code_id]

    def cdg(self, code_id: int):
        from .cdg import control_dependence
        if code_id not in self._cdgs:
            self._cdgs[code_id] = control_dependence(self.cfg(code_id))
        return self._cdgs[code_id]

    def code_by_name(self, name: str) -> CodeObject:
        for c in self.code_objects:
            if c.name == name:
                return c
        raise KeyError(name)


class _Label:
    __slots__ = ("pos",)

    def __init__(self):
        self.pos = -1


def _assigned_names(body) -> set[str]:
    names = set()
    for stmt in body:
        for node in iter_nodes(stmt):
            if isinstance(node, Assign) and isinstance(node.target, Name):
                names.add(node.target.id)
    return names


class _FunctionCompiler:
    def __init__(self, mc: "_ModuleCompiler", code: CodeObject, local_names: list[str],
                 is_module: bool = False):
        self.mc = mc
        self.code = code
        self.code_id = code.id
        self.ins: list[list] = []
        self.lines: list[int] = []
        self.line = 0
        self.locals = {n: i for i, n in enumerate(local_names)}
        self.is_module = is_module

    # -- emission
    def emit(self, op: int, arg=None) -> None:
        self.ins.append([op, arg])
        self.lines.append(self.line)

    def mark(self, label: _Label) -> None:
        label.pos = len(self.ins)

    def new_predicate(self, form: str) -> int:
        return self.mc.new_predicate(self.code_id, len(self.ins), form)

    def finish(self) -> None:
        out = []
        for op, arg in self.ins:
            if op == JUMP:
                arg = arg.pos
            elif op in (JUMP_IF_FALSE, JUMP_IF_TRUE):
                arg = (arg[0].pos, arg[1])
            elif op in (CMP_JUMP_IF_FALSE, CMP_JUMP_IF_TRUE):
                arg = (arg[0], arg[1].pos, arg[2])
            elif op == SETUP_RAISES:
                arg = (arg[0], arg[1].pos)
            out.append((op, arg))
        self.code.instructions = tuple(out)
        self.code.lines = tuple(self.lines)
        self.code.nlocals = len(self.locals)
        self.code.local_names = tuple(self.locals)

    # -- names
    def load_name(self, name: str, line: int) -> None:
        if name in self.locals and not self.is_module:
            self.emit(LOAD_FAST, self.locals[name])
        elif name in self.mc.global_names:
            self.emit(LOAD_GLOBAL, name)
        elif name in BUILTIN_NAMES:
            self.emit(LOAD_BUILTIN, name)
        else:
            raise ResolutionError(f"undefined name {name!r}", line)

    # -- statements; each returns True when control never falls through
    def block(self, body) -> bool:
        for stmt in body:
            if self.stmt(stmt):
                return True
        return False

    def stmt(self, s) -> bool:
        self.line = getattr(s, "line", self.line) or self.line
        if isinstance(s, Assign):
            self.expr(s.value)
            t = s.target
            if isinstance(t, Name):
                if self.is_module:
                    self.emit(STORE_GLOBAL, t.id)
                else:
                    self.emit(STORE_FAST, self.locals[t.id])
            elif isinstance(t, Attribute):
                self.expr(t.obj)
                self.emit(STORE_ATTR, t.name)
            else:
                self.expr(t.obj)
                self.expr(t.index)
                self.emit(STORE_INDEX)
            return False
        if isinstance(s, ExprStmt):
            self.expr(s.value)
            self.emit(POP)
            return False
        if isinstance(s, Return):
            if s.value is None:
                self.emit(LOAD_CONST, None)
            else:
                self.expr(s.value)
            self.emit(RETURN)
            return True
        if isinstance(s, Raise):
            self.check_exception(s.exc, s.line)
            if s.message is not None:
                self.expr(s.message)
            self.emit(RAISE, (s.exc, s.message is not None))
            return True
        if isinstance(s, Pass):
            return False
        if isinstance(s, Assert):
            ok = _Label()
            self.jump_if(s.test, ok, True)
            self.emit(RAISE, ("AssertionError", False))
            self.mark(ok)
            return False
        if isinstance(s, If):
            else_l, end_l = _Label(), _Label()
            self.jump_if(s.test, else_l, False)
            body_term = self.block(s.body)
            if s.orelse:
                if not body_term:
                    self.emit(JUMP, end_l)
                self.mark(else_l)
                else_term = self.block(s.orelse)
                self.mark(end_l)
                return body_term and else_term
            self.mark(else_l)
            self.mark(end_l)
            return False
        if isinstance(s, While):
            top, end = _Label(), _Label()
            self.mark(top)
            self.jump_if(s.test, end, False)
            if not self.block(s.body):
                self.emit(JUMP, top)
            self.mark(end)
            return False
        if isinstance(s, WithRaises):
            self.check_exception(s.exc, s.line)
            handler = _Label()
            self.emit(SETUP_RAISES, (s.exc, handler))
            if not self.block(s.body):
                self.emit(POP_RAISES, s.exc)
            self.mark(handler)
            return False
        raise TypeError(f"unsupported statement {s!r}")

    def check_exception(self, name: str, line: int) -> None:
        if name not in EXCEPTION_CLASSES:
            raise ResolutionError(f"unknown exception class {name!r}", line)

    # -- conditions
    def jump_if(self, e, target: _Label, when: bool) -> None:
        """Jump to ``target`` iff ``e`` evaluates to ``when``."""
        if isinstance(e, UnaryOp) and e.op == "not":
            self.jump_if(e.operand, target, not when)
        elif isinstance(e, BoolOp):
            if (e.op == "and") != when:
                # and/False or or/True: either operand decides
                self.jump_if(e.left, target, when)
                self.jump_if(e.right, target, when)
            else:
                skip = _Label()
                self.jump_if(e.left, skip, not when)
                self.jump_if(e.right, target, when)
                self.mark(skip)
        elif isinstance(e, Compare):
            self.expr(e.left)
            self.expr(e.right)
            pid = self.new_predicate(e.op)
            self.emit(CMP_JUMP_IF_TRUE if when else CMP_JUMP_IF_FALSE, (e.op, target, pid))
        else:
            self.expr(e)
            pid = self.new_predicate("truth")
            self.emit(JUMP_IF_TRUE if when else JUMP_IF_FALSE, (target, pid))

    # -- expressions
    def expr(self, e) -> None:
        if isinstance(e, Const):
            self.emit(LOAD_CONST, e.value)
        elif isinstance(e, Name):
            self.load_name(e.id, e.line or self.line)
        elif isinstance(e, BinOp):
            self.expr(e.left)
            self.expr(e.right)
            self.emit(BINARY, e.op)
        elif isinstance(e, UnaryOp):
            self.expr(e.operand)
            self.emit(NEG if e.op == "-" else NOT)
        elif isinstance(e, Compare):
            self.expr(e.left)
            self.expr(e.right)
            self.emit(COMPARE, e.op)
        elif isinstance(e, BoolOp):
            end = _Label()
            self.expr(e.left)
            self.emit(DUP)
            pid = self.new_predicate("truth")
            self.emit(JUMP_IF_FALSE if e.op == "and" else JUMP_IF_TRUE, (end, pid))
            self.emit(POP)
            self.expr(e.right)
            self.mark(end)
        elif isinstance(e, Call):
            self.expr(e.func)
            spec = []
            for a in e.args:
                self.expr(a.value)
                spec.append(("k", a.name) if a.kind == "kw" else a.kind[0])
            self.emit(CALL, tuple(spec))
        elif isinstance(e, Attribute):
            self.expr(e.obj)
            self.emit(LOAD_ATTR, e.name)
        elif isinstance(e, Index):
            self.expr(e.obj)
            self.expr(e.index)
            self.emit(LOAD_INDEX)
        elif isinstance(e, (ListLit, TupleLit, SetLit)):
            for x in e.elts:
                self.expr(x)
            op = {ListLit: BUILD_LIST, TupleLit: BUILD_TUPLE, SetLit: BUILD_SET}[type(e)]
            self.emit(op, len(e.elts))
        elif isinstance(e, MapLit):
            for k, v in e.items:
                self.expr(k)
                self.expr(v)
            self.emit(BUILD_MAP, len(e.items))
        else:
            raise TypeError(f"unsupported expression {e!r}")


class _ModuleCompiler:
    def __init__(self, ast: ModuleAst, extern_globals: frozenset):
        self.ast = ast
        self.code_objects: list[CodeObject] = []
        self.predicates: list[Predicate] = []
        self.class_names = {c.name for c in ast.classes}
        names = set(extern_globals)
        for item in ast.items:
            names.add(item.target.id if isinstance(item, Assign) else item.name)
        self.global_names = frozenset(names)
        self.extern = extern_globals

    def new_code(self, name: str, kind: str, owner: Optional[str] = None) -> CodeObject:
        code = CodeObject(len(self.code_objects), name, kind, owner=owner)
        self.code_objects.append(code)
        return code

    def new_predicate(self, code_id: int, offset: int, form: str) -> int:
        pid = len(self.predicates)
        self.predicates.append(Predicate(pid, code_id, offset, form))
        return pid

    def check_annotation(self, ann: Optional[TypeAnn], line: int) -> None:
        if ann is None:
            return
        if ann.name not in ANNOTATION_NAMES and ann.name not in self.class_names:
            raise ResolutionError(f"unknown type {ann.name!r} in annotation", line)
        for a in ann.args:
            self.check_annotation(a, line)

    def compile(self) -> CompiledModule:
        seen = set()
        for item in self.ast.items:
            name = item.target.id if isinstance(item, Assign) else item.name
            if name in seen:
                raise ResolutionError(f"duplicate top-level name {name!r}", item.line)
            seen.add(name)
        mod = self.new_code("<module>", "module-body")
        fc = _FunctionCompiler(self, mod, [], is_module=True)
        functions: dict[str, int] = {}
        classes: dict[str, dict[str, int]] = {}
        class_bodies: dict[str, int] = {}
        for item in self.ast.items:
            fc.line = item.line
            if isinstance(item, Assign):
                fc.stmt(item)
            elif isinstance(item, FunctionDef):
                code_id = self.function(item, item.name, "function", None)
                fc.line = item.line
                for p in item.params:
                    if p.default is not None:
                        fc.expr(p.default)
                fc.emit(MAKE_FUNCTION, (code_id, sum(p.default is not None for p in item.params)))
                fc.emit(STORE_GLOBAL, item.name)
                functions[item.name] = code_id
            elif isinstance(item, ClassDef):
                body_code = self.new_code(item.name, "class-body", owner=item.name)
                cc = _FunctionCompiler(self, body_code, [], is_module=True)
                cc.line = item.line
                methods: dict[str, int] = {}
                for meth in item.methods:
                    if meth.name in methods:
                        raise ResolutionError(f"duplicate method {meth.name!r}", meth.line)
                    if not meth.params or meth.params[0].kind != "normal":
                        raise ResolutionError(f"method {meth.name!r} needs a self parameter", meth.line)
                    kind = "constructor" if meth.name == "__init__" else "method"
                    code_id = self.function(meth, f"{item.name}.{meth.name}", kind, item.name)
                    cc.line = meth.line
                    for p in meth.params:
                        if p.default is not None:
                            cc.expr(p.default)
                    cc.emit(MAKE_FUNCTION, (code_id, sum(p.default is not None for p in meth.params)))
                    cc.emit(STORE_CLASSATTR, meth.name)
                    methods[meth.name] = code_id
                cc.emit(LOAD_CONST, None)
                cc.emit(RETURN)
                cc.finish()
                fc.line = item.line
                fc.emit(MAKE_CLASS, body_code.id)
                fc.emit(STORE_GLOBAL, item.name)
                classes[item.name] = methods
                class_bodies[item.name] = body_code.id
        fc.emit(LOAD_CONST, None)
        fc.emit(RETURN)
        fc.finish()
        branches = []
        for p in self.predicates:
            branches.append(Branch(2 * p.id, p.code_id, p.id, True, p.form))
            branches.append(Branch(2 * p.id + 1, p.code_id, p.id, False, p.form))
        return CompiledModule(
            self.ast.name, self.ast, self.code_objects, self.predicates, branches,
            mod.id, functions, classes, class_bodies, self.global_names,
        )

    def function(self, f: FunctionDef, qualname: str, kind: str, owner: Optional[str]) -> int:
        code = self.new_code(qualname, kind, owner)
        params = []
        seen_default = False
        for i, p in enumerate(f.params):
            self.check_annotation(p.annotation, f.line)
            if p.kind == "normal":
                if p.default is None and seen_default:
                    raise ResolutionError("non-default parameter follows default parameter", f.line)
                seen_default = seen_default or p.default is not None
            kind_name = {"normal": "positional-or-keyword", "star": "star", "dstar": "dstar"}[p.kind]
            params.append(ParamDesc(p.name, i, kind_name, p.default is not None, p.annotation))
        kinds = [p.kind for p in f.params]
        if kinds.count("star") > 1 or kinds.count("dstar") > 1 or \
                ("dstar" in kinds and kinds.index("dstar") != len(kinds) - 1) or \
                ("star" in kinds and any(k == "normal" for k in kinds[kinds.index("star"):])):
            raise ResolutionError(f"invalid parameter order in {qualname!r}", f.line)
        self.check_annotation(f.returns, f.line)
        code.params = tuple(params)
        local_names = [p.name for p in f.params]
        for n in sorted(_assigned_names(f.body)):
            if n not in local_names:
                local_names.append(n)
        fc = _FunctionCompiler(self, code, local_names)
        fc.line = f.line
        if not fc.block(f.body):
            fc.emit(LOAD_CONST, None)
            fc.emit(RETURN)
        fc.finish()
        return code.id


def compile_module(ast: ModuleAst, extern_globals: frozenset = frozenset()) -> CompiledModule:
    """Compile a parsed module into code objects, predicates and branches.

    ``extern_globals`` names globals supplied by another module at run time
    (used when compiling emitted test files against their module under test).
    """
    return _ModuleCompiler(ast, frozenset(extern_globals)).compile()
