"""First-order mutants of a MiniDyn module.

Sites are found by walking the AST; each mutant rebuilds only the path from
the module root to the edited node, matching nodes by identity so that equal
subtrees elsewhere stay untouched.
"""
from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass
from typing import Iterator, Optional

from ..minidyn.compiler import CompiledModule, compile_module
from ..minidyn.syntax import BinOp, BoolOp, Compare, Const, FunctionDef, ModuleAst, Node, Return, TypeAnn

log = logging.getLogger(__name__)

# arithmetic replacement follows the MutPy operator table
AOR = {"+": ("-",), "-": ("+",), "*": ("/",), "/": ("*",), "//": ("/",), "%": ("*",)}
_THETA = ("==", "!=", "<", "<=", ">", ">=")
ROR = {op: tuple(o for o in _THETA if o != op) for op in _THETA}
ROR.update({"in": ("not in",), "not in": ("in",), "is": ("is not",), "is not": ("is",)})
LCR = {"and": ("or",), "or": ("and",)}


@dataclass(frozen=True)
class Mutant:
    id: int
    operator: str
    line: int
    description: str
    ast: ModuleAst
    compiled: CompiledModule


def _children(node) -> Iterator[Node]:
    for f in dataclasses.fields(node):
        yield from _nodes_in(getattr(node, f.name))


def _nodes_in(v) -> Iterator[Node]:
    if isinstance(v, Node):
        yield v
    elif isinstance(v, tuple):
        for x in v:
            yield from _nodes_in(x)


def _sites(node, line: int = 0, in_function: bool = False):
    """Yield ``(node, replacement, operator, description, line)`` for every edit."""
    line = getattr(node, "line", 0) or line
    if isinstance(node, TypeAnn):
        return
    if isinstance(node, BinOp):
        for op in AOR.get(node.op, ()):
            yield node, dataclasses.replace(node, op=op), "AOR", f"{node.op} -> {op}", line
    elif isinstance(node, Compare):
        for op in ROR.get(node.op, ()):
            yield node, dataclasses.replace(node, op=op), "ROR", f"{node.op} -> {op}", line
    elif isinstance(node, BoolOp):
        for op in LCR[node.op]:
            yield node, dataclasses.replace(node, op=op), "LCR", f"{node.op} -> {op}", line
    elif isinstance(node, Const):
        if node.kind == "bool":
            yield node, dataclasses.replace(node, value=not node.value), "BLF", f"{node.value} -> {not node.value}", line
        elif node.kind in ("int", "float"):
            cast = int if node.kind == "int" else float
            seen = {node.value}
            for new in (node.value + 1, node.value - 1, 0):
                new = cast(new)
                if new not in seen:
                    seen.add(new)
                    yield node, dataclasses.replace(node, value=new), "CRP", f"{node.value!r} -> {new!r}", line
    elif isinstance(node, Return) and in_function:
        v = node.value
        if v is not None and not (isinstance(v, Const) and v.kind == "none"):
            yield node, dataclasses.replace(node, value=Const("none", None, line)), "RVR", "return -> return None", line
    inner = in_function or isinstance(node, FunctionDef)
    for child in _children(node):
        yield from _sites(child, line, inner)


def _substitute(node, target, replacement):
    """Copy of ``node`` with the object ``target`` swapped for ``replacement``."""
    if node is target:
        return replacement
    if isinstance(node, tuple):
        new = tuple(_substitute(x, target, replacement) for x in node)
        return node if all(a is b for a, b in zip(new, node)) else new
    if not isinstance(node, Node):
        return node
    changes = {}
    for f in dataclasses.fields(node):
        old = getattr(node, f.name)
        if isinstance(old, (Node, tuple)):
            new = _substitute(old, target, replacement)
            if new is not old:
                changes[f.name] = new
    return dataclasses.replace(node, **changes) if changes else node


def generate_mutants(module: ModuleAst, limit: Optional[int] = None) -> list[Mutant]:
    """One mutant per applicable (operator, site), skipping edits that fail to compile."""
    out: list[Mutant] = []
    for target, repl, op, desc, line in _sites(module):
        ast = _substitute(module, target, repl)
        try:
            compiled = compile_module(ast)
        except Exception as e:  # a mutant may break name resolution
            log.info("skipping uncompilable mutant %s at line %d: %s", desc, line, e)
            continue
        out.append(Mutant(len(out), op, line, desc, ast, compiled))
        if limit is not None and len(out) >= limit:
            break
    return out
