import sys
from pathlib import Path

import pytest

from sbgen.minidyn.compiler import compile_module
from sbgen.minidyn.parser import parse_module

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"

sys.setrecursionlimit(max(sys.getrecursionlimit(), 10_000))


def corpus_modules() -> list[str]:
    return sorted(p.relative_to(CORPUS).with_suffix("").as_posix() for p in CORPUS.rglob("*.mdyn"))


def load(name: str):
    """(ast, compiled) for a corpus module such as ``"flutes/ceil_div"``."""
    ast = parse_module((CORPUS / f"{name}.mdyn").read_text(), name.replace("/", "."))
    return ast, compile_module(ast)


def build(source: str, name: str = "m"):
    ast = parse_module(source, name)
    return ast, compile_module(ast)


@pytest.fixture
def corpus_dir() -> Path:
    return CORPUS
