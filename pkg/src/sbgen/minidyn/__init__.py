"""The MiniDyn language: parser, compiler, control-flow and control-dependence graphs."""
from .compiler import CompiledModule, ResolutionError, compile_module
from .parser import MiniDynSyntaxError, parse_module

__all__ = ["CompiledModule", "MiniDynSyntaxError", "ResolutionError", "compile_module", "parse_module"]
