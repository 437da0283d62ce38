"""Generate tests for a small module and print them.

Run from the repository root:  python3 demos/quickstart.py
"""
from pathlib import Path

from sbgen.cluster import build_test_cluster
from sbgen.engines import StoppingCondition, run_algorithm
from sbgen.minidyn import compile_module, parse_module
from sbgen.oracle import generate_oracle
from sbgen.testmodel import render

CORPUS = Path(__file__).resolve().parent.parent / "corpus"

source = (CORPUS / "examples" / "divide_queue.mdyn").read_text()
print(source)

ast = parse_module(source, "divide_queue")
module = compile_module(ast)
cluster = build_test_cluster(module)

# 10 virtual seconds is plenty for a module of this size
result = run_algorithm("dynamosa", module, cluster, seed=0, stop=StoppingCondition(10))
print(f"coverage {result.coverage:.3f} after {result.executions} executions")

oracle = generate_oracle(result.tests + result.failing, ast, module)
print(f"{len(oracle.mutants)} mutants, score {oracle.score:.3f}\n")
print(render(oracle.cases))
