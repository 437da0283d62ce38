"""How DynaMOSA widens its target set along the control-dependence graph.

Prints the CDG of ``deep`` from the nested-condition example, then replays a
DynaMOSA run and shows which branch goals were active in each generation.

    python3 demos/control_dependence.py
"""
from pathlib import Path

from sbgen.cluster import build_test_cluster
from sbgen.engines import StoppingCondition, run_algorithm
from sbgen.minidyn import compile_module, parse_module

CORPUS = Path(__file__).resolve().parent.parent / "corpus"

module = compile_module(parse_module((CORPUS / "examples" / "control_dependency.mdyn").read_text(), "cd"))
deep = module.code_by_name("deep")
cdg = module.cdg(deep.id)


def describe(branch_id: int) -> str:
    b = module.branches[branch_id]
    return f"p{b.predicate_id}{'T' if b.polarity else 'F'}"


print("predicates of deep():")
for p in module.predicates:
    if p.code_id == deep.id:
        deps = sorted(cdg.branch_dependencies(p.id))
        where = "root" if cdg.predicate_is_root(p.id) else "under " + ", ".join(describe(d) for d in deps)
        print(f"  p{p.id} ({p.form}) depth {cdg.predicate_depth(p.id)}: {where}")

res = run_algorithm("dynamosa", module, build_test_cluster(module), seed=3, stop=StoppingCondition(20))
# the "sum" branch needs c == a + b; tests that pass one variable as both b and c
# sit on a plateau at distance 1, so short runs often leave it uncovered
print()
shown = None
for gen, (active, covered) in enumerate(res.active_log):
    mine = sorted(describe(g.id) for g in active if g.kind == "branch" and module.branches[g.id].code_id == deep.id)
    if mine != shown:
        print(f"  generation {gen:3d}: active in deep() = {mine or '-'}")
        shown = mine
print(f"final coverage {res.coverage:.3f}")
