"""A small type-hint ablation with the experiment harness.

Runs DynaMOSA with and without type hints on two modules whose functions
take user classes, then prints the tables the harness writes.  The full
acceptance campaign uses 10 seeds and 30 s; this one finishes in seconds.

    python3 demos/hint_ablation.py [out-dir]
"""
import sys
import tempfile
from pathlib import Path

from sbgen.cli import cmd_experiment

CORPUS = Path(__file__).resolve().parent.parent / "corpus"
out = sys.argv[1] if len(sys.argv) > 1 else tempfile.mkdtemp(prefix="sbgen-ablation-")

tables = cmd_experiment(str(CORPUS), ["dynamosa"], seeds=3, budget_s=10.0, out=out, hints=(True, False),
                        modules=["shapes/geometry", "bank/account"])

for row in tables["summary"]:
    print(",".join(str(x) for x in row))
print()
for module, a, b, a12, p, *_ in tables["comparisons"][1:]:
    print(f"{module:16} {a} vs {b}: A12 {float(a12):.3f}, p {float(p):.3f}")
print(f"\nper-run reports under {out}")
