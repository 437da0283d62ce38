"""Command-line entry point.

Options may also come from a ``key = value`` file given with ``--config``;
flags on the command line take precedence over the file.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from .commands import (
    DISPLAY, REPORT_FIELDS, CompileFailure, RunConfig, RunReport, cmd_experiment, cmd_generate,
    config_name, discover, read_reports, summarize,
)
from .stats import DegenerateSample, EmptySample, mann_whitney_p, median, pearson_r, vargha_delaney_a12

__all__ = [
    "main", "RunConfig", "RunReport", "cmd_generate", "cmd_experiment", "summarize", "read_reports",
    "discover", "config_name", "CompileFailure", "DISPLAY", "REPORT_FIELDS", "vargha_delaney_a12",
    "mann_whitney_p", "pearson_r", "median", "EmptySample", "DegenerateSample", "read_config",
]

_BOOL = {"1": True, "true": True, "yes": True, "on": True, "0": False, "false": False, "no": False, "off": False}


def read_config(path: str) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment, dashes in keys become underscores."""
    out = {}
    for n, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{n}: expected 'key = value'")
        k, v = (s.strip() for s in line.split("=", 1))
        out[k.replace("-", "_")] = v
    return out


def _apply_config(parser: argparse.ArgumentParser, values: dict) -> None:
    known = {a.dest: a for a in parser._actions}
    defaults = {}
    for k, v in values.items():
        if k not in known:
            raise ValueError(f"unknown config key {k!r}")
        action = known[k]
        if isinstance(action, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
            flag = _BOOL.get(v.lower())
            if flag is None:
                raise ValueError(f"config key {k!r} needs a boolean, got {v!r}")
            defaults[k] = flag
        elif action.type is not None:
            defaults[k] = action.type(v)
        else:
            defaults[k] = v
    parser.set_defaults(**defaults)


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sbgen", description="Search-based unit test generation for MiniDyn.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="generate tests for one module")
    g.add_argument("--config", help="key = value file with defaults for these options")
    g.add_argument("--module", help="path to a .mdyn module")
    g.add_argument("--algorithm", default="dynamosa", choices=sorted(DISPLAY))
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--budget-s", dest="budget_s", type=float, default=30.0)
    g.add_argument("--no-type-hints", dest="type_hints", action="store_false")
    g.add_argument("--assertions", action="store_true", help="add regression assertions and a kill matrix")
    g.add_argument("--out", default="out")

    e = sub.add_parser("experiment", help="run a corpus under several configurations")
    e.add_argument("--config", help="key = value file with defaults for these options")
    e.add_argument("--corpus", help="directory searched recursively for .mdyn modules")
    e.add_argument("--algorithms", default=",".join(DISPLAY), help="comma-separated list")
    e.add_argument("--seeds", type=int, default=10)
    e.add_argument("--budget-s", dest="budget_s", type=float, default=30.0)
    e.add_argument("--hints", choices=("on", "off", "both"), default="on")
    e.add_argument("--assertions", action="store_true")
    e.add_argument("--out", default="out")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        sub = parser._subparsers._group_actions[0].choices[args.command]
        try:
            _apply_config(sub, read_config(args.config))
        except (OSError, ValueError) as e:
            print(f"sbgen: {e}", file=sys.stderr)
            return 2
        args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")

    if args.command == "generate":
        if not args.module:
            parser.error("generate needs --module")
        try:
            cfg = RunConfig(args.module, args.algorithm, args.type_hints, args.seed, args.budget_s,
                            args.out, args.assertions)
            report = cmd_generate(cfg)
        except CompileFailure as e:
            print(f"sbgen: cannot compile {e}", file=sys.stderr)
            return 1
        except ValueError as e:
            print(f"sbgen: {e}", file=sys.stderr)
            return 2
        r = report.row
        extra = f", mutation score {r['mutation_score']}" if r["mutation_score"] != "" else ""
        print(f"{r['module']} {r['config']} seed {r['seed']}: coverage {float(r['coverage']):.3f}, "
              f"{r['tests']} tests{extra} -> {cfg.run_dir}")
        return 0

    if not args.corpus:
        parser.error("experiment needs --corpus")
    hints = {"on": (True,), "off": (False,), "both": (True, False)}[args.hints]
    algorithms = [a.strip() for a in args.algorithms.split(",") if a.strip()]
    try:
        res = cmd_experiment(args.corpus, algorithms, args.seeds, args.budget_s, args.out, hints, args.assertions)
    except ValueError as e:
        print(f"sbgen: {e}", file=sys.stderr)
        return 2
    for row in res["summary"][1:]:
        if row[0] == "ALL":
            print(f"{row[1]:<22} runs {row[2]:>4}  mean {float(row[3]):.3f}  median {float(row[4]):.3f}")
    print(f"tables written to {args.out}/summary.csv and {args.out}/comparisons.csv")
    return 0


if __name__ == "__main__":
    sys.exit(main())
