"""``generate`` and ``experiment``: single runs and batch comparisons with CSV output."""
from __future__ import annotations

import csv
import io
import logging
import os
import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Optional, Sequence

from ..cluster import build_test_cluster
from ..engines import ALGORITHMS, StoppingCondition, run_algorithm
from ..minidyn.compiler import ResolutionError, compile_module
from ..minidyn.parser import MiniDynSyntaxError, parse_module
from ..oracle import generate_oracle
from ..testmodel import render
from .stats import mann_whitney_p, median, vargha_delaney_a12

log = logging.getLogger(__name__)

DISPLAY = {"random": "Random", "ws": "WholeSuite", "mosa": "MOSA", "dynamosa": "DynaMOSA", "mio": "MIO"}
REPORT_FIELDS = [
    "module", "config", "algorithm", "type_hints", "seed", "budget_s", "coverage",
    "code_objects", "branches", "tests", "executions", "virtual_s", "mutants", "mutation_score",
]


class CompileFailure(Exception):
    pass


def config_name(algorithm: str, type_hints: bool) -> str:
    return f"{DISPLAY[algorithm]}-{'TypeHints' if type_hints else 'NoTypes'}"


@dataclass
class RunConfig:
    module: str
    algorithm: str = "dynamosa"
    type_hints: bool = True
    seed: int = 0
    budget_s: float = 30.0
    out: str = "out"
    assertions: bool = False
    # name used for reports and the output path; defaults to the file stem
    name: Optional[str] = None

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; choose from {sorted(ALGORITHMS)}")
        if self.budget_s <= 0:
            raise ValueError("budget must be positive")
        if self.name is None:
            self.name = Path(self.module).stem

    @property
    def config(self) -> str:
        return config_name(self.algorithm, self.type_hints)

    @property
    def run_dir(self) -> Path:
        return Path(self.out) / self.name / self.config / str(self.seed)


@dataclass
class RunReport:
    row: dict
    timeseries: list
    tests_source: str
    kill_matrix: Optional[str] = None
    wall_clock_s: float = 0.0
    files: list = field(default_factory=list)


def load_module(path: str, name: str):
    try:
        source = Path(path).read_text()
        ast = parse_module(source, name)
        return ast, compile_module(ast)
    except (OSError, MiniDynSyntaxError, ResolutionError) as e:
        raise CompileFailure(f"{path}: {e}") from e


def _csv(rows: list[list]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def cmd_generate(cfg: RunConfig, write: bool = True) -> RunReport:
    """Search for tests, optionally add assertions, and write tests plus reports."""
    started = time.perf_counter()
    ast, module = load_module(cfg.module, cfg.name.replace("/", "."))
    cluster = build_test_cluster(module, cfg.type_hints)
    res = run_algorithm(cfg.algorithm, module, cluster, seed=cfg.seed, stop=StoppingCondition(cfg.budget_s))
    oracle = generate_oracle(res.tests + res.failing, ast, module, regression=cfg.assertions,
                             mutate=cfg.assertions)
    score = oracle.score if cfg.assertions else None
    row = {
        "module": cfg.name, "config": cfg.config, "algorithm": cfg.algorithm,
        "type_hints": int(cfg.type_hints), "seed": cfg.seed, "budget_s": cfg.budget_s,
        "coverage": repr(res.coverage), "code_objects": len(module.branchless_code_ids),
        "branches": len(module.branches), "tests": len(oracle.cases), "executions": res.executions,
        "virtual_s": repr(res.elapsed_s), "mutants": len(oracle.mutants) if cfg.assertions else "",
        "mutation_score": "" if score is None else repr(score),
    }
    report = RunReport(row, res.timeseries, render(oracle.cases),
                       oracle.matrix.to_csv() if cfg.assertions else None)
    report.wall_clock_s = time.perf_counter() - started
    if write:
        d = cfg.run_dir
        d.mkdir(parents=True, exist_ok=True)
        files = {
            "tests.mdyn": report.tests_source,
            "report.csv": _csv([REPORT_FIELDS, [row[k] for k in REPORT_FIELDS]]),
            "timeseries.csv": _csv([["second", "coverage"]] + [[s, repr(c)] for s, c in res.timeseries]),
            # wall-clock time varies between replays, so it lives apart from the report
            "timing.csv": _csv([["wall_clock_s"], [f"{report.wall_clock_s:.3f}"]]),
        }
        if report.kill_matrix is not None:
            files["kill_matrix.csv"] = report.kill_matrix
        for fname, text in files.items():
            (d / fname).write_text(text)
            report.files.append(d / fname)
    return report


# --- experiments -----------------------------------------------------------


def discover(corpus: str) -> list[tuple[str, str]]:
    """(name, path) for every ``.mdyn`` file below ``corpus``, name relative without suffix."""
    root = Path(corpus)
    return [(p.relative_to(root).with_suffix("").as_posix(), str(p)) for p in sorted(root.rglob("*.mdyn"))]


def _job(cfg: RunConfig) -> tuple[Optional[dict], Optional[str]]:
    try:
        return cmd_generate(cfg).row, None
    except Exception as e:  # one failing run must not end the batch
        log.warning("run %s/%s/%d failed: %s", cfg.name, cfg.config, cfg.seed, e)
        return None, f"{type(e).__name__}: {e}"


def workers() -> int:
    try:
        return max(1, int(os.environ.get("SBGEN_WORKERS", "1")))
    except ValueError:
        return 1


def cmd_experiment(corpus: str, algorithms: Sequence[str], seeds: int, budget_s: float, out: str,
                   hints: Sequence[bool] = (True,), assertions: bool = False,
                   modules: Optional[Sequence[str]] = None) -> dict:
    """Run every (module, config, seed) and write summary, comparison and exclusion tables."""
    for a in algorithms:
        if a not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {a!r}")
    found = discover(corpus)
    if modules is not None:
        found = [(n, p) for n, p in found if n in set(modules)]
    if not found:
        raise ValueError(f"no .mdyn modules under {corpus}")
    exclusions = []
    jobs = []
    for name, path in found:
        try:
            load_module(path, name)
        except CompileFailure as e:
            exclusions.append([name, "", "", "compile", str(e)])
            continue
        for h in hints:
            for a in algorithms:
                for s in range(seeds):
                    jobs.append(RunConfig(path, a, h, s, budget_s, out, assertions, name))
    n = workers()
    if n > 1:
        with ProcessPoolExecutor(n) as pool:
            results = list(pool.map(_job, jobs))
    else:
        results = [_job(j) for j in jobs]
    for cfg, (row, err) in zip(jobs, results):
        if row is None:
            exclusions.append([cfg.name, cfg.config, cfg.seed, "run", err])
    Path(out).mkdir(parents=True, exist_ok=True)
    (Path(out) / "exclusions.csv").write_text(_csv([["module", "config", "seed", "stage", "reason"]] + exclusions))
    return summarize(out)


def read_reports(out: str) -> list[dict]:
    rows = []
    for p in sorted(Path(out).rglob("report.csv")):
        with open(p, newline="") as f:
            rows += list(csv.DictReader(f))
    return rows


def summarize(out: str) -> dict:
    """Aggregate the per-run reports under ``out`` into summary and comparison tables.

    Only the raw CSVs are read, so the tables can be rebuilt at any time.
    Modules listed in ``exclusions.csv`` are left out of the comparisons.
    """
    excluded = set()
    ex = Path(out) / "exclusions.csv"
    if ex.exists():
        with open(ex, newline="") as f:
            excluded = {r["module"] for r in csv.DictReader(f)}
    cov: dict = defaultdict(lambda: defaultdict(list))
    for r in read_reports(out):
        cov[r["module"]][r["config"]].append(float(r["coverage"]))
    configs = sorted({c for m in cov.values() for c in m})
    summary = [["module", "config", "runs", "mean_coverage", "median_coverage"]]
    pooled: dict = defaultdict(list)
    for mod in sorted(cov):
        for c in configs:
            xs = cov[mod].get(c, [])
            if xs:
                summary.append([mod, c, len(xs), repr(sum(xs) / len(xs)), repr(median(xs))])
            if mod not in excluded:
                pooled[c] += xs
    for c in configs:
        if pooled[c]:
            xs = pooled[c]
            summary.append(["ALL", c, len(xs), repr(sum(xs) / len(xs)), repr(median(xs))])
    comparisons = [["module", "config_a", "config_b", "a12", "p_value", "runs_a", "runs_b"]]
    scopes = [(m, cov[m]) for m in sorted(cov) if m not in excluded] + [("ALL", pooled)]
    for mod, per in scopes:
        for a, b in combinations(configs, 2):
            xs, ys = per.get(a, []), per.get(b, [])
            if xs and ys:
                comparisons.append([mod, a, b, repr(vargha_delaney_a12(xs, ys)),
                                    repr(mann_whitney_p(xs, ys)), len(xs), len(ys)])
    (Path(out) / "summary.csv").write_text(_csv(summary))
    (Path(out) / "comparisons.csv").write_text(_csv(comparisons))
    return {"summary": summary, "comparisons": comparisons, "coverage": cov}
