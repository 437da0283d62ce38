import csv
import shutil

import pytest

from sbgen.cli import RunConfig, cmd_experiment, cmd_generate, main, read_config, summarize
from sbgen.cli.stats import median

from conftest import CORPUS


def read_csv(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def test_generate_writes_outputs(tmp_path, capsys):
    code = main(["generate", "--module", str(CORPUS / "flutes/ceil_div.mdyn"), "--algorithm", "mio",
                 "--budget-s", "5", "--assertions", "--out", str(tmp_path)])
    assert code == 0
    run_dir = tmp_path / "ceil_div" / "MIO-TypeHints" / "0"
    assert {p.name for p in run_dir.iterdir()} == {
        "tests.mdyn", "report.csv", "timeseries.csv", "timing.csv", "kill_matrix.csv"}
    (row,) = read_csv(run_dir / "report.csv")
    assert float(row["coverage"]) == 1.0
    assert "coverage 1.000" in capsys.readouterr().out
    assert [r["second"] for r in read_csv(run_dir / "timeseries.csv")] == [str(i) for i in range(6)]


def test_generate_is_deterministic(tmp_path):
    for d in ("a", "b"):
        cmd_generate(RunConfig(str(CORPUS / "vectors/vector.mdyn"), "ws", True, 4, 3.0, str(tmp_path / d), True))
    for name in ("tests.mdyn", "report.csv", "timeseries.csv", "kill_matrix.csv"):
        a = (tmp_path / "a" / "vector" / "WholeSuite-TypeHints" / "4" / name).read_bytes()
        b = (tmp_path / "b" / "vector" / "WholeSuite-TypeHints" / "4" / name).read_bytes()
        assert a == b


def test_compile_failure_exits_with_one(tmp_path, capsys):
    bad = tmp_path / "bad.mdyn"
    bad.write_text("def f(:\n")
    assert main(["generate", "--module", str(bad), "--out", str(tmp_path)]) == 1
    assert "cannot compile" in capsys.readouterr().err


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(f"# defaults\nmodule = {CORPUS / 'flutes/ceil_div.mdyn'}\nalgorithm = random\n"
                   f"budget-s = 2\nseed = 9\nout = {tmp_path}\n")
    assert read_config(str(cfg))["budget_s"] == "2"
    assert main(["generate", "--config", str(cfg), "--seed", "3"]) == 0
    assert (tmp_path / "ceil_div" / "Random-TypeHints" / "3" / "report.csv").exists()
    cfg.write_text("colour = blue\n")
    assert main(["generate", "--config", str(cfg)]) == 2


def test_experiment_tables(tmp_path):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    shutil.copy(CORPUS / "flutes/ceil_div.mdyn", corpus / "ceil_div.mdyn")
    (corpus / "broken.mdyn").write_text("def f(:\n")
    out = tmp_path / "out"
    res = cmd_experiment(str(corpus), ["random", "mosa"], 3, 2.0, str(out))
    reports = list(out.rglob("report.csv"))
    assert len(reports) == 6
    exclusions = read_csv(out / "exclusions.csv")
    assert [(r["module"], r["stage"]) for r in exclusions] == [("broken", "compile")]
    comparisons = [r for r in read_csv(out / "comparisons.csv") if r["module"] == "ceil_div"]
    assert len(comparisons) == 1
    # the summary is rebuilt from the raw reports alone
    summary = read_csv(out / "summary.csv")
    raw = [float(r["coverage"]) for p in reports for r in read_csv(p) if r["config"] == "MOSA-TypeHints"]
    row = next(r for r in summary if r["module"] == "ceil_div" and r["config"] == "MOSA-TypeHints")
    assert float(row["median_coverage"]) == median(raw)
    assert summarize(str(out))["summary"] == res["summary"]


def test_bad_arguments():
    with pytest.raises(ValueError):
        RunConfig("x.mdyn", algorithm="nope")
    with pytest.raises(SystemExit):
        main(["generate", "--algorithm", "nope"])
