from __future__ import annotations

import argparse
import json

import numpy as np
import pytest

from context_kernel.cli import main, parse_heights, parse_kernels
from context_kernel.datasets.graph import GraphFormatError
from context_kernel.datasets.jsonl_format import write_jsonl_dataset
from context_kernel.datasets.synthetic import separable_dataset
from context_kernel.evaluation.nested_cv import FoldError
from context_kernel.evaluation.svm import ConvergenceError
from context_kernel.features.encoding import EncodingError
from context_kernel.kernel.gram import GramError
from context_kernel.loop.contracts import EXIT_CODES, ConfigError, RunConfig
from context_kernel.loop.orchestrator import exit_code_for
from context_kernel.oracle.tree_visit import BudgetExceededError
from context_kernel.utils.jsonl import read_jsonl
from context_kernel.visits.dag import VisitError


def test_parse_heights():
    assert parse_heights("1..4") == [1, 2, 3, 4]
    assert parse_heights("1,3,5") == [1, 3, 5]
    with pytest.raises(argparse.ArgumentTypeError):
        parse_heights("a..b")


def test_parse_kernels():
    assert parse_kernels("odd, TCK") == ["odd", "tck"]
    with pytest.raises(argparse.ArgumentTypeError):
        parse_kernels("odd,nspdk")


def test_exit_code_table():
    assert EXIT_CODES["ok"] == 0
    assert len(set(EXIT_CODES.values())) == len(EXIT_CODES)
    assert exit_code_for(ConfigError("x")) == 2
    assert exit_code_for(VisitError("x")) == 2
    assert exit_code_for(GraphFormatError("x")) == 3
    assert exit_code_for(FileNotFoundError("x")) == 3
    assert exit_code_for(EncodingError("x")) == 4
    assert exit_code_for(GramError("x")) == 5
    assert exit_code_for(BudgetExceededError(10, 1)) == 6
    assert exit_code_for(ConvergenceError(1, 0.5)) == 7
    assert exit_code_for(FoldError("x")) == 7
    assert exit_code_for(KeyError("x")) == 1


def test_run_config_validation():
    with pytest.raises(ConfigError):
        RunConfig(command="gram")
    with pytest.raises(ConfigError):
        RunConfig(command="gram", dataset="x", h=0)
    with pytest.raises(ConfigError):
        RunConfig(command="gram", dataset="x", lam=-1.0)
    with pytest.raises(ConfigError):
        RunConfig(command="bench")
    with pytest.raises(ConfigError):
        RunConfig(command="gram", dataset="x", threads=0)
    assert RunConfig(command="oracle-check").params.h == 3


# ── validate ───────────────────────────────────────────────────


def test_validate_fixture(tu_dir, capsys):
    assert main(["validate", "--dataset", str(tu_dir)]) == 0
    assert "[validate] ok, 3 graphs" in capsys.readouterr().out


def test_validate_jsonl(jsonl_path, capsys):
    assert main(["validate", "--dataset", str(jsonl_path), "--format", "jsonl"]) == 0
    assert "ok, 4 graphs" in capsys.readouterr().out


def test_validate_missing_dataset(tmp_path, capsys):
    assert main(["validate", "--dataset", str(tmp_path / "nope")]) == 3
    assert "ERROR (dataset)" in capsys.readouterr().err


def test_validate_non_ascii_tu_file(tmp_path, capsys):
    data = tmp_path / "DS"
    data.mkdir()
    for suffix, text in (("A", b"1, 2\n"), ("graph_indicator", b"1\n1\n"), ("node_labels", b"1\n\xff\n"),
                         ("graph_labels", b"1\n")):
        (data / f"DS_{suffix}.txt").write_bytes(text)
    assert main(["validate", "--dataset", str(data)]) == 3
    assert "ERROR (dataset)" in capsys.readouterr().err


def test_validate_malformed_jsonl(tmp_path, capsys):
    path = tmp_path / "bad.jsonl"
    path.write_text('{"labels":["A"],"edges":[[0,0]],"class":1}\n', encoding="utf-8")
    assert main(["validate", "--dataset", str(path), "--format", "jsonl"]) == 3
    assert ":1:" in capsys.readouterr().err


def test_bad_height_is_config_error(tu_dir):
    assert main(["gram", "--dataset", str(tu_dir), "--height", "0"]) == 2


def test_unknown_kernel_is_usage_error(tu_dir):
    with pytest.raises(SystemExit) as info:
        main(["gram", "--dataset", str(tu_dir), "--kernel", "nspdk"])
    assert info.value.code == 2


# ── features / gram ────────────────────────────────────────────


def test_features_dump(tu_dir, tmp_path):
    out = tmp_path / "features.jsonl"
    assert main(["features", "--dataset", str(tu_dir), "--kernel", "tck", "--height", "2", "--out", str(out)]) == 0
    records = read_jsonl(out)
    assert [r["graph"] for r in records] == [0, 1, 2]
    assert all(r["space"] == "tck" for r in records)
    config = json.loads((tmp_path / "features.jsonl.config.json").read_text(encoding="utf-8"))
    assert config["h"] == 2
    assert config["command"] == "features"


def test_gram_csv_is_symmetric(tu_dir, tmp_path, capsys):
    out = tmp_path / "K.csv"
    code = main(["gram", "--dataset", str(tu_dir), "--kernel", "tck", "--height", "3", "--lambda", "0.8", "--out", str(out)])
    assert code == 0
    values = np.loadtxt(out, delimiter=",")
    assert values.shape == (3, 3)
    assert np.array_equal(values, values.T)
    assert "min eigen ratio" in capsys.readouterr().out
    meta = json.loads((tmp_path / "K.csv.meta.json").read_text(encoding="utf-8"))
    assert meta["kernel_tag"]["lambda"] == 0.8


def test_gram_threads_identical(jsonl_path, tmp_path):
    outs = []
    for threads in ("1", "2"):
        out = tmp_path / f"K{threads}.csv"
        args = ["gram", "--dataset", str(jsonl_path), "--format", "jsonl", "--kernel", "tck+odd",
                "--threads", threads, "--out", str(out)]
        assert main(args) == 0
        outs.append(out.read_text(encoding="utf-8"))
    assert outs[0] == outs[1]


def test_gram_normalized_implicit(jsonl_path, tmp_path):
    out = tmp_path / "K.csv"
    args = ["gram", "--dataset", str(jsonl_path), "--format", "jsonl", "--engine", "implicit",
            "--normalize", "--out", str(out)]
    assert main(args) == 0
    assert np.allclose(np.diag(np.loadtxt(out, delimiter=",")), 1.0)


def test_gram_implicit_rejects_odd(tu_dir, tmp_path, capsys):
    args = ["gram", "--dataset", str(tu_dir), "--kernel", "odd", "--engine", "implicit",
            "--out", str(tmp_path / "K.csv")]
    assert main(args) == 5
    assert "ERROR (kernel)" in capsys.readouterr().err


# ── cv ─────────────────────────────────────────────────────────


def test_cv_small_run(tmp_path, capsys):
    data = tmp_path / "sep.jsonl"
    write_jsonl_dataset(separable_dataset(np.random.default_rng(0), 20), data)
    grid = tmp_path / "grid.json"
    grid.write_text(json.dumps({"heights": [1], "lambdas": [1.0], "cs": [1.0]}), encoding="utf-8")
    out = tmp_path / "cv.json"
    args = ["cv", "--dataset", str(data), "--format", "jsonl", "--kernel", "odd", "--grid", str(grid),
            "--repeats", "1", "--outer-folds", "2", "--inner-folds", "2", "--normalize", "--out", str(out)]
    assert main(args) == 0
    report = json.loads(out.read_text(encoding="utf-8"))
    assert report["kernel"] == "odd"
    assert len(report["folds"]) == 2
    assert report["normalized"] is True
    assert "[cv] sep odd:" in capsys.readouterr().out


def test_cv_fold_error(tu_dir, tmp_path):
    args = ["cv", "--dataset", str(tu_dir), "--repeats", "1", "--out", str(tmp_path / "cv.json")]
    assert main(args) == 7


def test_cv_bad_grid_file(tu_dir, tmp_path):
    args = ["cv", "--dataset", str(tu_dir), "--grid", str(tmp_path / "missing.json")]
    assert main(args) == 2


# ── oracle-check / bench / visit / summarize ───────────────────


def test_oracle_check(tmp_path, capsys):
    out = tmp_path / "oracle.json"
    args = ["oracle-check", "--graphs", "6", "--max-nodes", "6", "--h", "2", "--lambda", "0.5", "--out", str(out)]
    assert main(args) == 0
    report = json.loads(out.read_text(encoding="utf-8"))
    by_name = {c["name"]: c for c in report["comparisons"]}
    assert by_name["tck: explicit vs oracle"]["disagreements"] == 0
    assert by_name["odd: explicit vs oracle"]["pairs"] == 6
    assert "[oracle] 6 random pairs" in capsys.readouterr().out


def test_oracle_check_budget(capsys):
    assert main(["oracle-check", "--graphs", "10", "--max-nodes", "8", "--budget", "1"]) == 6
    assert "ERROR (oracle-budget)" in capsys.readouterr().err


def test_bench_synthetic(tmp_path, capsys):
    out = tmp_path / "bench.csv"
    args = ["bench", "--synthetic", "6", "--kernels", "odd,tck", "--heights", "1..2", "--out", str(out)]
    assert main(args) == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "kernel,h,lambda,extract_seconds,fill_seconds,total_seconds"
    assert [line.split(",")[:2] for line in lines[1:]] == [["odd", "1"], ["tck", "1"], ["odd", "2"], ["tck", "2"]]
    assert "TCK/ODD total time ratio" in capsys.readouterr().out


def test_bench_needs_input():
    assert main(["bench", "--heights", "1"]) == 2


def test_visit(tu_dir, capsys):
    assert main(["visit", "--dataset", str(tu_dir), "--graph", "0", "--root", "0", "--height", "2"]) == 0
    out = capsys.readouterr().out
    assert "root=0 height=2 diam=2" in out
    assert "order: 2 1 0" in out


@pytest.mark.parametrize("extra", [["--root", "7"], ["--graph", "9"]])
def test_visit_out_of_range(tu_dir, extra):
    assert main(["visit", "--dataset", str(tu_dir), *extra]) == 2


def test_summarize(tmp_path):
    data = tmp_path / "sep.jsonl"
    write_jsonl_dataset(separable_dataset(np.random.default_rng(1), 12), data)
    grid = tmp_path / "grid.json"
    grid.write_text(json.dumps({"heights": [1], "cs": [1.0]}), encoding="utf-8")
    reports = []
    for kernel in ("wl", "odd"):
        report = tmp_path / f"cv_{kernel}.json"
        args = ["cv", "--dataset", str(data), "--format", "jsonl", "--kernel", kernel, "--grid", str(grid),
                "--repeats", "1", "--outer-folds", "2", "--inner-folds", "2", "--out", str(report)]
        assert main(args) == 0
        reports.append(str(report))
    table = tmp_path / "table.csv"
    assert main(["summarize", "--reports", *reports, "--out", str(table)]) == 0
    rows = table.read_text(encoding="utf-8").splitlines()
    assert rows[0] == "kernel,sep"
    assert [r.split(",")[0] for r in rows[1:]] == ["wl", "odd"]
