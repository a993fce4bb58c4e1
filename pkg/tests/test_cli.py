import json
import os

from click.testing import CliRunner

from echosim.cli import main

SMALL = ["--set", "n=30", "--set", "e=120", "--set", "t_max=2000"]


def invoke(args):
    return CliRunner().invoke(main, args, catch_exceptions=False)


def read_bytes(path):
    with open(path, "rb") as fh:
        return fh.read()


# -- run ------------------------------------------------------------------------

def test_run_exports_all_artifacts(tmp_path):
    out = tmp_path / "run"
    result = invoke(["run", *SMALL, "--seed", "7", "--out", str(out)])
    assert result.exit_code == 0, result.output
    for name in ("series.csv", "opinions_final.csv", "events.csv",
                 "edges_final.txt", "run.json", "run.svg", "manifest.json"):
        assert (out / name).exists(), name
    summary = json.loads((out / "run.json").read_text())
    assert summary["status"] in ("converged", "censored")
    assert summary["params"]["seed"] == 7
    assert summary["peaks"] >= 1
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["command"] == "run"
    assert manifest["spec"]["n"] == 30


def test_run_rerun_is_byte_identical(tmp_path):
    outs = [tmp_path / "a", tmp_path / "b"]
    for out in outs:
        result = invoke(["run", *SMALL, "--seed", "7", "--no-svg",
                         "--out", str(out)])
        assert result.exit_code == 0, result.output
    for name in ("series.csv", "opinions_final.csv", "events.csv",
                 "edges_final.txt", "run.json"):
        assert read_bytes(outs[0] / name) == read_bytes(outs[1] / name), name


def test_run_with_initial_edges_keeps_node_names(tmp_path):
    edges = tmp_path / "edges.txt"
    lines = [f"u{i} u{(i + k) % 12}" for i in range(12) for k in (1, 2, 3)]
    edges.write_text("\n".join(lines) + "\n")
    out = tmp_path / "run"
    result = invoke(["run", "--set", "t_max=500", "--seed", "1", "--no-svg",
                     "--initial-edges", str(edges), "--out", str(out)])
    assert result.exit_code == 0, result.output
    ids = (out / "node_ids.csv").read_text().strip().splitlines()
    assert ids[0] == "name,node"
    assert len(ids) == 13


def test_run_rejects_bad_snapshot_interval(tmp_path):
    result = invoke(["run", "--set", "t_max=100", "--out",
                     str(tmp_path / "x"), "--snapshot-every", "0"])
    assert result.exit_code == 2


def test_run_rejects_unknown_parameter(tmp_path):
    result = invoke(["run", "--set", "bogus=1", "--out", str(tmp_path / "x")])
    assert result.exit_code == 2


def test_run_unwritable_out_dir_is_runtime_error(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("not a directory\n")
    result = invoke(["run", *SMALL, "--out", str(blocker / "sub")])
    assert result.exit_code == 1


def test_unknown_preset_is_usage_error(tmp_path):
    result = invoke(["run", "--preset", "nope", "--out", str(tmp_path / "x")])
    assert result.exit_code == 2


# -- epsilon ----------------------------------------------------------------------

def test_epsilon_sweep_csv_and_determinism(tmp_path):
    args = ["epsilon", *SMALL, "--values", "0.4,1.5", "--runs", "2",
            "--seed", "5", "--no-svg"]
    outs = [tmp_path / "a", tmp_path / "b"]
    for out in outs:
        result = invoke(args + ["--out", str(out)])
        assert result.exit_code == 0, result.output
    rows = (outs[0] / "epsilon.csv").read_text().strip().splitlines()
    assert rows[0].startswith("epsilon,runs,excluded,mean_peaks")
    assert len(rows) == 3
    assert read_bytes(outs[0] / "epsilon.csv") == read_bytes(outs[1] / "epsilon.csv")


# -- sweep --------------------------------------------------------------------------

def test_sweep_grid_worker_count_invariance(tmp_path):
    base = ["sweep", *SMALL, "--mu", "0.1,0.5", "--q", "0.5", "--runs", "2",
            "--seed", "0", "--no-svg"]
    serial = tmp_path / "serial"
    parallel = tmp_path / "parallel"
    assert invoke(base + ["--workers", "1", "--out", str(serial)]).exit_code == 0
    assert invoke(base + ["--workers", "3", "--out", str(parallel)]).exit_code == 0
    assert read_bytes(serial / "mu_q.csv") == read_bytes(parallel / "mu_q.csv")
    rows = (serial / "mu_q.csv").read_text().strip().splitlines()
    assert len(rows) == 3  # header + 2x1 grid


# -- scaling ------------------------------------------------------------------------

def test_scaling_csv_and_fit_in_manifest(tmp_path):
    out = tmp_path / "scaling"
    result = invoke(["scaling", *SMALL, "--n-values", "20,40", "--runs", "2",
                     "--seed", "0", "--no-svg", "--out", str(out)])
    assert result.exit_code == 0, result.output
    rows = (out / "scaling.csv").read_text().strip().splitlines()
    assert len(rows) == 3
    manifest = json.loads((out / "manifest.json").read_text())
    fit = manifest["spec"]["fit"]
    assert set(fit) == {"slope", "intercept", "r2"}


# -- strategies -----------------------------------------------------------------------

def test_strategies_outputs_stats_and_pvalues(tmp_path):
    out = tmp_path / "strategies"
    result = invoke(["strategies", *SMALL, "--runs", "2", "--seed", "0",
                     "--no-svg", "--out", str(out)])
    assert result.exit_code == 0, result.output
    rows = (out / "strategies.csv").read_text().strip().splitlines()
    assert len(rows) == 4  # header + three strategies
    pvals = (out / "triad_pvalues.csv").read_text().strip().splitlines()
    assert pvals[0] == "strategy_a,strategy_b,p_value"
    assert len(pvals) == 4  # header + three pairs


# -- validate ------------------------------------------------------------------------

def test_validate_fixture_exports_report(tmp_path):
    out = tmp_path / "validate"
    result = invoke(["validate", "--fixture", "--seed", "0", "--no-svg",
                     "--epoch-budget", "3000", "--out", str(out)])
    assert result.exit_code in (0, 1), result.output
    for name in ("series.csv", "do_hist.csv", "dt_hist.csv", "meta.json",
                 "manifest.json"):
        assert (out / name).exists(), name
    meta = json.loads((out / "meta.json").read_text())
    assert 0.0 < meta["s_emp"] < 1.0
    assert 0.0 < meta["hashtag_coverage"] <= 1.0
    if result.exit_code == 0:
        assert not meta["censored"]


def test_validate_requires_inputs(tmp_path):
    result = invoke(["validate", "--out", str(tmp_path / "x")])
    assert result.exit_code == 2


# -- metrics -------------------------------------------------------------------------

def write_triangle(tmp_path):
    edges = tmp_path / "edges.txt"
    edges.write_text("a b\nb c\nc a\na c\n")
    return edges


def test_metrics_reports_structure(tmp_path):
    edges = write_triangle(tmp_path)
    result = invoke(["metrics", "--edges", str(edges)])
    assert result.exit_code == 0, result.output
    report = json.loads(result.output)
    assert report["n"] == 3
    assert report["e"] == 4
    assert report["closed_triads"] == 1  # only the (a,b,c) ordering closes
    assert report["largest_scc_n"] == 3


def test_metrics_with_labels_adds_segregation(tmp_path):
    edges = write_triangle(tmp_path)
    labels = tmp_path / "labels.txt"
    labels.write_text("a left\nb left\nc right\n")
    out_path = tmp_path / "report.json"
    result = invoke(["metrics", "--edges", str(edges), "--labels", str(labels),
                     "--out", str(out_path)])
    assert result.exit_code == 0, result.output
    report = json.loads(out_path.read_text())
    assert "segregation" in report


def test_metrics_missing_label_is_runtime_error(tmp_path):
    edges = write_triangle(tmp_path)
    labels = tmp_path / "labels.txt"
    labels.write_text("a left\nb right\n")
    result = invoke(["metrics", "--edges", str(edges), "--labels", str(labels)])
    assert result.exit_code == 1
