"""End-to-end tests for the experiment runner, reports and the command line."""
import csv
from pathlib import Path

import pytest

import main as cli
from src.analysis import (
    MANIFEST_NAME,
    RunManifest,
    format_value,
    mean_std_err,
    read_manifest_checksums,
    rms_and_max,
    sha256_file,
    subsample,
)
from src.core.config import parse_config
from src.core.errors import ParameterError
from src.experiments import EXPERIMENT_REGISTRY, run


def _run(name: str, out: Path, **params):
    overrides = {k: str(v) for k, v in params.items()}
    overrides["experiment"] = name
    overrides["output_dir"] = str(out)
    return run(parse_config("", overrides))


def _header(path: Path) -> list[str]:
    with open(path, encoding="utf-8") as f:
        return next(csv.reader(f))


def _rows(path: Path) -> list[dict]:
    with open(path, encoding="utf-8") as f:
        return list(csv.DictReader(f))


def _manifest(path: Path) -> dict[str, str]:
    out = {}
    for line in path.read_text(encoding="utf-8").splitlines():
        if "=" in line and not line.startswith("sha256 "):
            key, value = line.split("=", 1)
            out[key] = value
    return out


# ==============================================
# METRICS AND REPORT HELPERS
# ==============================================

def test_float_formatting_round_trips():
    for value in (0.1, 1.0 / 3.0, -2.5e-300, 123456789.123456789):
        assert float(format_value(value)) == value
    assert format_value(True) == "true"
    assert format_value(None) == ""


def test_metrics_helpers():
    assert rms_and_max([3.0, -4.0]) == pytest.approx(((12.5) ** 0.5, 4.0))
    assert rms_and_max([]) == (0.0, 0.0)
    assert mean_std_err([2.0]) == (2.0, 0.0)
    mean, se = mean_std_err([1.0, 2.0, 3.0, 4.0])
    assert mean == 2.5 and se == pytest.approx((5.0 / 3.0 / 4.0) ** 0.5)
    assert len(subsample(list(range(25_000)))) <= 10_000


def test_manifest_lines_order():
    manifest = RunManifest(experiment="pde-residual", seed=3, config={"b": 1.5, "a": "rcd"},
                           summary={"rms": 0.25}, checksums={"x.csv": "ab"})
    lines = manifest.lines()
    assert lines[:3] == ["tool_version=0.1.0", "experiment=pde-residual", "seed=3"]
    assert lines[3:5] == ["config.a=rcd", "config.b=1.5"]
    assert lines[-1] == "sha256 ab x.csv"


def test_every_experiment_is_registered():
    assert sorted(EXPERIMENT_REGISTRY) == sorted([
        "expand-eval", "remainder-audit", "fit-function", "fit-pde",
        "pde-residual", "heat-bench", "rcd-bench", "portfolio-bench",
    ])


# ==============================================
# EXPERIMENTS
# ==============================================

def test_remainder_audit_report(tmp_path):
    manifest = _run("remainder-audit", tmp_path, c=1.0, alpha=1.0, fprime_c=1.0, x_min=1.0, x_max=3.0, n=41)
    report = tmp_path / "remainder_audit.csv"
    assert _header(report) == ["x", "closed_form", "quadrature", "abs_diff"]
    rows = _rows(report)
    assert len(rows) == 41
    assert all(row["quadrature"] for row in rows)
    assert manifest.summary["max_abs_diff"] > 0.0
    assert manifest.summary["derivation_max_abs_diff"] <= 1e-12
    assert manifest.summary["is_tied"] is False
    assert "summary.max_abs_diff" in _manifest(tmp_path / MANIFEST_NAME)


def test_expand_eval_reruns_are_byte_identical(tmp_path):
    first = _run("expand-eval", tmp_path / "a", a1=0.5, a2=-1.0, a3=2.0, n=21)
    second = _run("expand-eval", tmp_path / "b", a1=0.5, a2=-1.0, a3=2.0, n=21)
    a = (tmp_path / "a" / "expand_eval.csv").read_bytes()
    b = (tmp_path / "b" / "expand_eval.csv").read_bytes()
    assert a == b
    assert first.checksums == second.checksums
    assert _header(tmp_path / "a" / "expand_eval.csv") == ["x", "value", "d_dx", "d2_dx2"]
    assert first.summary["embedding_max_abs_diff"] == 0.0


@pytest.mark.parametrize("name,params", [
    ("expand-eval", {"n": 21}),
    ("remainder-audit", {"n": 11}),
    ("fit-function", {"target": "sin", "n": 50}),
    ("fit-pde", {"equation": "rcd", "n_x": 9, "n_t": 5}),
    ("pde-residual", {"n_x": 11, "n_t": 6}),
    ("heat-bench", {"n_x": 21, "n_t": 21}),
    ("rcd-bench", {"n_x": 21, "n_t": 11}),
    ("portfolio-bench", {"n_paths": 200, "n_steps": 20}),
])
def test_every_experiment_reruns_byte_identical(tmp_path, name, params):
    first = _run(name, tmp_path / "a", **params)
    second = _run(name, tmp_path / "b", **params)
    assert first.checksums == second.checksums
    assert first.checksums
    for artifact in first.checksums:
        assert (tmp_path / "a" / artifact).read_bytes() == (tmp_path / "b" / artifact).read_bytes()
    assert read_manifest_checksums(tmp_path / "a" / MANIFEST_NAME) == read_manifest_checksums(
        tmp_path / "b" / MANIFEST_NAME
    )


def test_sin_fit_on_200_points_is_deterministic(tmp_path):
    reports = []
    for i in range(3):
        out = tmp_path / str(i)
        _run("fit-function", out, target="sin", x_min=0.1, x_max=2.0, n=200)
        reports.append((out / "fit_report.csv").read_bytes())
        values = _manifest(out / MANIFEST_NAME)
        assert float(values["summary.rmse"]) >= 0.0
        assert values["config.n"] == "200"
    assert reports[0] == reports[1] == reports[2]


def test_expand_eval_domain_error_names_node(tmp_path):
    from src.core.errors import LogDomainError

    with pytest.raises(LogDomainError) as info:
        _run("expand-eval", tmp_path, a3=-1.0, x_min=0.0, x_max=2.0, n=5)
    assert info.value.context["experiment"] == "expand-eval"
    assert not (tmp_path / MANIFEST_NAME).exists()


def test_manifest_checksums_match_files(tmp_path):
    _run("pde-residual", tmp_path, n_x=11, n_t=6)
    checksums = read_manifest_checksums(tmp_path / MANIFEST_NAME)
    assert set(checksums) == {"residual_report.csv"}
    assert checksums["residual_report.csv"] == sha256_file(tmp_path / "residual_report.csv")


def test_fit_function_tied_target(tmp_path):
    manifest = _run("fit-function", tmp_path, target="tied", x_min=0.0, x_max=5.0, n=50)
    assert manifest.summary["max_param_err"] <= 1e-6
    assert _header(tmp_path / "fit_report.csv") == [
        "a1", "a2", "a3", "rmse", "max_abs_err", "n_samples", "converged",
    ]


def test_fit_function_product_target(tmp_path):
    manifest = _run("fit-function", tmp_path, target="xy", x_min=0.5, x_max=2.0, n=6, n_y=4)
    assert manifest.summary["rmse"] > 0.0


@pytest.mark.parametrize("equation", ["rcd", "heat"])
def test_fit_pde_reports_residual_and_exact_error(tmp_path, equation):
    manifest = _run("fit-pde", tmp_path, equation=equation, n_x=9, n_t=5)
    summary = manifest.summary
    assert summary["rms_residual"] <= summary["max_abs_residual"]
    assert summary["rms_error_vs_exact"] >= 0.0
    assert summary["bc_rmse"] is not None
    assert _header(tmp_path / "residual_report.csv") == ["x", "t", "residual"]


def test_fit_pde_without_boundary_data(tmp_path):
    manifest = _run("fit-pde", tmp_path, equation="heat", boundary="none", fix_a2=0.0, n_x=9, n_t=5)
    assert manifest.summary["a3"] == 0.0
    assert manifest.summary["rms_residual"] == 0.0


def test_heat_bench_convergence_table(tmp_path):
    manifest = _run("heat-bench", tmp_path, n_x=21, n_t=21)
    rows = _rows(tmp_path / "convergence.csv")
    assert [int(r["n_x"]) for r in rows] == [21, 41, 81]
    assert rows[-1]["max_abs_diff"] == ""
    assert 1.5 <= manifest.summary["observed_order"] <= 2.5
    assert (tmp_path / "fit_report.csv").exists()


@pytest.mark.parametrize("terminal", ["power", "linear", "call"])
def test_rcd_bench_terminals(tmp_path, terminal):
    manifest = _run("rcd-bench", tmp_path, terminal=terminal, n_x=21, n_t=11)
    assert manifest.summary["terminal"] == terminal
    assert manifest.summary["ansatz_rms_error_vs_reference"] >= 0.0
    if terminal == "linear":
        assert manifest.summary["cn_max_error_vs_exact"] <= 1e-10


def test_portfolio_bench_report(tmp_path):
    manifest = _run("portfolio-bench", tmp_path, n_paths=400, n_steps=50)
    rows = _rows(tmp_path / "mc_report.csv")
    assert [r["policy"] for r in rows] == ["merton", "riskless", "ansatz"]
    assert all(int(r["n_paths"]) == 400 for r in rows)
    summary = manifest.summary
    assert summary["merton_log_closed_form"] == pytest.approx(0.08125)
    assert summary["merton_fraction"] == pytest.approx(1.25)
    assert summary["merton_growth_rate"] == pytest.approx(0.08125)
    assert summary["ansatz_concavity_violation"] is False
    assert "ansatz_minus_merton" in summary


def test_portfolio_bench_same_seed_same_report(tmp_path):
    _run("portfolio-bench", tmp_path / "a", n_paths=200, n_steps=20)
    _run("portfolio-bench", tmp_path / "b", n_paths=200, n_steps=20)
    assert (tmp_path / "a" / "mc_report.csv").read_bytes() == (tmp_path / "b" / "mc_report.csv").read_bytes()


def test_portfolio_bench_rejects_degenerate_ansatz(tmp_path):
    from src.core.errors import DegenerateAnsatzError

    with pytest.raises(DegenerateAnsatzError):
        _run("portfolio-bench", tmp_path, n_paths=10, n_steps=5, ansatz_a2=0.0)


def test_invalid_grid_is_parameter_error(tmp_path):
    with pytest.raises(ParameterError):
        _run("pde-residual", tmp_path, n_x=1)


# ==============================================
# COMMAND LINE
# ==============================================

def test_cli_success_prints_manifest_path(tmp_path, capsys, no_settings):
    status = cli.main(["pde-residual", "--out", str(tmp_path), "--settings", no_settings,
                       "--n-x", "11", "--n_t", "6", "--equation", "heat"])
    assert status == 0
    assert capsys.readouterr().out.strip() == str(tmp_path / MANIFEST_NAME)
    assert _manifest(tmp_path / MANIFEST_NAME)["config.equation"] == "heat"


def test_cli_config_file_and_flag_override(tmp_path, capsys, no_settings):
    config = tmp_path / "run.cfg"
    config.write_text("# residual run\nexperiment=pde-residual\nn_x=11\nn_t=6\na3=0.25\n", encoding="utf-8")
    out = tmp_path / "out"
    status = cli.main(["pde-residual", "--config", str(config), "--out", str(out),
                       "--settings", no_settings, "--a3", "0.75", "--seed", "5"])
    assert status == 0
    values = _manifest(out / MANIFEST_NAME)
    assert values["config.a3"] == "0.75"
    assert values["seed"] == "5"


@pytest.mark.parametrize("argv,code", [
    (["heat-bench", "--k", "abc"], "E_TYPE_MISMATCH"),
    (["heat-bench", "--sigma", "0.2"], "E_UNKNOWN_KEY"),
    (["heat-bench", "--k", "1", "--k", "2"], "E_DUPLICATE_KEY"),
    (["heat-bench", "--seed", "x"], "E_TYPE_MISMATCH"),
    (["heat-bench", "--k", "-1"], "E_PARAMETER"),
])
def test_cli_errors_exit_2_with_error_line(tmp_path, capsys, no_settings, argv, code):
    status = cli.main(argv + ["--out", str(tmp_path), "--settings", no_settings])
    assert status == 2
    assert f"ERROR {code}:" in capsys.readouterr().err


@pytest.mark.parametrize("argv,code", [
    (["no-such-experiment"], "E_CONFIG_PARSE"),
    (["heat-bench", "--out"], "E_CONFIG_PARSE"),
    (["heat-bench", "--config", "missing.cfg"], "E_CONFIG"),
])
def test_cli_usage_errors_keep_error_line(tmp_path, capsys, no_settings, argv, code):
    argv = [str(tmp_path / a) if a == "missing.cfg" else a for a in argv]
    status = cli.main(["--settings", no_settings] + argv)
    assert status == 2
    err = capsys.readouterr().err
    assert f"ERROR {code}:" in err
    assert "usage:" not in err


def test_cli_unexpected_failure_exits_1(tmp_path, capsys, monkeypatch, no_settings):
    import src.experiments

    def boom(config):
        raise RuntimeError("disk on fire")

    monkeypatch.setattr(src.experiments, "run", boom)
    status = cli.main(["pde-residual", "--out", str(tmp_path), "--settings", no_settings])
    assert status == 1
    assert "ERROR E_INTERNAL: disk on fire" in capsys.readouterr().err
