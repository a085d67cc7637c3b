import json
import math

import numpy as np
import pytest

from ctxdim import cli, fixtures, scenarios


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_square_fixture(tmp_path):
    path = tmp_path / "square.json"
    path.write_text(
        json.dumps(scenarios.assignment_to_json(fixtures.square_observables()))
    )
    return str(path)


def test_evaluate_square_fixture(capsys, tmp_path):
    code, out, _ = run_cli(
        capsys, "evaluate", "--scenario", "pm",
        "--observables", write_square_fixture(tmp_path),
    )
    assert code == 0
    data = json.loads(out)
    assert data["command"] == "evaluate"
    assert abs(data["result"]["value"] - 6.0) < 1e-10
    assert data["result"]["contexts_commute"] is True
    assert data["provenance"]["package"] == "ctxdim"


def test_bound_lookup(capsys):
    code, out, _ = run_cli(
        capsys, "bound", "--scenario", "pm", "--kind", "nchv"
    )
    assert code == 0
    assert json.loads(out)["result"]["bound"] == 4.0

    code, out, _ = run_cli(
        capsys, "bound", "--scenario", "pm", "--kind", "bloch"
    )
    assert code == 0
    assert abs(json.loads(out)["result"]["bound"] - 3.0 * math.sqrt(3.0)) < 1e-12


def test_enumerate_five_cycle(capsys):
    code, out, _ = run_cli(
        capsys, "enumerate", "--scenario", "kcbs", "--dim", "2", "--stats"
    )
    assert code == 0
    result = json.loads(out)["result"]
    assert result["bound"]["bound"] == -3.0
    assert result["stats"]["raw_cases"] == 7776


def test_optimize_five_cycle(capsys):
    code, out, _ = run_cli(
        capsys, "optimize", "--scenario", "kcbs", "--dim", "3",
        "--commuting", "--restarts", "8", "--seed", "0",
    )
    assert code == 0
    value = json.loads(out)["result"]["value"]
    assert abs(value - (5.0 - 4.0 * math.sqrt(5.0))) < 1e-4


def test_noise_bound(capsys):
    code, out, _ = run_cli(
        capsys, "noise-bound", "--scenario", "pm", "--model", "prop12",
        "--restarts", "8",
    )
    assert code == 0
    value = json.loads(out)["result"]["value"]
    assert abs(value - 3.0 * math.sqrt(3.0)) < 1e-6


def test_certify_command(capsys):
    code, out, _ = run_cli(
        capsys, "certify", "--scenario", "pm", "--value", "5.36",
        "--sigma", "0.05", "--assume", "commuting,projective",
    )
    assert code == 0
    assert json.loads(out)["result"]["dimension"] == 4


def test_csv_output(capsys):
    code, out, _ = run_cli(
        capsys, "--csv", "bound", "--scenario", "chi_n", "--n", "6",
        "--kind", "dim3",
    )
    assert code == 0
    assert "," in out.splitlines()[0]  # delimited header, not JSON


def test_output_is_deterministic(capsys):
    argv = (
        "optimize", "--scenario", "kcbs", "--dim", "3", "--commuting",
        "--restarts", "4", "--seed", "7",
    )
    _, first, _ = run_cli(capsys, *argv)
    _, second, _ = run_cli(capsys, *argv)
    assert first == second


def test_unsupported_combination_exit_code(capsys):
    code, _, err = run_cli(
        capsys, "certify", "--scenario", "kcbs", "--value", "-3.9",
        "--sigma", "0.05", "--assume", "prop12",
    )
    assert code == 2
    assert json.loads(err)["error"]


def test_bad_input_exit_code(capsys):
    code, _, err = run_cli(
        capsys, "evaluate", "--scenario", "pm",
        "--observables", "/nonexistent/path.json",
    )
    assert code == 1
    assert json.loads(err)["error"]


def test_report_writes_tables_and_figures(capsys, tmp_path):
    out_dir = tmp_path / "report"
    code, out, _ = run_cli(
        capsys, "report", "--out", str(out_dir), "--restarts", "4",
    )
    assert code == 0
    for name in (
        "bounds.csv", "hierarchy.csv", "hierarchy.png", "chain.csv",
        "chain.png",
    ):
        assert (out_dir / name).is_file()
    header = (out_dir / "hierarchy.csv").read_text().splitlines()[0]
    assert header == "n,dim,closed_form,attained"
    files = json.loads(out)["result"]["files"]
    assert len(files) == 5
