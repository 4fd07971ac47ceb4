"""CLI surface: exit codes, golden outputs, reproducibility."""

import json

import pytest

from mvcorr.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_alba_reflexivity_example(capsys):
    code, out, _ = run_cli(
        capsys,
        "alba", "--algebra", "paper-P", "--value", "gamma",
        "--formula", "p -> <>p", "--verify", "sizes=1,2",
    )
    assert code == 0
    assert "display: @gamma =< R(x, x)" in out
    assert "PASS" in out


def test_classify_not_inductive_example(capsys):
    code, out, _ = run_cli(
        capsys, "classify", "--formula", "[](p\\/q) <= <>(p/\\q)"
    )
    assert code == 1
    assert "not inductive" in out


def test_classify_sahlqvist_with_witness(capsys):
    code, out, _ = run_cli(
        capsys, "classify", "--formula", "(p -> @0) -> []q <= <>[]q \\/ []p"
    )
    assert code == 0
    assert "sahlqvist" in out
    assert "p:d, q:1" in out


def test_verify_bottom_correspondent(capsys):
    code, out, _ = run_cli(
        capsys,
        "verify", "--algebra", "paper-P", "--value", "1",
        "--formula", "~p \\/ <>p", "--fo", "@0", "--sizes", "1,2",
    )
    assert code == 0
    assert out.startswith("PASS")


def test_verify_counterexample_exit_code(capsys):
    code, out, _ = run_cli(
        capsys,
        "verify", "--algebra", "paper-P", "--value", "1",
        "--formula", "~p \\/ <>p", "--fo", "R(x, x)", "--sizes", "1",
    )
    assert code == 1
    assert "FAIL" in out


def test_algebra_check(capsys):
    code, out, _ = run_cli(capsys, "algebra", "check", "--algebra", "paper-P")
    assert code == 0
    assert "join-irreducibles: 1, alpha, beta" in out
    assert "meet-irreducibles: alpha, beta, gamma" in out


def test_usage_error_exit_2(capsys):
    code, _, err = run_cli(capsys, "alba", "--formula", "p -> ")
    assert code == 2
    assert "error" in err


def test_unknown_constant_exit_2(capsys):
    code, _, err = run_cli(
        capsys, "alba", "--formula", "p -> <>p", "--value", "delta"
    )
    assert code == 2


def test_svb_with_comparison(capsys):
    code, out, _ = run_cli(
        capsys,
        "svb", "--algebra", "paper-P", "--value", "beta",
        "--formula", "p -> []<>p", "--verify", "sizes=1", "--compare-alba",
    )
    assert code == 0
    assert "display: A y1. (R(x, y1) -> R(y1, x))" in out
    assert "agreement with rewriting engine: yes" in out


def test_svb_rejects_non_classical(capsys):
    code, out, _ = run_cli(
        capsys, "svb", "--formula", "[]~p -> [][]~p"
    )
    assert code == 1
    assert "not a classical Sahlqvist formula" in out


def test_eval_with_model_file(tmp_path, capsys):
    model = tmp_path / "model.yaml"
    model.write_text(
        "states: [w]\nrel:\n  - [w, w, gamma]\nval:\n  - [p, w, '1']\n"
    )
    code, out, _ = run_cli(
        capsys,
        "eval", "--algebra", "paper-P", "--model", str(model),
        "--formula", "<>p", "--state", "w", "--value", "gamma",
    )
    assert code == 0
    assert "value(<>p) at w = gamma" in out
    assert "gamma-true: yes" in out


def test_structured_output_reproducible(capsys):
    args = [
        "alba", "--algebra", "paper-P", "--value", "gamma",
        "--formula", "p -> <>p", "--format", "structured", "--seed", "11",
    ]
    code1, out1, _ = run_cli(capsys, *args)
    code2, out2, _ = run_cli(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2
    payload = json.loads(out1)
    assert payload["schema"] == "mvcorr.report/1"
    assert payload["seed"] == 11
    assert payload["algebra"]["fingerprint"]
    assert payload["display"] == "@gamma =< R(x, x)"


def test_alba_trace_flag(capsys):
    code, out, _ = run_cli(
        capsys,
        "alba", "--formula", "p -> <>p", "--value", "alpha", "--trace",
    )
    assert code == 0
    assert "first-approximation" in out
    assert "ackermann-right" in out


def test_alba_failure_exit(capsys):
    code, out, _ = run_cli(
        capsys, "alba", "--formula", "[](p\\/q) <= <>(p/\\q)", "--value", "1"
    )
    assert code == 1
    assert "status: failure" in out


def test_budget_env_override(monkeypatch, capsys):
    monkeypatch.setenv("MVCORR_BUDGET", "10")
    code, _, err = run_cli(
        capsys,
        "verify", "--algebra", "paper-P", "--value", "gamma",
        "--formula", "p -> <>p", "--fo", "R(x, x)", "--sizes", "2",
    )
    assert code == 1
    assert "inconclusive" in err
