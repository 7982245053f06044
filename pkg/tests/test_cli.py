import json

import pytest

from app import cli
from app.models.oracle import CheckResult
from app.models.run_config import Command, RunConfig
from app.repositories.document_repository import DocumentRepository


def _run(capsys, *argv):
    status = cli.main(list(argv))
    captured = capsys.readouterr()
    return status, captured.out, captured.err


PAIR = ["--n", "2", "--d", "2", "--omega", "1"]


def test_props_reports_fermionic_weight(capsys):
    status, out, _ = _run(capsys, "props", *PAIR, "--nu", "0", "--beta", "1")
    assert status == cli.EXIT_OK
    payload = json.loads(out)
    assert payload["document"] == "props"
    record = payload["records"][0]
    assert record["p_fermi"] == pytest.approx(0.5246331, abs=1e-7)
    assert record["status"] == "ok"
    assert "5.24633" in out


def test_props_with_temperature_and_si_units(capsys):
    status, out, _ = _run(capsys, "props", *PAIR, "--temp", "2", "--si", "1", "0.5")
    assert status == cli.EXIT_OK
    record = json.loads(out)["records"][0]
    assert record["beta"] == pytest.approx(1.0)
    assert json.loads(out)["metadata"]["k_boltzmann"] == pytest.approx(0.5)


def test_props_on_empty_subspace_is_flagged(capsys):
    status, out, _ = _run(capsys, "props", "--n", "3", "--d", "2", "--omega", "1", "--beta", "1")
    assert status == cli.EXIT_OK
    record = json.loads(out)["records"][0]
    assert record["status"] == "empty_antisymmetric"
    assert record["phi"] is None
    assert record["p_fermi"] == 1.0


def test_stirling_carnot_limit(capsys):
    status, out, _ = _run(
        capsys, "stirling", *PAIR, "--beta-hot", "10", "--beta-cold", "20", "--nu1", "50", "--nu2", "-50"
    )
    assert status == cli.EXIT_OK
    payload = json.loads(out)
    record = payload["records"][0]
    assert record["regime"] == "engine"
    assert record["efficiency"] == pytest.approx(0.5, abs=1e-3)
    assert payload["metadata"]["limits"]["w_limit"] == pytest.approx(0.0549306, abs=1e-7)


def test_scan_csv_is_byte_identical_across_runs_and_workers(capsys):
    argv = ["scan", *PAIR, "--beta", "1", "--quantity", "p_fermi", "--x", "nu:-5:5:11", "--y", "beta:0.5:2:4",
            "--format", "csv"]
    status, first, _ = _run(capsys, *argv)
    assert status == cli.EXIT_OK
    _, second, _ = _run(capsys, *argv)
    _, parallel, _ = _run(capsys, *argv, "--jobs", "4")
    assert first == second == parallel

    lines = first.rstrip("\n").split("\n")
    assert lines[0] == "beta,nu,p_fermi,status"
    assert len(lines) == 1 + 44


def test_scan_round_trips_at_precision(capsys):
    _, out, _ = _run(capsys, "scan", *PAIR, "--quantity", "phi", "--x", "nu:-1:1:3", "--y", "beta:1:2:2",
                     "--format", "csv", "--precision", "8")
    frame = DocumentRepository.parse_csv(out)
    row = frame[(frame["beta"] == 1.0) & (frame["nu"] == 0.0)].iloc[0]
    assert row["phi"] == pytest.approx(1 - 1.0986123, abs=1e-7)


def test_transition_document(capsys):
    status, out, _ = _run(capsys, "transition", *PAIR, "--beta", "1", "--free", "beta")
    assert status == cli.EXIT_OK
    record = json.loads(out)["records"][0]
    assert record["value"] == pytest.approx(record["closed_form"], rel=1e-10)


def test_otto_and_sweep(capsys):
    status, out, _ = _run(
        capsys, "otto", "--n", "3", "--d", "3", "--beta-hot", "0.5", "--beta-cold", "1",
        "--omega1", "1", "--omega2", "0.5", "--format", "csv",
    )
    assert status == cli.EXIT_OK
    assert out.startswith("medium,k_fermi,beta_hot,beta_cold,omega_1,omega_2,work_cycle")

    status, out, _ = _run(capsys, "otto-sweep", "--n-values", "4", "10")
    assert status == cli.EXIT_OK
    assert len(json.loads(out)["records"]) == 6


def test_stirling_map_and_qubits(capsys):
    status, out, _ = _run(
        capsys, "stirling-map", *PAIR, "--beta-hot", "1", "--beta-cold", "2", "--nu1=-2:2:3", "--nu2=-2:2:3"
    )
    assert status == cli.EXIT_OK
    assert len(json.loads(out)["records"]) == 9

    status, out, _ = _run(capsys, "qubits", *PAIR, "--temp", "0.1", "1.0")
    assert status == cli.EXIT_OK
    records = json.loads(out)["records"]
    assert [r["num_qubits"] for r in records][0] == 1


def test_output_file(capsys, tmp_path):
    target = tmp_path / "props.json"
    status, out, _ = _run(capsys, "props", *PAIR, "--beta", "1", "--output", str(target))
    assert status == cli.EXIT_OK
    assert out == ""
    assert json.loads(target.read_text())["document"] == "props"


def test_temp_and_beta_are_exclusive(capsys):
    status, out, err = _run(capsys, "props", *PAIR, "--temp", "1", "--beta", "1")
    assert status == cli.EXIT_USAGE
    assert out == ""
    error = json.loads(err)
    assert error["error"] == "USAGE_ERROR"
    assert error["details"]["flag"] in ("--temp", "--beta")


def test_missing_flag_is_usage_error(capsys):
    status, _, err = _run(capsys, "props", "--d", "2", "--omega", "1", "--beta", "1")
    assert status == cli.EXIT_USAGE
    assert json.loads(err)["details"]["flag"] == "--n"


def test_invalid_value_names_the_flag(capsys):
    status, _, err = _run(capsys, "props", *PAIR, "--beta", "-1")
    assert status == cli.EXIT_USAGE
    error = json.loads(err)
    assert error["error"] == "VALIDATION_ERROR"
    assert error["details"][0]["flag"] == "--beta"


def test_bad_axis_is_usage_error(capsys):
    status, _, err = _run(capsys, "scan", *PAIR, "--beta", "1", "--quantity", "phi", "--x", "nu:1", "--y", "omega:1:2:3")
    assert status == cli.EXIT_USAGE
    assert json.loads(err)["details"]["flag"] == "--x"


def test_domain_error_exit_status(capsys):
    status, _, err = _run(capsys, "qubits", "--n", "3", "--d", "2", "--omega", "1", "--temp", "1")
    assert status == cli.EXIT_DOMAIN
    assert json.loads(err)["error"] == "DOMAIN_ERROR"


def test_failed_bracket_exit_status(capsys):
    status, _, err = _run(capsys, "transition", *PAIR, "--nu", "3", "--beta", "1", "--free", "beta")
    assert status == cli.EXIT_NUMERICAL
    assert json.loads(err)["error"] == "NUMERICAL_ERROR"


def test_verify_failure_sets_exit_status(monkeypatch):
    failing = [CheckResult(name="Always fails", passed=False, detail="forced")]
    monkeypatch.setattr(cli.VerificationService, "run_all_checks", lambda self: failing)
    status, text = cli.run(RunConfig(command=Command.VERIFY, bindings={"seed": 1}))
    assert status == cli.EXIT_VERIFY_FAILED
    payload = json.loads(text)
    assert payload["metadata"]["passed"] is False
    assert payload["records"][0]["check"] == "Always fails"


def test_stirling_map_with_swapped_baths_is_a_domain_error(capsys):
    status, _, err = _run(
        capsys, "stirling-map", *PAIR, "--beta-hot", "2", "--beta-cold", "1", "--nu1=-2:2:3", "--nu2=-2:2:3"
    )
    assert status == cli.EXIT_DOMAIN
    assert json.loads(err)["details"]["type"] == "CycleSpecError"
