import json
from pathlib import Path

import numpy as np
import pytest
from click.testing import CliRunner

from cli.app import cli
from services.channels import dilation_to_kraus
from services.codec import dump_json, kraus_to_json, unitary_to_json
from services.scenarios import build_scenario, scenario_dilation

runner = CliRunner()


# ------------------------------------------------------------
# Helpers
# ------------------------------------------------------------
def invoke(*args, env=None):
    return runner.invoke(cli, list(args), env=env)


def assert_failure_envelope(result, exit_code: int, error_type: str | None = None) -> dict:
    """
    Enforces the CLI failure contract: exit status, nothing on stdout,
    and a JSON envelope as the last stderr line.
    """
    assert result.exit_code == exit_code, result.stderr
    assert result.stdout == "", "Failures must not write a report"

    last = result.stderr.strip().splitlines()[-1]
    body = json.loads(last)
    assert "error" in body, "Missing 'error' key in failure envelope"
    assert isinstance(body["error"]["type"], str)
    assert isinstance(body["error"]["message"], str)
    if error_type is not None:
        assert body["error"]["type"] == error_type
    return body["error"]


def export(name: str, outdir, mode: str = "exact"):
    result = invoke("export", name, "--outdir", str(outdir), "--mode", mode, "--format", "json")
    assert result.exit_code == 0, result.stderr
    return {key: path for key, path in json.loads(result.stdout)["files"].items()}


def write_unitary(path, u: np.ndarray) -> str:
    path.write_text(dump_json(unitary_to_json(np.asarray(u, dtype=np.complex128))))
    return str(path)


# ------------------------------------------------------------
# Tests: built-in scenarios
# ------------------------------------------------------------
def test_w_paper_table_shows_printed_value():
    result = invoke("scenario", "w", "--mode", "paper")
    assert result.exit_code == 0, result.stderr
    assert "0.693130" in result.stdout
    assert "System: PIndivisibleStep" in result.stdout


def test_bell_exact_json_preserves_full_distance():
    result = invoke("scenario", "bell", "--format", "json")
    assert result.exit_code == 0, result.stderr
    step = json.loads(result.stdout)["analysis"]["step"]
    assert step["d_full_in"] == pytest.approx(0.707107, abs=1e-6)
    assert step["d_full_out"] == pytest.approx(step["d_full_in"], abs=1e-9)


def test_ghz_table_environment_output_is_zero():
    result = invoke("scenario", "ghz")
    assert result.exit_code == 0, result.stderr
    assert "Environment output trace distance: 0.000000" in result.stdout
    assert "System output trace distance: 1.000000" in result.stdout


def test_unknown_scenario_is_usage_error():
    result = invoke("scenario", "cluster")
    assert result.exit_code == 2


def test_verdict_tolerance_from_environment():
    strict = json.loads(invoke("scenario", "w", "--format", "json").stdout)
    relaxed = json.loads(invoke("scenario", "w", "--format", "json", env={"DIVISI_TOL": "0.5"}).stdout)

    assert strict["analysis"]["step"]["sys_verdict"] == "PIndivisibleStep"
    assert relaxed["analysis"]["step"]["sys_verdict"] == "PDivisibleStep"
    assert relaxed["analysis"]["step"]["tolerance"] == 0.5


# ------------------------------------------------------------
# Tests: export and analyze
# ------------------------------------------------------------
@pytest.mark.parametrize("name", ["bell", "ghz", "w"])
def test_exported_files_reproduce_scenario_table(tmp_path, name):
    files = export(name, tmp_path)
    split = json.loads(Path(files["scenario"]).read_text())["split"]

    args = ["--unitary", files["unitary"], "--state1", files["state1"], "--state2", files["state2"], "--split", split]
    table = invoke("analyze", *args)
    assert table.exit_code == 0, table.stderr
    assert table.stdout == invoke("scenario", name).stdout

    as_json = invoke("analyze", *args, "--format", "json")
    builtin = json.loads(invoke("scenario", name, "--format", "json").stdout)
    assert json.loads(as_json.stdout) == builtin["analysis"]


def test_identity_unitary_keeps_every_distance(tmp_path):
    files = export("w", tmp_path)
    unitary = write_unitary(tmp_path / "identity.json", np.eye(8))
    result = invoke(
        "analyze", "--unitary", unitary, "--state1", files["state1"], "--state2", files["state2"],
        "--system", "0,1", "--format", "json",
    )
    assert result.exit_code == 0, result.stderr
    step = json.loads(result.stdout)["step"]
    assert step["d_sys_out"] == step["d_sys_in"]
    assert step["d_env_out"] == step["d_env_in"]
    assert step["d_full_out"] == step["d_full_in"]


def test_malformed_json_is_format_error(tmp_path):
    files = export("bell", tmp_path)
    broken = tmp_path / "broken.json"
    broken.write_text('{"qubits": 2, "matrix": [[1, 0]')
    result = invoke(
        "analyze", "--unitary", str(broken), "--state1", files["state1"], "--state2", files["state2"],
        "--split", "1:1",
    )
    assert_failure_envelope(result, 2, "format_error")


def test_non_unitary_file_is_validation_failure(tmp_path):
    files = export("bell", tmp_path)
    unitary = write_unitary(tmp_path / "lossy.json", np.diag([1.0, 1.0, 1.0, 0.5]))
    args = ["--unitary", unitary, "--state1", files["state1"], "--state2", files["state2"], "--split", "1:1"]

    error = assert_failure_envelope(invoke("analyze", *args), 3)
    assert "unitarity deviation" in error["message"]
    assert error["invariant"] == "unitarity"
    assert error["deviation"] == pytest.approx(0.75)

    # the nearest unitary of diag(1, 1, 1, 0.5) is the identity
    repaired = invoke("analyze", *args, "--repair-polar", "--format", "json")
    assert repaired.exit_code == 0, repaired.stderr
    step = json.loads(repaired.stdout)["step"]
    assert step["d_sys_out"] == pytest.approx(step["d_sys_in"], abs=1e-12)


def test_split_errors(tmp_path):
    files = export("w", tmp_path)
    base = ["analyze", "--unitary", files["unitary"], "--state1", files["state1"], "--state2", files["state2"]]

    assert_failure_envelope(invoke(*base, "--split", "1:1"), 3, "dimension_mismatch")
    assert_failure_envelope(invoke(*base, "--split", "2-1"), 2, "format_error")
    assert_failure_envelope(invoke(*base, "--split", "2:1", "--system", "0,1"), 2, "format_error")
    error = assert_failure_envelope(invoke(*base, "--system", "0,7"), 3, "dimension_mismatch")
    assert "system qubit 7" in error["message"]


def test_out_of_range_flags_are_usage_errors(tmp_path):
    files = export("w", tmp_path)
    witness = invoke("witness", "--unitary", files["unitary"], "--split", "2:1", "--restarts", "0")
    error = assert_failure_envelope(witness, 2, "format_error")
    assert "restarts" in error["message"]

    analyze = invoke(
        "analyze", "--unitary", files["unitary"], "--state1", files["state1"], "--state2", files["state2"],
        "--split", "2:1", "--tol", "-1",
    )
    assert_failure_envelope(analyze, 2, "format_error")
    assert_failure_envelope(invoke("sweep", "--instances", "0"), 2, "format_error")


# ------------------------------------------------------------
# Tests: witness
# ------------------------------------------------------------
def test_witness_on_identity_finds_no_growth(tmp_path):
    unitary = write_unitary(tmp_path / "identity.json", np.eye(8))
    result = invoke("witness", "--unitary", unitary, "--split", "2:1", "--restarts", "2", "--iters", "30")
    assert result.exit_code == 0, result.stderr
    assert json.loads(result.stdout)["growth"] == pytest.approx(0.0, abs=1e-12)


def test_witness_output_is_deterministic(tmp_path):
    files = export("w", tmp_path)
    args = [
        "witness", "--unitary", files["unitary"], "--split", "2:1", "--correlated",
        "--restarts", "2", "--iters", "40", "--seed", "5",
    ]
    first, second = invoke(*args), invoke(*args)
    assert first.exit_code == 0, first.stderr
    assert first.stdout == second.stdout


def test_witness_seeded_with_w_pair(tmp_path):
    files = export("w", tmp_path)
    result = invoke(
        "witness", "--unitary", files["unitary"], "--split", "2:1", "--correlated",
        "--start1", files["ket1"], "--start2", files["ket2"],
        "--restarts", "2", "--iters", "50",
    )
    assert result.exit_code == 0, result.stderr
    data = json.loads(result.stdout)
    assert data["growth"] >= 0.193
    assert data["correlated"] is True


def test_witness_start_files_go_together(tmp_path):
    files = export("w", tmp_path)
    result = invoke("witness", "--unitary", files["unitary"], "--split", "2:1", "--start1", files["ket1"])
    assert_failure_envelope(result, 2, "format_error")


# ------------------------------------------------------------
# Tests: validate
# ------------------------------------------------------------
@pytest.mark.parametrize("name", ["bell", "ghz", "w"])
def test_validate_accepts_exported_files(tmp_path, name):
    files = export(name, tmp_path)
    assert invoke("validate", "--unitary", files["unitary"]).exit_code == 0
    for key in ("state1", "state2", "ket1", "ket2"):
        result = invoke("validate", "--state", files[key], "--format", "json")
        assert result.exit_code == 0, result.stderr
        assert json.loads(result.stdout)["valid"] is True


def test_validate_paper_files_need_lenient(tmp_path):
    files = export("bell", tmp_path, mode="paper")
    assert_failure_envelope(invoke("validate", "--unitary", files["unitary"]), 3, "not_unitary")
    assert invoke("validate", "--unitary", files["unitary"], "--lenient").exit_code == 0
    assert invoke("validate", "--state", files["state1"], "--lenient").exit_code == 0


def test_validate_kraus_file(tmp_path):
    channel = dilation_to_kraus(scenario_dilation(build_scenario("w")))
    path = tmp_path / "kraus.json"
    path.write_text(dump_json(kraus_to_json(channel)))

    result = invoke("validate", "--kraus", str(path), "--format", "json")
    assert result.exit_code == 0, result.stderr
    data = json.loads(result.stdout)
    assert data["kind"] == "kraus"
    assert data["unital"] is False
    assert data["choi_min_eigenvalue"] > -1e-12


def test_validate_takes_one_file(tmp_path):
    files = export("bell", tmp_path)
    result = invoke("validate", "--unitary", files["unitary"], "--state", files["state1"])
    assert_failure_envelope(result, 2, "format_error")


# ------------------------------------------------------------
# Tests: sweep
# ------------------------------------------------------------
def test_sweep_json_summary():
    result = invoke("sweep", "--instances", "10", "--format", "json")
    assert result.exit_code == 0, result.stderr
    data = json.loads(result.stdout)
    assert data["instances"] == 10
    assert 0 <= data["both_indivisible"] <= 10
