import json

import numpy as np
import pytest

from core.errors import UnknownScenarioError
from core.matkernel import kron, unitarity_deviation
from core.verdicts import Metric, Mode, ScenarioName, Verdict
from models.scenario import PRINTED_DISTANCES
from models.state import DensityMatrix
from services.channels import dilation_to_kraus, environment_channel, is_unital
from services.codec import load_state, load_unitary
from services.divisibility import probe_step
from services.scenarios import build_scenario, export_scenario, run_scenario, scenario_dilation
from services.states import partial_trace

R2 = 1 / np.sqrt(2)
H = R2 * np.array([[1, 1], [1, -1]], dtype=np.complex128)
I2 = np.eye(2, dtype=np.complex128)
CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
    dtype=np.complex128,
)

FIELDS = ("d_sys_in", "d_sys_out", "d_env_in", "d_env_out", "d_full_in", "d_full_out")

# Printed W-scenario output states, as {(row bits, column bits): value}
PRINTED_RHO_SE_1 = {
    (r, c): 0.333 for r in ("001", "010", "100") for c in ("001", "010", "100")
}
PRINTED_RHO_SE_2 = {
    ("001", "001"): 0.166, ("001", "010"): 0.333, ("001", "110"): 0.117, ("001", "111"): 0.117,
    ("010", "001"): 0.333, ("010", "010"): 0.666, ("010", "110"): 0.235, ("010", "111"): 0.235,
    ("110", "001"): 0.117, ("110", "010"): 0.235, ("110", "110"): 0.083, ("110", "111"): 0.083,
    ("111", "001"): 0.117, ("111", "010"): 0.235, ("111", "110"): 0.083, ("111", "111"): 0.083,
}
PRINTED_RHO_S_1 = {
    ("00", "00"): 0.333, ("01", "01"): 0.333, ("01", "10"): 0.333, ("10", "01"): 0.333, ("10", "10"): 0.333,
}
PRINTED_RHO_S_2 = {
    ("00", "00"): 0.166, ("00", "11"): 0.117, ("01", "01"): 0.666, ("01", "11"): 0.235,
    ("11", "00"): 0.117, ("11", "01"): 0.235, ("11", "11"): 0.166,
}
PRINTED_RHO_E_1 = {("0", "0"): 0.666, ("1", "1"): 0.333}
PRINTED_RHO_E_2 = {("0", "0"): 0.749, ("0", "1"): 0.083, ("1", "0"): 0.083, ("1", "1"): 0.249}


# ---------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------
def ket(bits: str) -> np.ndarray:
    v = np.zeros(2 ** len(bits), dtype=np.complex128)
    v[int(bits, 2)] = 1.0
    return v


def printed_matrix(entries: dict) -> np.ndarray:
    n = len(next(iter(entries))[0])
    mat = np.zeros((2**n, 2**n))
    for (row, col), value in entries.items():
        mat[int(row, 2), int(col, 2)] = value
    return mat


def w_outputs():
    s = build_scenario("w")
    d = scenario_dilation(s)
    rho1 = s.u @ s.s1.mat @ s.u.conj().T
    rho2 = s.u @ s.s2.mat @ s.u.conj().T
    return s, d, rho1, rho2


# ---------------------------------------------------------------------
# TESTS: builders
# ---------------------------------------------------------------------
def test_bell_unitary_is_cnot_after_hadamard():
    s = build_scenario("bell")
    np.testing.assert_allclose(s.u, CNOT @ kron(H, I2), atol=1e-15)
    assert unitarity_deviation(s.u) <= 1e-15


def test_ghz_unitary_is_the_gate_circuit():
    s = build_scenario("ghz")
    circuit = kron(I2, CNOT) @ kron(CNOT, I2) @ kron(kron(H, I2), I2)
    np.testing.assert_allclose(s.u, circuit, atol=1e-15)
    np.testing.assert_allclose(s.u @ ket("000"), R2 * (ket("000") + ket("111")), atol=1e-15)


def test_w_unitary_creates_w_state_from_100():
    s = build_scenario("w")
    w = (ket("001") + ket("010") + ket("100")) / np.sqrt(3)
    np.testing.assert_allclose(s.u @ ket("100"), w, atol=1e-15)
    assert unitarity_deviation(s.u) <= 1e-9


def test_paper_mode_uses_printed_decimals_without_renormalizing():
    for name in ScenarioName:
        s = build_scenario(name, Mode.PAPER)
        magnitudes = set(np.round(np.abs(s.u[np.abs(s.u) > 0]), 12))
        assert magnitudes <= {1.0, 0.707, 0.577, 0.408}
        assert 1e-6 < unitarity_deviation(s.u) <= 2e-3
    bell = build_scenario("bell", "paper")
    assert np.trace(bell.s1.mat).real == pytest.approx(2 * 0.707**2)


def test_splits_and_inputs():
    bell = build_scenario("bell")
    assert bell.split_spec == "1:1"
    np.testing.assert_allclose(bell.s2.mat, np.full((4, 4), 0.25))
    ghz = build_scenario("ghz")
    assert ghz.split_spec == "2:1"
    np.testing.assert_array_equal(ghz.ket2.amps, ket("011"))


def test_unknown_scenario_name():
    with pytest.raises(UnknownScenarioError):
        build_scenario("cluster")


# ---------------------------------------------------------------------
# TESTS: W reconstruction against the printed states
# ---------------------------------------------------------------------
def test_w_outputs_reproduce_printed_joint_states():
    _, _, rho1, rho2 = w_outputs()
    np.testing.assert_allclose(rho1.real, printed_matrix(PRINTED_RHO_SE_1), atol=1e-3)
    np.testing.assert_allclose(rho2.real, printed_matrix(PRINTED_RHO_SE_2), atol=1.5e-3)
    assert np.abs(rho2.imag).max() < 1e-15


def test_w_outputs_reproduce_printed_reduced_states():
    _, d, rho1, rho2 = w_outputs()
    out1 = DensityMatrix(qubits=3, mat=rho1)
    out2 = DensityMatrix(qubits=3, mat=rho2)
    cases = [
        (out1, "system", PRINTED_RHO_S_1),
        (out2, "system", PRINTED_RHO_S_2),
        (out1, "environment", PRINTED_RHO_E_1),
        (out2, "environment", PRINTED_RHO_E_2),
    ]
    for state, keep, printed in cases:
        reduced = partial_trace(state, d.split, keep).mat
        np.testing.assert_allclose(reduced.real, printed_matrix(printed), atol=1.5e-3)


# ---------------------------------------------------------------------
# TESTS: runner
# ---------------------------------------------------------------------
@pytest.mark.parametrize("name", list(ScenarioName))
def test_paper_mode_matches_printed_tables(name):
    report = run_scenario(build_scenario(name, Mode.PAPER))
    step = report.analysis.step
    for field, printed in zip(FIELDS, PRINTED_DISTANCES[name]):
        assert getattr(step, field) == pytest.approx(printed, abs=2e-3), field
    assert report.printed_deviation <= 2e-3


def test_bell_paper_mode_values():
    step = run_scenario(build_scenario("bell", "paper")).analysis.step
    assert step.d_sys_out == pytest.approx(0.499849, abs=2e-3)
    assert step.d_full_out == pytest.approx(0.706893, abs=2e-3)


@pytest.mark.parametrize("name", list(ScenarioName))
def test_exact_mode_preserves_full_distance(name):
    step = run_scenario(build_scenario(name)).analysis.step
    assert step.d_full_out == pytest.approx(step.d_full_in, abs=1e-10)


def test_ghz_exact_values():
    step = run_scenario(build_scenario("ghz")).analysis.step
    assert step.d_env_out == pytest.approx(0.0, abs=1e-10)
    assert step.d_sys_out == pytest.approx(1.0, abs=1e-10)


def test_w_exact_values():
    step = run_scenario(build_scenario("w")).analysis.step
    assert step.d_sys_in == pytest.approx(0.5, abs=1e-12)
    # exact constants land 8e-4 above the printed 0.693130
    assert step.d_sys_out == pytest.approx(0.693972, abs=5e-5)
    assert step.d_env_out == pytest.approx(np.sqrt(2) / 12, abs=1e-9)
    assert step.d_full_in == pytest.approx(R2, abs=1e-12)


@pytest.mark.parametrize("name", ["bell", "ghz"])
def test_bell_and_ghz_are_divisible_and_unital(name):
    report = run_scenario(build_scenario(name)).analysis
    assert report.step.sys_verdict is Verdict.P_DIVISIBLE_STEP
    assert report.step.env_verdict is Verdict.P_DIVISIBLE_STEP
    assert report.system_unitality.unital
    assert report.environment_unitality.unital


def test_w_system_indivisible_environment_divisible():
    report = run_scenario(build_scenario("w")).analysis
    assert report.step.sys_verdict is Verdict.P_INDIVISIBLE_STEP
    assert report.step.env_verdict is Verdict.P_DIVISIBLE_STEP
    assert not report.system_unitality.unital
    assert not report.environment_unitality.unital


@pytest.mark.parametrize("name", list(ScenarioName))
def test_report_agrees_with_independent_runs(name):
    s = build_scenario(name)
    d = scenario_dilation(s)
    report = run_scenario(s).analysis
    assert report.step == probe_step(d, s.s1, s.s2, tolerance=s.tolerances.verdict)
    assert report.system_unitality == is_unital(dilation_to_kraus(d))
    assert report.environment_unitality == is_unital(environment_channel(d))


def test_hilbert_schmidt_run_skips_printed_comparison():
    report = run_scenario(build_scenario("w"), Metric.HILBERT_SCHMIDT)
    assert report.printed_deviation is None
    assert report.analysis.step.d_sys_in == pytest.approx(0.25)


# ---------------------------------------------------------------------
# TESTS: export
# ---------------------------------------------------------------------
def test_export_round_trips_through_file_formats(tmp_path):
    s = build_scenario("w")
    written = export_scenario(s, tmp_path)
    assert set(written) == {"unitary", "state1", "state2", "ket1", "ket2", "scenario"}

    np.testing.assert_array_equal(load_unitary(written["unitary"]), s.u)
    np.testing.assert_array_equal(load_state(written["state2"]).mat, s.s2.mat)
    # pure-state files load as projectors
    np.testing.assert_allclose(load_state(written["ket2"]).mat, s.s2.mat, atol=1e-15)

    meta = json.loads(written["scenario"].read_text())
    assert meta == {"name": "w", "mode": "exact", "split": "2:1"}
