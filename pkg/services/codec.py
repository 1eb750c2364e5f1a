# services/codec.py
"""
JSON file formats and report rendering.

Formats (row-major, every entry a [re, im] pair; bare numbers are
accepted as real entries on input):
- state:    {"qubits": N, "matrix": [[[re, im], ...], ...]}
- pure:     {"qubits": N, "amps": [[re, im], ...]}
- unitary:  {"qubits": N, "matrix": [...]}
- Kraus:    {"in_qubits": n, "out_qubits": m, "ops": [matrix, ...]}

JSON output keeps full double precision; table output rounds to six
decimals.
"""

import json
from pathlib import Path
from typing import Any

import numpy as np

from core.errors import DimensionMismatch, FormatError
from core.matkernel import as_matrix
from models.channel import KrausChannel
from models.report import AnalysisReport, WitnessResult
from models.scenario import PRINTED_DISTANCES, ScenarioReport
from models.state import DensityMatrix, PureState
from services.utils import array_to_pairs, deep_serialize


# -----------------------------
# Raw JSON
# -----------------------------
def read_json(path: Path | str) -> dict:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise FormatError(f"cannot read {path}: {e.strerror or e}")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"{path.name}: malformed JSON at line {e.lineno} column {e.colno}: {e.msg}")
    if not isinstance(data, dict):
        raise FormatError(f"{path.name}: expected a JSON object at top level")
    return data


def dump_json(obj: Any) -> str:
    return json.dumps(deep_serialize(obj), indent=2) + "\n"


def _field(data: dict, key: str, source: str) -> Any:
    if key not in data:
        raise FormatError(f"{source}: missing field '{key}'")
    return data[key]


def _qubit_count(data: dict, key: str, source: str) -> int:
    n = _field(data, key, source)
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise FormatError(f"{source}: '{key}' must be a positive integer, got {n!r}")
    return n


# -----------------------------
# Entries and matrices
# -----------------------------
def _entry(value: Any, source: str) -> complex:
    if isinstance(value, bool):
        raise FormatError(f"{source}: boolean is not a matrix entry")
    if isinstance(value, (int, float)):
        return complex(value, 0.0)
    if (
        isinstance(value, list)
        and len(value) == 2
        and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    ):
        return complex(value[0], value[1])
    raise FormatError(f"{source}: entry {value!r} is neither a number nor a [re, im] pair")


def matrix_from_json(rows: Any, source: str = "matrix") -> np.ndarray:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise FormatError(f"{source}: matrix must be a non-empty list of rows")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise FormatError(f"{source}: rows have different lengths")
    return as_matrix([[_entry(v, source) for v in row] for row in rows])


def vector_from_json(items: Any, source: str = "amps") -> np.ndarray:
    if not isinstance(items, list) or not items:
        raise FormatError(f"{source}: amplitudes must be a non-empty list")
    return np.array([_entry(v, source) for v in items], dtype=np.complex128)


def matrix_to_json(mat: np.ndarray) -> list:
    return array_to_pairs(np.asarray(mat, dtype=np.complex128))


def _check_square(mat: np.ndarray, qubits: int, source: str) -> None:
    dim = 2**qubits
    if mat.shape != (dim, dim):
        raise DimensionMismatch(
            f"{source}: {qubits} qubits need a {dim}x{dim} matrix, got {mat.shape[0]}x{mat.shape[1]}",
            mat.shape,
            (dim, dim),
        )


# -----------------------------
# Unitaries
# -----------------------------
def unitary_to_json(u: np.ndarray) -> dict:
    qubits = int(np.log2(u.shape[0]))
    return {"qubits": qubits, "matrix": matrix_to_json(u)}


def load_unitary(path: Path | str) -> np.ndarray:
    """The matrix only; unitarity is checked where the dilation is built."""
    source = Path(path).name
    data = read_json(path)
    qubits = _qubit_count(data, "qubits", source)
    u = matrix_from_json(_field(data, "matrix", source), source)
    _check_square(u, qubits, source)
    return u


# -----------------------------
# States
# -----------------------------
def state_to_json(rho: DensityMatrix) -> dict:
    return deep_serialize(rho)


def pure_to_json(p: PureState) -> dict:
    return deep_serialize(p)


def state_from_json(data: dict, source: str = "state", *, lenient: bool = False) -> DensityMatrix:
    """Density matrix from either format; a pure state becomes its projector."""
    qubits = _qubit_count(data, "qubits", source)
    if "amps" in data and "matrix" not in data:
        ket = pure_from_json(data, source, lenient=lenient)
        psi = ket.amps.reshape(-1, 1)
        return DensityMatrix(qubits=qubits, mat=psi @ psi.conj().T, lenient=lenient)
    mat = matrix_from_json(_field(data, "matrix", source), source)
    _check_square(mat, qubits, source)
    return DensityMatrix(qubits=qubits, mat=mat, lenient=lenient)


def pure_from_json(data: dict, source: str = "state", *, lenient: bool = False) -> PureState:
    qubits = _qubit_count(data, "qubits", source)
    amps = vector_from_json(_field(data, "amps", source), source)
    return PureState(qubits=qubits, amps=amps, lenient=lenient)


def load_state(path: Path | str, *, lenient: bool = False) -> DensityMatrix:
    return state_from_json(read_json(path), Path(path).name, lenient=lenient)


def load_pure(path: Path | str, *, lenient: bool = False) -> PureState:
    return pure_from_json(read_json(path), Path(path).name, lenient=lenient)


# -----------------------------
# Kraus sets
# -----------------------------
def kraus_to_json(k: KrausChannel) -> dict:
    return {
        "in_qubits": k.in_qubits,
        "out_qubits": k.out_qubits,
        "ops": [matrix_to_json(op) for op in k.ops],
    }


def load_kraus(path: Path | str, *, completeness_tol: float = 1e-9) -> KrausChannel:
    source = Path(path).name
    data = read_json(path)
    in_qubits = _qubit_count(data, "in_qubits", source)
    out_qubits = _qubit_count(data, "out_qubits", source)
    ops = _field(data, "ops", source)
    if not isinstance(ops, list) or not ops:
        raise FormatError(f"{source}: 'ops' must be a non-empty list of matrices")
    return KrausChannel(
        in_qubits=in_qubits,
        out_qubits=out_qubits,
        ops=[matrix_from_json(op, f"{source} ops[{i}]") for i, op in enumerate(ops)],
        completeness_tol=completeness_tol,
    )


# -----------------------------
# Tables
# -----------------------------
def _f(x: float) -> str:
    return f"{x:.6f}"


def _yes_no(flag: bool) -> str:
    return "yes" if flag else "no"


def render_table(report: AnalysisReport) -> str:
    step = report.step
    t2 = report.theorem2
    label = step.metric.label
    lines = [
        f"System input {label}: {_f(step.d_sys_in)}",
        f"System output {label}: {_f(step.d_sys_out)}",
        f"Environment input {label}: {_f(step.d_env_in)}",
        f"Environment output {label}: {_f(step.d_env_out)}",
        f"Full input state {label}: {_f(step.d_full_in)}",
        f"Full output state {label}: {_f(step.d_full_out)}",
        "",
        f"System: {step.sys_verdict.value}",
        f"Environment: {step.env_verdict.value}",
        f"Full: {step.full_verdict.value}",
        "",
        f"System channel unital: {_yes_no(report.system_unitality.unital)} "
        f"(deviation {_f(report.system_unitality.deviation)})",
        f"Environment channel unital: {_yes_no(report.environment_unitality.unital)} "
        f"(deviation {_f(report.environment_unitality.deviation)})",
        "",
        f"gamma: {_f(t2.gamma)} -> {_f(t2.gamma_out)}",
        f"alpha_S: {_f(t2.alpha_s)}  alpha_E: {_f(t2.alpha_e)}",
        f"beta_S: {_f(t2.beta_s)}  beta_E: {_f(t2.beta_e)}",
        f"Eq6 lhs: {_f(t2.eq6_lhs)}  Eq7 lhs: {_f(t2.eq7_lhs)}  Eq8 lhs: {_f(t2.eq8_lhs)}",
        f"alpha_S*alpha_E <= gamma: {_yes_no(t2.product_bound_in)} (slack {_f(t2.product_bound_in_slack)})",
        f"beta_S*beta_E <= gamma: {_yes_no(t2.product_bound_out)} (slack {_f(t2.product_bound_out_slack)})",
        f"T_S*T_E <= T_SE: {_yes_no(t2.ts_te_bound)} (slack {_f(t2.ts_te_slack)})",
        f"t_chain <= T_SE: {_yes_no(t2.chain_bound)} (slack {_f(t2.chain_slack)})",
    ]
    return "\n".join(lines) + "\n"


def render_witness_table(result: WitnessResult) -> str:
    lines = [
        f"Search: {'correlated' if result.correlated else 'product'} inputs, seed {result.seed}",
        f"System input trace distance: {_f(result.d_sys_in)}",
        f"System output trace distance: {_f(result.d_sys_out)}",
        f"Growth: {_f(result.growth)}",
        f"Best restart: {result.restart}",
        f"Evaluations: {result.iterations}",
    ]
    return "\n".join(lines) + "\n"


def render_mapping(data: dict) -> str:
    """Flat key: value lines for small summaries (validate, sweep, export)."""
    lines = []
    for key, value in data.items():
        if isinstance(value, float):
            value = _f(value)
        elif isinstance(value, bool):
            value = _yes_no(value)
        lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


def render_scenario_table(report: ScenarioReport) -> str:
    """
    The analysis table; paper mode adds the printed values alongside
    the maximum deviation from them.
    """
    text = render_table(report.analysis)
    if not report.mode.is_paper() or report.printed_deviation is None:
        return text

    printed = PRINTED_DISTANCES[report.name]
    labels = (
        "System input",
        "System output",
        "Environment input",
        "Environment output",
        "Full input state",
        "Full output state",
    )
    lines = ["", f"Printed values (max deviation {_f(report.printed_deviation)}):"]
    lines += [f"{label} trace distance: {_f(value)}" for label, value in zip(labels, printed)]
    return text + "\n".join(lines) + "\n"
