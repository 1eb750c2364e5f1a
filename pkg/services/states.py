# services/states.py
"""
State constructors and subsystem maps.

Array-level helpers (prefixed `reduce_` / `permute_`) work on raw
numpy arrays and skip validation; the search loops call them directly.
The public operations take and return validated DensityMatrix values.
"""

from typing import Literal

import numpy as np

from core.errors import DimensionMismatch, ValidationFailure
from core.matkernel import adjoint, kron, trace
from core.verdicts import Subsystem
from models.state import Bipartition, DensityMatrix, PureState

Keep = Subsystem | Literal["system", "environment"]


# ---------------------------------------------------------------------
# Register permutations (array level)
# ---------------------------------------------------------------------
def permute_operator(mat: np.ndarray, order: tuple[int, ...]) -> np.ndarray:
    """
    Reorder the qubits of an operator so that new qubit k is old qubit order[k].
    """
    n = len(order)
    if order == tuple(range(n)):
        return mat
    tensor = mat.reshape((2,) * (2 * n))
    axes = list(order) + [n + q for q in order]
    return tensor.transpose(axes).reshape(2**n, 2**n)


def permute_vector(vec: np.ndarray, order: tuple[int, ...]) -> np.ndarray:
    n = len(order)
    if order == tuple(range(n)):
        return vec
    return vec.reshape((2,) * n).transpose(order).reshape(-1)


def inverse_order(order: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(order)
    for k, q in enumerate(order):
        inv[q] = k
    return tuple(inv)


def to_split_order(mat: np.ndarray, split: Bipartition) -> np.ndarray:
    """Register order → (system, environment) order."""
    if split.is_contiguous():
        return mat
    return permute_operator(mat, split.order)


def from_split_order(mat: np.ndarray, split: Bipartition) -> np.ndarray:
    """(system, environment) order → register order."""
    if split.is_contiguous():
        return mat
    return permute_operator(mat, inverse_order(split.order))


def reduce_system(mat: np.ndarray, split: Bipartition) -> np.ndarray:
    ds, de = split.dim_system, split.dim_environment
    blocks = to_split_order(mat, split).reshape(ds, de, ds, de)
    return np.einsum("ajbj->ab", blocks)


def reduce_environment(mat: np.ndarray, split: Bipartition) -> np.ndarray:
    ds, de = split.dim_system, split.dim_environment
    blocks = to_split_order(mat, split).reshape(ds, de, ds, de)
    return np.einsum("jajb->ab", blocks)


def reduce_pure_system(vec: np.ndarray, split: Bipartition) -> np.ndarray:
    """Tr_E |ψ⟩⟨ψ| as M M† with M the (system × environment) amplitude grid."""
    m = permute_vector(vec, split.order).reshape(split.dim_system, split.dim_environment)
    return m @ adjoint(m)


def embed_operator(op_sys: np.ndarray, op_env: np.ndarray, split: Bipartition) -> np.ndarray:
    """op_sys ⊗ op_env placed on the register in the split's qubit order."""
    return from_split_order(kron(op_sys, op_env), split)


def _check_split(rho: DensityMatrix, split: Bipartition) -> None:
    if split.n_qubits != rho.qubits:
        raise DimensionMismatch(
            f"bipartition covers {split.n_qubits} qubits but the state has {rho.qubits}",
            (split.n_qubits,),
            (rho.qubits,),
        )


# ---------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------
def density_from_pure(p: PureState) -> DensityMatrix:
    psi = p.amps.reshape(-1, 1)
    return DensityMatrix(qubits=p.qubits, mat=psi @ adjoint(psi), lenient=p.lenient)


def partial_trace(rho: DensityMatrix, split: Bipartition, keep: Keep) -> DensityMatrix:
    """
    Reduced state on the kept subsystem, its qubits in the split's listed order.
    """
    _check_split(rho, split)
    keep = Subsystem(keep)
    if keep is Subsystem.SYSTEM:
        reduced = reduce_system(rho.mat, split)
        qubits = len(split.system_qubits)
    else:
        reduced = reduce_environment(rho.mat, split)
        qubits = len(split.environment_qubits)
    return DensityMatrix(qubits=qubits, mat=reduced, lenient=rho.lenient)


def maximally_mixed(n: int) -> DensityMatrix:
    if n < 1:
        raise ValidationFailure(f"qubit count must be >= 1, got {n}", invariant="qubit_count")
    dim = 2**n
    return DensityMatrix(qubits=n, mat=np.eye(dim) / dim)


def purity(rho: DensityMatrix) -> float:
    """Tr[ρ²]."""
    return float(trace(rho.mat @ rho.mat).real)


def basis_density(bits: str) -> DensityMatrix:
    return density_from_pure(PureState.basis(bits))


def compose(sys_state: DensityMatrix, env_state: DensityMatrix, split: Bipartition) -> DensityMatrix:
    """σ ⊗ τ on the full register, with σ on the split's system qubits."""
    if sys_state.qubits != len(split.system_qubits) or env_state.qubits != len(split.environment_qubits):
        raise DimensionMismatch(
            f"states on {sys_state.qubits}+{env_state.qubits} qubits do not fit split "
            f"{len(split.system_qubits)}|{len(split.environment_qubits)}",
        )
    return DensityMatrix(
        qubits=split.n_qubits,
        mat=embed_operator(sys_state.mat, env_state.mat, split),
        lenient=sys_state.lenient or env_state.lenient,
    )
