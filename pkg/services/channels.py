# services/channels.py
"""
Channel representations and conversions.

A UnitaryDilation is the authoritative description of a step; Kraus sets
are derived from it. The environment output basis for Kraus extraction
is the computational basis. Kraus sets are basis dependent, everything
computed from them downstream is not.
"""

import logging
import math

import numpy as np

from configurations.config import SPECTRAL_CUTOFF, UNITARITY_TOL
from core.errors import DimensionMismatch, NotUnitaryError
from core.matkernel import adjoint, kron, max_abs, unitarity_deviation
from models.channel import KrausChannel, MixedUnitarySpec, UnitalityReport, UnitaryDilation
from models.state import Bipartition, DensityMatrix
from services.states import basis_density, to_split_order

logger = logging.getLogger("divisi.channels")

# Kraus operators with Frobenius norm below this are structurally zero
# (e.g. off-diagonal blocks of U = Σ U_i ⊗ Π_i) and are dropped.
_ZERO_OP = 1e-12


# ---------------------------------------------------------------------
# Construction helpers
# ---------------------------------------------------------------------
def make_dilation(
    u,
    split: Bipartition,
    env_init: DensityMatrix | None = None,
    *,
    unitarity_tol: float = UNITARITY_TOL,
) -> UnitaryDilation:
    """Dilation with env_init defaulting to |0…0⟩."""
    if env_init is None:
        env_init = basis_density("0" * len(split.environment_qubits))
    return UnitaryDilation(u=u, split=split, env_init=env_init, unitarity_tol=unitarity_tol)


def repair_polar(u: np.ndarray) -> np.ndarray:
    """
    Nearest unitary U (U†U)^{-1/2}, from the eigendecomposition of U†U.

    Raises:
        NotUnitaryError: U is singular (no polar unitary factor exists)
    """
    gram = adjoint(u) @ u
    w, v = np.linalg.eigh(0.5 * (gram + adjoint(gram)))
    if w[0] <= 1e-12:
        raise NotUnitaryError(unitarity_deviation(u), UNITARITY_TOL)
    inv_sqrt = (v * (1.0 / np.sqrt(w))) @ adjoint(v)
    repaired = u @ inv_sqrt
    logger.info(
        f"[POLAR] before={unitarity_deviation(u):.3e} after={unitarity_deviation(repaired):.3e}"
    )
    return repaired


def _spectral_pairs(rho: DensityMatrix) -> list[tuple[float, np.ndarray]]:
    """(weight, eigenvector) of a state, dropping weights below SPECTRAL_CUTOFF."""
    w, v = np.linalg.eigh(rho.mat)
    return [(float(w[k]), v[:, k]) for k in range(len(w)) if w[k] > SPECTRAL_CUTOFF]


def _drop_zero_ops(ops: list[np.ndarray]) -> list[np.ndarray]:
    kept = [k for k in ops if np.linalg.norm(k) > _ZERO_OP]
    return kept or ops[:1]


# ---------------------------------------------------------------------
# Evolution
# ---------------------------------------------------------------------
def joint_evolve(d: UnitaryDilation, sigma_se: DensityMatrix) -> DensityMatrix:
    """ρ^{SE} = U σ^{SE} U†."""
    if sigma_se.qubits != d.n_qubits:
        raise DimensionMismatch(
            f"state has {sigma_se.qubits} qubits, unitary acts on {d.n_qubits}",
            sigma_se.mat.shape,
            d.u.shape,
        )
    out = d.u @ sigma_se.mat @ adjoint(d.u)
    lenient = sigma_se.lenient or d.unitarity_tol > UNITARITY_TOL
    return DensityMatrix(qubits=sigma_se.qubits, mat=out, lenient=lenient)


def apply_channel(k: KrausChannel, sigma: DensityMatrix) -> DensityMatrix:
    """Σ_i K_i σ K_i†."""
    if sigma.qubits != k.in_qubits:
        raise DimensionMismatch(
            f"channel takes {k.in_qubits} qubits, state has {sigma.qubits}",
            (k.in_qubits,),
            (sigma.qubits,),
        )
    out = apply_kraus(k.ops, sigma.mat)
    lenient = sigma.lenient or k.completeness_tol > 1e-9
    return DensityMatrix(qubits=k.out_qubits, mat=out, lenient=lenient)


def apply_kraus(ops, mat: np.ndarray) -> np.ndarray:
    """Array-level Σ K ρ K†, no validation."""
    return sum(op @ mat @ adjoint(op) for op in ops)


# ---------------------------------------------------------------------
# Kraus extraction
# ---------------------------------------------------------------------
def dilation_to_kraus(d: UnitaryDilation) -> KrausChannel:
    """
    System channel σ ↦ Tr_E[U (σ ⊗ env_init) U†] in Kraus form:

        K_ij = √p_j (𝕀 ⊗ ⟨e_i|) U (𝕀 ⊗ |a_j⟩)

    over the computational environment output basis {|e_i⟩} and the
    spectral decomposition env_init = Σ_j p_j |a_j⟩⟨a_j|.

    Raises:
        CompletenessError: the resulting set is not trace preserving
    """
    split = d.split
    ds, de = split.dim_system, split.dim_environment
    blocks = to_split_order(np.asarray(d.u), split).reshape(ds, de, ds, de)

    ops = []
    for p, a in _spectral_pairs(d.env_init):
        # (s_out, e_out, s_in) after contracting the environment input with |a⟩
        contracted = np.einsum("aibk,k->iab", blocks, a)
        ops.extend(math.sqrt(p) * contracted[i] for i in range(de))

    return KrausChannel(
        in_qubits=len(split.system_qubits),
        out_qubits=len(split.system_qubits),
        ops=_drop_zero_ops(ops),
        completeness_tol=max(1e-9, d.unitarity_tol),
    )


def environment_channel(d: UnitaryDilation, system_init: DensityMatrix | None = None) -> KrausChannel:
    """
    Environment channel τ ↦ Tr_S[U (system_init ⊗ τ) U†], the system input
    held fixed (|0…0⟩ by default). Same construction with the roles swapped.
    """
    if system_init is None:
        system_init = basis_density("0" * len(d.split.system_qubits))
    swapped = UnitaryDilation(
        u=d.u,
        split=d.split.swapped(),
        env_init=system_init,
        unitarity_tol=d.unitarity_tol,
    )
    return dilation_to_kraus(swapped)


def complementary_channel(d: UnitaryDilation) -> KrausChannel:
    """
    Complementary channel σ ↦ Tr_S[U (σ ⊗ env_init) U†]: system input to
    environment output.
    """
    split = d.split
    ds, de = split.dim_system, split.dim_environment
    blocks = to_split_order(np.asarray(d.u), split).reshape(ds, de, ds, de)

    ops = []
    for p, a in _spectral_pairs(d.env_init):
        # (s_out, e_out, s_in)
        contracted = np.einsum("aibk,k->aib", blocks, a)
        ops.extend(math.sqrt(p) * contracted[s] for s in range(ds))

    return KrausChannel(
        in_qubits=len(split.system_qubits),
        out_qubits=len(split.environment_qubits),
        ops=_drop_zero_ops(ops),
        completeness_tol=max(1e-9, d.unitarity_tol),
    )


# ---------------------------------------------------------------------
# Channel properties
# ---------------------------------------------------------------------
def is_unital(k: KrausChannel, tol: float = 1e-9) -> UnitalityReport:
    """ε(𝕀) = 𝕀, i.e. ||Σ K_i K_i† − 𝕀||_max ≤ tol."""
    if not k.is_square:
        raise DimensionMismatch(
            f"unitality needs a square channel, got {k.in_qubits} -> {k.out_qubits} qubits",
            (k.in_qubits,),
            (k.out_qubits,),
        )
    total = sum(op @ adjoint(op) for op in k.ops)
    deviation = max_abs(total - np.eye(2**k.out_qubits))
    return UnitalityReport(unital=deviation <= tol, deviation=deviation, tolerance=tol)


def choi_matrix(k: KrausChannel) -> np.ndarray:
    """
    Σ_{mn} |m⟩⟨n| ⊗ ε(|m⟩⟨n|), input factor first; trace 2^in_qubits.
    """
    d_in, d_out = 2**k.in_qubits, 2**k.out_qubits
    choi = np.zeros((d_in * d_out, d_in * d_out), dtype=np.complex128)
    for m in range(d_in):
        for n in range(d_in):
            unit = np.zeros((d_in, d_in), dtype=np.complex128)
            unit[m, n] = 1.0
            choi += kron(unit, apply_kraus(k.ops, unit))
    return choi


# ---------------------------------------------------------------------
# Mixed-unitary construction
# ---------------------------------------------------------------------
def mixed_unitary_dilation(spec: MixedUnitarySpec) -> UnitaryDilation:
    """
    U = Σ_i U_i ⊗ Π_i with Π_i = |i⟩⟨i| on an environment of
    max(1, ⌈log₂ m⌉) qubits, and env_init = Σ_i p_i |i⟩⟨i|.

    When m is not a power of two the remaining slots hold identity
    unitaries at weight 0.
    """
    m = len(spec.unitaries)
    n_env = max(1, math.ceil(math.log2(m)))
    de = 2**n_env
    dim = spec.dim

    unitaries = list(spec.unitaries) + [np.eye(dim, dtype=np.complex128)] * (de - m)
    weights = list(spec.weights) + [0.0] * (de - m)

    u_global = np.zeros((dim * de, dim * de), dtype=np.complex128)
    for i, u_i in enumerate(unitaries):
        proj = np.zeros((de, de), dtype=np.complex128)
        proj[i, i] = 1.0
        u_global += kron(u_i, proj)

    split = Bipartition.prefix(spec.qubits, n_env)
    env_init = DensityMatrix(qubits=n_env, mat=np.diag(weights).astype(np.complex128))
    logger.debug(f"[MIXED_UNITARY] terms={m} env_qubits={n_env} padded={de - m}")
    return UnitaryDilation(u=u_global, split=split, env_init=env_init)
