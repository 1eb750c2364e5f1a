# services/divisibility.py
"""
Distances, one-step P-divisibility probes and the Theorem-2 ledger.

Two distances are first class:
- trace norm, ½ Σ|λ(Δ)|: what the published tables print; probe_step default
- Hilbert–Schmidt surrogate, ½ Tr[Δ†Δ]: what the proofs manipulate;
  theorem2_report always uses it

A step is P-indivisible for a subsystem when its distance grows by more
than the verdict tolerance. Nothing here claims anything about families
of maps over time.
"""

import logging
from typing import Iterable, Optional

import numpy as np

from configurations.config import get_settings
from core.errors import CompletenessError, DimensionMismatch, InvariantViolation
from core.matkernel import hermitian_eigvals
from core.verdicts import Metric, Verdict
from models.channel import KrausChannel, MixedUnitarySpec, UnitaryDilation
from models.report import StepReport, SweepSummary, Theorem2Report
from models.state import Bipartition, DensityMatrix
from services.channels import (
    apply_channel,
    dilation_to_kraus,
    joint_evolve,
    make_dilation,
    mixed_unitary_dilation,
)
from services.sampling import random_ket, random_unitary
from services.states import compose, embed_operator, purity, reduce_environment, reduce_system, to_split_order

logger = logging.getLogger("divisi.divisibility")


# ---------------------------------------------------------------------
# Distances (array level)
# ---------------------------------------------------------------------
def trace_distance_arrays(a: np.ndarray, b: np.ndarray) -> float:
    return float(0.5 * np.sum(np.abs(hermitian_eigvals(a - b))))


def hs_distance_sq_arrays(a: np.ndarray, b: np.ndarray) -> float:
    delta = a - b
    return float(0.5 * np.vdot(delta, delta).real)


def distance_arrays(metric: Metric, a: np.ndarray, b: np.ndarray) -> float:
    if metric is Metric.TRACE_NORM:
        return trace_distance_arrays(a, b)
    return hs_distance_sq_arrays(a, b)


# ---------------------------------------------------------------------
# Distances (validated states)
# ---------------------------------------------------------------------
def trace_distance(r1: DensityMatrix, r2: DensityMatrix) -> float:
    """½ ||r1 − r2||₁."""
    r1.same_space(r2)
    return trace_distance_arrays(r1.mat, r2.mat)


def hs_distance_sq(r1: DensityMatrix, r2: DensityMatrix) -> float:
    """½ Tr[(r1 − r2)†(r1 − r2)]."""
    r1.same_space(r2)
    return hs_distance_sq_arrays(r1.mat, r2.mat)


# ---------------------------------------------------------------------
# One-step probe
# ---------------------------------------------------------------------
def _check_pair(d: UnitaryDilation, s1: DensityMatrix, s2: DensityMatrix) -> None:
    s1.same_space(s2)
    if s1.qubits != d.n_qubits:
        raise DimensionMismatch(
            f"input states have {s1.qubits} qubits, the unitary acts on {d.n_qubits}",
            s1.mat.shape,
            d.u.shape,
        )


def probe_step(
    d: UnitaryDilation,
    s1: DensityMatrix,
    s2: DensityMatrix,
    metric: Metric = Metric.TRACE_NORM,
    tolerance: Optional[float] = None,
) -> StepReport:
    """
    Evolve a joint input pair (correlations allowed) and compare the
    full, system and environment distances before and after.
    """
    _check_pair(d, s1, s2)
    metric = Metric(metric)
    tol = get_settings().tol if tolerance is None else tolerance
    split = d.split

    r1 = joint_evolve(d, s1).mat
    r2 = joint_evolve(d, s2).mat

    d_full_in = distance_arrays(metric, s1.mat, s2.mat)
    d_full_out = distance_arrays(metric, r1, r2)
    d_sys_in = distance_arrays(metric, reduce_system(s1.mat, split), reduce_system(s2.mat, split))
    d_sys_out = distance_arrays(metric, reduce_system(r1, split), reduce_system(r2, split))
    d_env_in = distance_arrays(metric, reduce_environment(s1.mat, split), reduce_environment(s2.mat, split))
    d_env_out = distance_arrays(metric, reduce_environment(r1, split), reduce_environment(r2, split))

    report = StepReport(
        metric=metric,
        d_full_in=d_full_in,
        d_full_out=d_full_out,
        d_sys_in=d_sys_in,
        d_sys_out=d_sys_out,
        d_env_in=d_env_in,
        d_env_out=d_env_out,
        sys_verdict=Verdict.from_distances(d_sys_in, d_sys_out, tol),
        env_verdict=Verdict.from_distances(d_env_in, d_env_out, tol),
        full_verdict=Verdict.from_distances(d_full_in, d_full_out, tol),
        tolerance=tol,
    )
    logger.debug(
        f"[PROBE] metric={metric.value} sys={d_sys_in:.6f}->{d_sys_out:.6f} "
        f"env={d_env_in:.6f}->{d_env_out:.6f} full={d_full_in:.6f}->{d_full_out:.6f}"
    )
    return report


# ---------------------------------------------------------------------
# Theorem-2 ledger
# ---------------------------------------------------------------------
def _t_chain(r1: np.ndarray, r2: np.ndarray, split: Bipartition) -> float:
    eye_s = np.eye(split.dim_system)
    x = embed_operator(eye_s, reduce_environment(r1, split), split) @ r1
    x = x - embed_operator(eye_s, reduce_environment(r2, split), split) @ r2
    return float(0.5 * np.vdot(x, x).real)


def theorem2_report(
    d: UnitaryDilation,
    s1: DensityMatrix,
    s2: DensityMatrix,
    invariance_tol: float = 1e-10,
) -> Theorem2Report:
    """
    γ, α_S, α_E, β_S, β_E, T_SE, T_S, T_E with every inequality evaluated
    and its signed slack. α/β are the Hilbert–Schmidt distances of the
    reduced input/output pairs.

    Raises:
        InvariantViolation: γ from inputs and outputs differ by more than
            `invariance_tol`
    """
    _check_pair(d, s1, s2)
    split = d.split
    r1 = joint_evolve(d, s1).mat
    r2 = joint_evolve(d, s2).mat

    gamma = hs_distance_sq_arrays(s1.mat, s2.mat)
    gamma_out = hs_distance_sq_arrays(r1, r2)
    if abs(gamma - gamma_out) > invariance_tol:
        raise InvariantViolation(
            f"joint distance changed under the unitary: {gamma:.12f} -> {gamma_out:.12f}",
            invariant="unitary_invariance",
            deviation=abs(gamma - gamma_out),
        )

    alpha_s = hs_distance_sq_arrays(reduce_system(s1.mat, split), reduce_system(s2.mat, split))
    alpha_e = hs_distance_sq_arrays(reduce_environment(s1.mat, split), reduce_environment(s2.mat, split))
    beta_s = hs_distance_sq_arrays(reduce_system(r1, split), reduce_system(r2, split))
    beta_e = hs_distance_sq_arrays(reduce_environment(r1, split), reduce_environment(r2, split))

    t_se, t_s, t_e = gamma_out, beta_s, beta_e
    t_chain = _t_chain(r1, r2, split)

    return Theorem2Report(
        gamma=gamma,
        gamma_out=gamma_out,
        alpha_s=alpha_s,
        alpha_e=alpha_e,
        beta_s=beta_s,
        beta_e=beta_e,
        t_se=t_se,
        t_s=t_s,
        t_e=t_e,
        t_chain=t_chain,
        eq6_lhs=beta_s * beta_e - alpha_s * alpha_e,
        eq7_lhs=(beta_s - alpha_s) * beta_e + (beta_e - alpha_e) * alpha_s,
        eq8_lhs=(beta_s - alpha_s) * alpha_e + (beta_e - alpha_e) * beta_s,
        product_bound_in=alpha_s * alpha_e <= gamma,
        product_bound_in_slack=gamma - alpha_s * alpha_e,
        product_bound_out=beta_s * beta_e <= gamma_out,
        product_bound_out_slack=gamma_out - beta_s * beta_e,
        ts_te_bound=t_s * t_e <= t_se,
        ts_te_slack=t_se - t_s * t_e,
        chain_bound=t_chain <= t_se,
        chain_slack=t_se - t_chain,
    )


# ---------------------------------------------------------------------
# Theorem-1 checks
# ---------------------------------------------------------------------
def contraction_check(k: KrausChannel, r1: DensityMatrix, r2: DensityMatrix) -> float:
    """
    trace_distance(in) − trace_distance(out); ≥ 0 for every CPTP map.

    Raises:
        CompletenessError: the channel is not trace preserving to 1e-9
    """
    deviation = k.completeness_deviation
    if deviation > 1e-9:
        raise CompletenessError(deviation, 1e-9)
    return trace_distance(r1, r2) - trace_distance(apply_channel(k, r1), apply_channel(k, r2))


def theorem1_identity(spec: MixedUnitarySpec, sigma: DensityMatrix) -> tuple[float, float]:
    """
    Purity of the correlated joint output of U = Σ U_i ⊗ Π_i on
    σ ⊗ Σ_k p_k Π_k, evaluated as the double sum over environment blocks

        lhs = Σ_{ij} Tr[X_ij X_ji],  X_ij = (𝕀 ⊗ ⟨i|) ρ^{SE} (𝕀 ⊗ |j⟩)

    against rhs = (Σ_i p_i²) Tr[σ²]. Off-diagonal blocks vanish since Π_iΠ_j = δ_ij Π_i.
    """
    d = mixed_unitary_dilation(spec)
    split = d.split
    joint = joint_evolve(d, compose(sigma, d.env_init, split))

    ds, de = split.dim_system, split.dim_environment
    blocks = to_split_order(joint.mat, split).reshape(ds, de, ds, de)
    lhs = 0.0
    for i in range(de):
        for j in range(de):
            lhs += float(np.trace(blocks[:, i, :, j] @ blocks[:, j, :, i]).real)

    rhs = float(sum(p * p for p in spec.weights)) * purity(sigma)
    return lhs, rhs


def theorem1_gap(spec: MixedUnitarySpec, sigma: DensityMatrix) -> float:
    """
    ½Tr[ε(σ)²] − ½Tr[σ²] for the mixed-unitary channel ε: the change in
    Hilbert–Schmidt distance to the maximally mixed state. Never positive.
    """
    channel = dilation_to_kraus(mixed_unitary_dilation(spec))
    return 0.5 * (purity(apply_channel(channel, sigma)) - purity(sigma))


# ---------------------------------------------------------------------
# Random sweep
# ---------------------------------------------------------------------
def exclusivity_sweep(
    instances: int = 500,
    seed: int = 0,
    splits: Iterable[tuple[int, int]] = ((2, 1), (1, 1)),
) -> SweepSummary:
    """
    Random (unitary, correlated pure pair) instances, split sizes taken
    in rotation. Counts how often both subsystems grow at once and how
    often each Theorem-2 inequality fails. Reports, never asserts.
    """
    rng = np.random.default_rng(seed)
    splits = [Bipartition.prefix(n_s, n_e) for n_s, n_e in splits]
    summary = SweepSummary(instances=instances, seed=seed)

    for n in range(instances):
        split = splits[n % len(splits)]
        dim = 2**split.n_qubits
        d = make_dilation(random_unitary(dim, rng), split)
        kets = [random_ket(dim, rng) for _ in range(2)]
        s1, s2 = (
            DensityMatrix(qubits=split.n_qubits, mat=np.outer(k, k.conj())) for k in kets
        )

        step = probe_step(d, s1, s2, Metric.TRACE_NORM, tolerance=1e-9)
        ledger = theorem2_report(d, s1, s2)

        summary.sys_indivisible += step.sys_verdict.is_indivisible()
        summary.env_indivisible += step.env_verdict.is_indivisible()
        summary.both_indivisible += step.both_indivisible
        summary.eq6_positive += not ledger.eq6_holds
        summary.eq7_positive += not ledger.eq7_holds
        summary.eq8_positive += not ledger.eq8_holds
        summary.product_bound_in_failures += not ledger.product_bound_in
        summary.product_bound_out_failures += not ledger.product_bound_out
        summary.ts_te_failures += not ledger.ts_te_bound
        summary.chain_failures += not ledger.chain_bound

    logger.info(
        f"[SWEEP] instances={instances} seed={seed} both_indivisible={summary.both_indivisible} "
        f"eq6_positive={summary.eq6_positive} eq7_positive={summary.eq7_positive} "
        f"eq8_positive={summary.eq8_positive} ts_te_failures={summary.ts_te_failures}"
    )
    return summary
