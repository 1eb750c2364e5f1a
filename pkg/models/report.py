# FILE: models/report.py
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from configurations.config import INEQUALITY_SLACK
from core.verdicts import Metric, Verdict
from models.channel import UnitalityReport
from models.state import DensityMatrix, PureState


# -----------------------------
# One-step probe
# -----------------------------
class StepReport(BaseModel):
    """The six distances of one step and the verdict per subsystem."""

    metric: Metric
    d_full_in: float = Field(..., ge=0)
    d_full_out: float = Field(..., ge=0)
    d_sys_in: float = Field(..., ge=0)
    d_sys_out: float = Field(..., ge=0)
    d_env_in: float = Field(..., ge=0)
    d_env_out: float = Field(..., ge=0)
    sys_verdict: Verdict
    env_verdict: Verdict
    full_verdict: Verdict
    tolerance: float

    @property
    def both_indivisible(self) -> bool:
        return self.sys_verdict.is_indivisible() and self.env_verdict.is_indivisible()

    @property
    def sys_growth(self) -> float:
        return self.d_sys_out - self.d_sys_in


# -----------------------------
# Theorem-2 ledger (Hilbert–Schmidt surrogate throughout)
# -----------------------------
class Theorem2Report(BaseModel):
    gamma: float = Field(..., description="½Tr[Δ†Δ] of the joint input pair")
    gamma_out: float = Field(..., description="same for the joint output pair")
    alpha_s: float
    alpha_e: float
    beta_s: float
    beta_e: float
    t_se: float
    t_s: float
    t_e: float
    t_chain: float = Field(..., description="½Tr[X†X], X = (𝕀⊗ρ^E_1)ρ^SE_1 − (𝕀⊗ρ^E_2)ρ^SE_2")

    eq6_lhs: float = Field(..., description="β_Sβ_E − α_Sα_E")
    eq7_lhs: float = Field(..., description="(β_S−α_S)β_E + (β_E−α_E)α_S")
    eq8_lhs: float = Field(..., description="(β_S−α_S)α_E + (β_E−α_E)β_S")

    product_bound_in: bool
    product_bound_in_slack: float = Field(..., description="γ − α_Sα_E")
    product_bound_out: bool
    product_bound_out_slack: float = Field(..., description="γ − β_Sβ_E")
    ts_te_bound: bool
    ts_te_slack: float = Field(..., description="T_SE − T_S·T_E")
    chain_bound: bool
    chain_slack: float = Field(..., description="T_SE − t_chain")

    @property
    def eq6_holds(self) -> bool:
        return self.eq6_lhs <= INEQUALITY_SLACK

    @property
    def eq7_holds(self) -> bool:
        return self.eq7_lhs <= INEQUALITY_SLACK

    @property
    def eq8_holds(self) -> bool:
        return self.eq8_lhs <= INEQUALITY_SLACK


# -----------------------------
# Combined analysis (shared by scenarios and `analyze`)
# -----------------------------
class AnalysisReport(BaseModel):
    step: StepReport
    theorem2: Theorem2Report
    system_unitality: UnitalityReport
    environment_unitality: UnitalityReport


# -----------------------------
# Witness search
# -----------------------------
class WitnessConfig(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    restarts: int = Field(8, ge=1)
    iters: int = Field(400, ge=1)
    step: float = Field(0.25, gt=0)
    seed: int = 0
    correlated: bool = False
    patience: int = Field(64, ge=1, description="consecutive failures before re-sampling")
    min_step: float = Field(1e-6, gt=0)
    workers: int = Field(1, ge=1)
    # joint-space kets when correlated, system kets otherwise
    initial_pair: Optional[tuple[PureState, PureState]] = None


class WitnessResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    pair: tuple[DensityMatrix, DensityMatrix]
    growth: float = Field(..., description="d_sys_out − d_sys_in")
    d_sys_in: float
    d_sys_out: float
    iterations: int
    seed: int
    restart: int = Field(..., description="restart slot that produced the pair")
    correlated: bool


# -----------------------------
# Random sweep
# -----------------------------
class SweepSummary(BaseModel):
    instances: int
    seed: int
    both_indivisible: int = 0
    sys_indivisible: int = 0
    env_indivisible: int = 0
    eq6_positive: int = 0
    eq7_positive: int = 0
    eq8_positive: int = 0
    product_bound_in_failures: int = 0
    product_bound_out_failures: int = 0
    ts_te_failures: int = 0
    chain_failures: int = 0
