from typing import Literal

from dotenv import load_dotenv
from pydantic import BaseModel, Field
from pydantic_settings import BaseSettings, SettingsConfigDict

# Load environment variables from .env
load_dotenv()


class Settings(BaseSettings):
    """Process-level knobs, overridable through DIVISI_* environment variables."""

    model_config = SettingsConfigDict(env_prefix="DIVISI_", extra="ignore")

    tol: float = Field(1e-9, ge=0, description="Verdict tie tolerance (exact runs)")
    paper_tol: float = Field(1e-6, ge=0, description="Verdict tie tolerance (paper mode)")
    eigensolver: Literal["lapack", "jacobi"] = "lapack"
    log_level: str = "WARNING"
    log_json: bool = True


def get_settings() -> Settings:
    # Not cached: env overrides must apply per invocation.
    return Settings()


# -----------------------------
# Fixed numeric thresholds
# -----------------------------
HERMITIAN_TOL = 1e-9
TRACE_TOL = 1e-9
PSD_TOL = 1e-9
NORM_TOL = 1e-9
UNITARITY_TOL = 1e-9

# Paper-printed constants are truncated to three decimals and never
# renormalized; their states (and their images under a truncated unitary)
# miss unit trace by up to ~1.5e-3.
LENIENT_TRACE_TOL = 5e-3
PAPER_UNITARITY_TOL = 2e-3

# Spectral weights below this are dropped when decomposing mixed inputs.
SPECTRAL_CUTOFF = 1e-12
JACOBI_OFFDIAG_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100

# A Theorem-2 left-hand side above this counts as positive.
INEQUALITY_SLACK = 1e-12


class Tolerances(BaseModel):
    """Every threshold a single analysis run depends on."""

    hermitian: float = HERMITIAN_TOL
    trace: float = TRACE_TOL
    psd: float = PSD_TOL
    unitarity: float = UNITARITY_TOL
    completeness: float = 1e-9
    unital: float = 1e-9
    verdict: float = 1e-9
    invariance: float = 1e-10

    @property
    def lenient(self) -> bool:
        return self.trace > TRACE_TOL

    @classmethod
    def strict(cls, verdict: float | None = None) -> "Tolerances":
        if verdict is None:
            verdict = get_settings().tol
        return cls(verdict=verdict)

    @classmethod
    def paper(cls, verdict: float | None = None) -> "Tolerances":
        if verdict is None:
            verdict = get_settings().paper_tol
        return cls(
            trace=LENIENT_TRACE_TOL,
            unitarity=PAPER_UNITARITY_TOL,
            completeness=PAPER_UNITARITY_TOL,
            unital=PAPER_UNITARITY_TOL,
            verdict=verdict,
            invariance=LENIENT_TRACE_TOL,
        )
