# models/channel.py
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from configurations.config import UNITARITY_TOL
from core.errors import (
    CompletenessError,
    DimensionMismatch,
    NotUnitaryError,
    ValidationFailure,
)
from core.matkernel import adjoint, as_matrix, max_abs, unitarity_deviation
from models.state import Bipartition, DensityMatrix


# -----------------------------
# Unitary dilation
# -----------------------------
class UnitaryDilation(BaseModel):
    """
    A global unitary U on system ⊗ environment, the split it acts across,
    and the environment's initial state Σ_k p_k |a_k⟩⟨a_k|.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    u: np.ndarray
    split: Bipartition
    env_init: DensityMatrix
    unitarity_tol: float = Field(UNITARITY_TOL, gt=0)

    @field_validator("u", mode="before")
    @classmethod
    def coerce_u(cls, v: Any) -> np.ndarray:
        arr = as_matrix(v)
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def check_dilation(self):
        dim = 2**self.split.n_qubits
        if self.u.shape != (dim, dim):
            raise DimensionMismatch(
                f"unitary is {self.u.shape} but the split covers {self.split.n_qubits} qubits",
                self.u.shape,
            )
        if self.env_init.qubits != len(self.split.environment_qubits):
            raise DimensionMismatch(
                f"environment state has {self.env_init.qubits} qubits, split expects "
                f"{len(self.split.environment_qubits)}",
            )
        deviation = unitarity_deviation(self.u)
        if deviation > self.unitarity_tol:
            raise NotUnitaryError(deviation, self.unitarity_tol)
        return self

    @property
    def n_qubits(self) -> int:
        return self.split.n_qubits

    @property
    def unitarity_deviation(self) -> float:
        return unitarity_deviation(self.u)


# -----------------------------
# Kraus channel
# -----------------------------
class KrausChannel(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    in_qubits: int = Field(..., ge=1)
    out_qubits: int = Field(..., ge=1)
    ops: tuple[np.ndarray, ...] = Field(..., min_length=1)
    completeness_tol: float = Field(1e-9, gt=0)

    @field_validator("ops", mode="before")
    @classmethod
    def coerce_ops(cls, v: Any) -> tuple[np.ndarray, ...]:
        ops = []
        for op in v:
            arr = as_matrix(op)
            arr.setflags(write=False)
            ops.append(arr)
        return tuple(ops)

    @model_validator(mode="after")
    def check_completeness(self):
        shape = (2**self.out_qubits, 2**self.in_qubits)
        for i, op in enumerate(self.ops):
            if op.shape != shape:
                raise DimensionMismatch(f"Kraus operator {i} is {op.shape}, expected {shape}", op.shape)
        deviation = self.completeness_deviation
        if deviation > self.completeness_tol:
            raise CompletenessError(deviation, self.completeness_tol)
        return self

    @property
    def completeness_deviation(self) -> float:
        total = sum(adjoint(k) @ k for k in self.ops)
        return max_abs(total - np.eye(2**self.in_qubits))

    @property
    def is_square(self) -> bool:
        return self.in_qubits == self.out_qubits


# -----------------------------
# Mixed-unitary (doubly stochastic) specification
# -----------------------------
class MixedUnitarySpec(BaseModel):
    """K_i = √p_i U_i."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    weights: tuple[float, ...] = Field(..., min_length=1)
    unitaries: tuple[np.ndarray, ...] = Field(..., min_length=1)

    @field_validator("unitaries", mode="before")
    @classmethod
    def coerce_unitaries(cls, v: Any) -> tuple[np.ndarray, ...]:
        return tuple(as_matrix(u) for u in v)

    @model_validator(mode="after")
    def check_spec(self):
        if len(self.weights) != len(self.unitaries):
            raise ValidationFailure(
                f"{len(self.weights)} weights for {len(self.unitaries)} unitaries",
                invariant="mixed_unitary_arity",
            )
        for p in self.weights:
            if not 0.0 <= p <= 1.0:
                raise ValidationFailure(f"weight {p} outside [0, 1]", invariant="probability")
        total = float(sum(self.weights))
        if abs(total - 1.0) > 1e-12:
            raise ValidationFailure(
                f"weights sum to {total:.15f}, expected 1",
                invariant="probability",
                deviation=abs(total - 1.0),
            )
        shape = self.unitaries[0].shape
        for u in self.unitaries:
            if u.shape != shape:
                raise DimensionMismatch(f"unitaries differ in shape: {shape} vs {u.shape}", shape, u.shape)
            deviation = unitarity_deviation(u)
            if deviation > UNITARITY_TOL:
                raise NotUnitaryError(deviation, UNITARITY_TOL)
        return self

    @property
    def dim(self) -> int:
        return self.unitaries[0].shape[0]

    @property
    def qubits(self) -> int:
        return self.dim.bit_length() - 1


# -----------------------------
# Unitality report
# -----------------------------
class UnitalityReport(BaseModel):
    unital: bool
    deviation: float = Field(..., ge=0, description="||Σ K K† − 𝕀||_max")
    tolerance: float
