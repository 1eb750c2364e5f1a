# models/state.py
"""
Quantum states over qubit registers.

Qubit ordering: the leftmost ket symbol is qubit 0, the most significant
bit of the row index. |100⟩ on three qubits is basis index 4.
"""

from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from configurations.config import (
    HERMITIAN_TOL,
    LENIENT_TRACE_TOL,
    NORM_TOL,
    PSD_TOL,
    TRACE_TOL,
)
from core.errors import DimensionMismatch, FormatError, ValidationFailure
from core.matkernel import as_matrix, hermitian_eigvals, trace


# -----------------------------
# Bipartition
# -----------------------------
class Bipartition(BaseModel):
    """The system / environment split of an N-qubit register."""

    model_config = ConfigDict(frozen=True)

    system_qubits: tuple[int, ...] = Field(..., min_length=1)
    environment_qubits: tuple[int, ...] = Field(..., min_length=1)

    @model_validator(mode="after")
    def check_cover(self):
        sys_set = set(self.system_qubits)
        env_set = set(self.environment_qubits)
        if len(sys_set) != len(self.system_qubits) or len(env_set) != len(self.environment_qubits):
            raise ValidationFailure("bipartition repeats a qubit index", invariant="bipartition")
        if sys_set & env_set:
            raise ValidationFailure(
                f"system and environment overlap on qubits {sorted(sys_set & env_set)}",
                invariant="bipartition",
            )
        if sys_set | env_set != set(range(self.n_qubits)):
            raise ValidationFailure(
                f"bipartition must cover qubits 0..{self.n_qubits - 1} exactly",
                invariant="bipartition",
            )
        return self

    @property
    def n_qubits(self) -> int:
        return len(self.system_qubits) + len(self.environment_qubits)

    @property
    def dim_system(self) -> int:
        return 2 ** len(self.system_qubits)

    @property
    def dim_environment(self) -> int:
        return 2 ** len(self.environment_qubits)

    @property
    def order(self) -> tuple[int, ...]:
        """Register qubits listed system-first."""
        return self.system_qubits + self.environment_qubits

    def is_contiguous(self) -> bool:
        return self.order == tuple(range(self.n_qubits))

    def swapped(self) -> "Bipartition":
        return Bipartition(
            system_qubits=self.environment_qubits,
            environment_qubits=self.system_qubits,
        )

    @classmethod
    def prefix(cls, n_system: int, n_environment: int) -> "Bipartition":
        """First `n_system` qubits are S, the last `n_environment` are E."""
        return cls(
            system_qubits=tuple(range(n_system)),
            environment_qubits=tuple(range(n_system, n_system + n_environment)),
        )

    @classmethod
    def from_system(cls, system_qubits: list[int], n_qubits: int) -> "Bipartition":
        for q in system_qubits:
            if not 0 <= q < n_qubits:
                raise DimensionMismatch(
                    f"system qubit {q} is outside 0..{n_qubits - 1} of the {n_qubits}-qubit register",
                    (q,),
                    (n_qubits,),
                )
        env = tuple(q for q in range(n_qubits) if q not in set(system_qubits))
        return cls(system_qubits=tuple(system_qubits), environment_qubits=env)

    @classmethod
    def parse(cls, n_qubits: int, split: str | None = None, system: str | None = None) -> "Bipartition":
        """
        CLI split syntax: "2:1" (first two qubits S, last one E) or an
        explicit system list "0,2" with E the remaining qubits.
        """
        try:
            if split is not None:
                n_s, n_e = (int(part) for part in split.split(":"))
            else:
                indices = [int(part) for part in system.split(",")]
        except (ValueError, AttributeError):
            raise FormatError(f"cannot parse bipartition split={split!r} system={system!r}")

        if split is None:
            return cls.from_system(indices, n_qubits)
        if n_s < 1 or n_e < 1:
            raise FormatError(f"split {split!r} needs at least one qubit on each side")
        if n_s + n_e != n_qubits:
            raise DimensionMismatch(
                f"split {split} covers {n_s + n_e} qubits, the unitary acts on {n_qubits}",
                (n_s + n_e,),
                (n_qubits,),
            )
        return cls.prefix(n_s, n_e)


# -----------------------------
# Shared helpers
# -----------------------------
def _qubits_for_dim(dim: int) -> int:
    n = dim.bit_length() - 1
    if dim < 2 or 2**n != dim:
        raise DimensionMismatch(f"dimension {dim} is not a power of two >= 2", (dim,))
    return n


# -----------------------------
# Pure states
# -----------------------------
class PureState(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    qubits: int = Field(..., ge=1)
    amps: np.ndarray
    lenient: bool = False

    @field_validator("amps", mode="before")
    @classmethod
    def coerce_amps(cls, v: Any) -> np.ndarray:
        arr = np.array(v, dtype=np.complex128).reshape(-1)
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def check_norm(self):
        if self.amps.shape[0] != 2**self.qubits:
            raise DimensionMismatch(
                f"{self.qubits} qubits need {2 ** self.qubits} amplitudes, got {self.amps.shape[0]}",
                self.amps.shape,
            )
        if not np.all(np.isfinite(self.amps)):
            raise ValidationFailure("amplitudes contain NaN or Inf", invariant="finite")
        norm_sq = float(np.sum(np.abs(self.amps) ** 2))
        tol = LENIENT_TRACE_TOL if self.lenient else NORM_TOL
        if abs(norm_sq - 1.0) > tol:
            raise ValidationFailure(
                f"state norm^2 is {norm_sq:.12f}, expected 1",
                invariant="unit_norm",
                deviation=abs(norm_sq - 1.0),
            )
        return self

    @classmethod
    def from_amps(cls, amps, *, lenient: bool = False) -> "PureState":
        arr = np.asarray(amps, dtype=np.complex128).reshape(-1)
        return cls(qubits=_qubits_for_dim(arr.shape[0]), amps=arr, lenient=lenient)

    @classmethod
    def basis(cls, bits: str) -> "PureState":
        """Computational basis ket from a bit string, e.g. basis("100")."""
        amps = np.zeros(2 ** len(bits), dtype=np.complex128)
        amps[int(bits, 2)] = 1.0
        return cls(qubits=len(bits), amps=amps)

    @property
    def dim(self) -> int:
        return 2**self.qubits


# -----------------------------
# Density matrices
# -----------------------------
class DensityMatrix(BaseModel):
    """
    Hermitian, unit-trace, PSD matrix on 2^N dimensions.

    `lenient` relaxes only the trace check (to LENIENT_TRACE_TOL), for
    states built from truncated printed constants.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    qubits: int = Field(..., ge=1)
    mat: np.ndarray
    lenient: bool = False

    @field_validator("mat", mode="before")
    @classmethod
    def coerce_mat(cls, v: Any) -> np.ndarray:
        arr = as_matrix(v)
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def check_state(self):
        dim = 2**self.qubits
        if self.mat.shape != (dim, dim):
            raise DimensionMismatch(
                f"{self.qubits} qubits need a {dim}x{dim} matrix, got {self.mat.shape}",
                self.mat.shape,
            )

        # hermitian_eigvals enforces the Hermiticity tolerance itself
        eigvals = hermitian_eigvals(self.mat, tol=HERMITIAN_TOL)

        tr = trace(self.mat).real
        trace_tol = LENIENT_TRACE_TOL if self.lenient else TRACE_TOL
        if abs(tr - 1.0) > trace_tol:
            raise ValidationFailure(
                f"trace is {tr:.12f}, expected 1 within {trace_tol:.0e}",
                invariant="unit_trace",
                deviation=abs(tr - 1.0),
            )

        if eigvals[0] < -PSD_TOL:
            raise ValidationFailure(
                f"state is not positive semidefinite: min eigenvalue {eigvals[0]:.3e}",
                invariant="positivity",
                deviation=float(-eigvals[0]),
            )
        return self

    @classmethod
    def from_matrix(cls, mat, *, lenient: bool = False) -> "DensityMatrix":
        arr = as_matrix(mat)
        return cls(qubits=_qubits_for_dim(arr.shape[0]), mat=arr, lenient=lenient)

    @property
    def dim(self) -> int:
        return 2**self.qubits

    def same_space(self, other: "DensityMatrix") -> None:
        if self.mat.shape != other.mat.shape:
            raise DimensionMismatch(
                f"states live on different spaces: {self.mat.shape} vs {other.mat.shape}",
                self.mat.shape,
                other.mat.shape,
            )
