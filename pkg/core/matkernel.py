# core/matkernel.py
"""
Dense complex matrix kernel.

A ComplexMatrix is a 2-D complex128 numpy array with finite entries.
Every quantity downstream (states, channels, distances) reduces to the
handful of operations here.

All functions are pure: inputs are never modified.
"""

import logging
from typing import Literal, Optional

import numpy as np

from configurations.config import (
    HERMITIAN_TOL,
    JACOBI_MAX_SWEEPS,
    JACOBI_OFFDIAG_TOL,
    get_settings,
)
from core.errors import (
    ConvergenceError,
    DimensionMismatch,
    FormatError,
    NotHermitianError,
)

logger = logging.getLogger("divisi.matkernel")

Solver = Literal["lapack", "jacobi"]


# ---------------------------------------------------------------------
# Construction / validation
# ---------------------------------------------------------------------
def as_matrix(data) -> np.ndarray:
    """Coerce to a finite 2-D complex128 array (a copy; callers may not alias)."""
    arr = np.array(data, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise FormatError(f"expected a non-empty 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise FormatError("matrix contains NaN or Inf entries")
    return arr


def max_abs(a: np.ndarray) -> float:
    """Max-entry norm ||a||_max."""
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a)))


def _require_square(a: np.ndarray, what: str) -> None:
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"{what} requires a square matrix, got {a.shape}", a.shape)


# ---------------------------------------------------------------------
# Algebra
# ---------------------------------------------------------------------
def mat_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(
            f"cannot multiply {a.shape[0]}x{a.shape[1]} by {b.shape[0]}x{b.shape[1]}",
            a.shape,
            b.shape,
        )
    return a @ b


def adjoint(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """(a ⊗ b)[i*b.rows + k, j*b.cols + l] = a[i, j] * b[k, l]."""
    return np.kron(a, b)


def trace(a: np.ndarray) -> complex:
    _require_square(a, "trace")
    return complex(np.trace(a))


def hermitian_asymmetry(h: np.ndarray) -> float:
    return max_abs(h - adjoint(h))


def unitarity_deviation(u: np.ndarray) -> float:
    """||U†U − 𝕀||_max."""
    _require_square(u, "unitarity check")
    return max_abs(adjoint(u) @ u - np.eye(u.shape[0]))


# ---------------------------------------------------------------------
# Hermitian spectrum
# ---------------------------------------------------------------------
def hermitian_eigvals(
    h: np.ndarray,
    tol: float = HERMITIAN_TOL,
    solver: Optional[Solver] = None,
) -> np.ndarray:
    """
    Real eigenvalues of a Hermitian matrix, ascending, with multiplicity.

    The input is symmetrized as (h + h†)/2 before solving so roundoff
    asymmetry below `tol` cannot leak imaginary parts into the spectrum.

    Raises:
        NotHermitianError: asymmetry above `tol` (carries the measured value)
    """
    _require_square(h, "hermitian_eigvals")
    asymmetry = hermitian_asymmetry(h)
    if asymmetry > tol:
        raise NotHermitianError(asymmetry, tol)

    sym = 0.5 * (h + adjoint(h))
    solver = solver or get_settings().eigensolver

    if solver == "jacobi":
        return jacobi_eigvals(sym)
    return np.linalg.eigvalsh(sym)


def jacobi_eigvals(h: np.ndarray) -> np.ndarray:
    """
    Cyclic Jacobi rotations on a Hermitian matrix.

    Each (p, q) step first removes the phase of h[p, q] with a diagonal
    unitary, then applies the real symmetric Jacobi rotation. Stops when
    the off-diagonal Frobenius mass drops below JACOBI_OFFDIAG_TOL
    (relative to ||h||_F once that exceeds 1).
    """
    a = np.array(h, dtype=np.complex128)
    n = a.shape[0]
    if n == 1:
        return np.array([a[0, 0].real])

    scale = max(1.0, float(np.linalg.norm(a)))
    threshold = JACOBI_OFFDIAG_TOL * scale

    for sweep in range(JACOBI_MAX_SWEEPS):
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off < threshold:
            logger.debug(f"[JACOBI] n={n} sweeps={sweep}")
            return np.sort(np.diag(a).real)

        for p in range(n - 1):
            for q in range(p + 1, n):
                b = a[p, q]
                mag = abs(b)
                if mag < 1e-300:
                    continue

                phase = b / mag
                theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = 1.0 / (abs(theta) + np.hypot(theta, 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.hypot(t, 1.0)
                s = t * c

                # G = diag(1, conj(phase)) @ [[c, s], [-s, c]]
                g = np.array(
                    [[c, s], [-s * np.conj(phase), c * np.conj(phase)]],
                    dtype=np.complex128,
                )
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = adjoint(g) @ a[idx, :]
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real

    raise ConvergenceError(f"Jacobi eigensolver did not converge in {JACOBI_MAX_SWEEPS} sweeps (n={n})")
