# services/sampling.py
"""
Seeded random unitaries, states and mixed-unitary specifications.

Everything takes an explicit numpy Generator; nothing here touches
global random state.
"""

import numpy as np

from core.matkernel import adjoint
from models.channel import MixedUnitarySpec
from models.state import DensityMatrix, PureState


def complex_gaussian(rng: np.random.Generator, *shape: int) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar unitary: QR of a complex Gaussian matrix, R's diagonal phases folded into Q."""
    q, r = np.linalg.qr(complex_gaussian(rng, dim, dim))
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_ket(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = complex_gaussian(rng, dim)
    return v / np.linalg.norm(v)


def random_pure(qubits: int, rng: np.random.Generator) -> PureState:
    return PureState(qubits=qubits, amps=random_ket(2**qubits, rng))


def random_density(qubits: int, rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    """G G† / Tr[G G†] with G a dim × rank complex Gaussian (full rank by default)."""
    dim = 2**qubits
    g = complex_gaussian(rng, dim, rank or dim)
    rho = g @ adjoint(g)
    return DensityMatrix(qubits=qubits, mat=rho / np.trace(rho).real)


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    g = complex_gaussian(rng, dim, dim)
    return 0.5 * (g + adjoint(g))


def random_mixed_unitary_spec(qubits: int, terms: int, rng: np.random.Generator) -> MixedUnitarySpec:
    weights = rng.dirichlet(np.ones(terms))
    weights = weights / weights.sum()
    return MixedUnitarySpec(
        weights=tuple(float(p) for p in weights),
        unitaries=tuple(random_unitary(2**qubits, rng) for _ in range(terms)),
    )
