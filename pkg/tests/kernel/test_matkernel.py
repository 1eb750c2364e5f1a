import numpy as np
import pytest

from core import matkernel
from core.errors import DimensionMismatch, FormatError, NotHermitianError
from core.matkernel import (
    adjoint,
    as_matrix,
    hermitian_eigvals,
    jacobi_eigvals,
    kron,
    mat_mul,
    trace,
    unitarity_deviation,
)
from services.sampling import random_density, random_hermitian, random_unitary
from services.scenarios import build_scenario, run_scenario


# ---------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------
def ket(bits: str) -> np.ndarray:
    v = np.zeros((2 ** len(bits), 1), dtype=np.complex128)
    v[int(bits, 2), 0] = 1.0
    return v


# ---------------------------------------------------------------------
# TESTS: construction and algebra
# ---------------------------------------------------------------------
def test_as_matrix_rejects_vectors_and_non_finite_entries():
    with pytest.raises(FormatError):
        as_matrix([1.0, 2.0])
    with pytest.raises(FormatError):
        as_matrix([[1.0, np.nan], [0.0, 1.0]])


def test_mat_mul_names_both_shapes_on_mismatch():
    with pytest.raises(DimensionMismatch) as exc:
        mat_mul(np.zeros((2, 3)), np.zeros((2, 2)))
    assert "2x3" in str(exc.value)
    assert "2x2" in str(exc.value)


def test_kron_puts_first_factor_on_most_significant_bits():
    # |1⟩ ⊗ |0⟩ = |10⟩, basis index 2
    np.testing.assert_array_equal(kron(ket("1"), ket("0")), ket("10"))


def test_trace_requires_square_matrix():
    with pytest.raises(DimensionMismatch):
        trace(np.zeros((2, 3)))
    assert trace(np.eye(4)) == pytest.approx(4.0)


def test_unitarity_deviation_of_random_unitary_is_roundoff(rng):
    u = random_unitary(8, rng)
    assert unitarity_deviation(u) < 1e-12
    assert unitarity_deviation(2.0 * u) == pytest.approx(3.0)


# ---------------------------------------------------------------------
# TESTS: Hermitian spectrum
# ---------------------------------------------------------------------
def test_hermitian_eigvals_rejects_asymmetric_input():
    h = np.array([[1.0, 0.5], [0.0, 1.0]], dtype=np.complex128)
    with pytest.raises(NotHermitianError) as exc:
        hermitian_eigvals(h)
    assert exc.value.asymmetry == pytest.approx(0.5)
    assert exc.value.invariant == "hermiticity"


def test_hermitian_eigvals_tolerates_roundoff_asymmetry():
    h = np.array([[1.0, 1e-12j], [0.0, -1.0]], dtype=np.complex128)
    np.testing.assert_allclose(hermitian_eigvals(h), [-1.0, 1.0], atol=1e-12)


def test_pauli_y_spectrum():
    y = np.array([[0, -1j], [1j, 0]])
    np.testing.assert_allclose(hermitian_eigvals(y, solver="jacobi"), [-1.0, 1.0], atol=1e-14)


@pytest.mark.parametrize("dim", [2, 4, 8, 16])
def test_jacobi_agrees_with_lapack(rng, dim):
    for _ in range(5):
        h = random_hermitian(dim, rng)
        np.testing.assert_allclose(
            hermitian_eigvals(h, solver="jacobi"),
            hermitian_eigvals(h, solver="lapack"),
            atol=1e-10,
        )


def test_jacobi_handles_degenerate_spectrum(rng):
    u = random_unitary(4, rng)
    h = u @ np.diag([1.0, 1.0, -2.0, -2.0]) @ adjoint(u)
    np.testing.assert_allclose(jacobi_eigvals(0.5 * (h + adjoint(h))), [-2.0, -2.0, 1.0, 1.0], atol=1e-10)


def test_eigensolver_follows_environment(monkeypatch, rng):
    calls = []
    real = matkernel.jacobi_eigvals

    def spy(h):
        calls.append(h.shape)
        return real(h)

    monkeypatch.setattr(matkernel, "jacobi_eigvals", spy)
    monkeypatch.setenv("DIVISI_EIGENSOLVER", "jacobi")

    hermitian_eigvals(random_hermitian(4, rng))
    assert calls == [(4, 4)]


@pytest.mark.parametrize("dim", [2, 4, 8])
def test_jacobi_converges_on_many_random_matrices(dim):
    rng = np.random.default_rng(1)
    for _ in range(200):
        h = random_hermitian(dim, rng)
        np.testing.assert_allclose(
            jacobi_eigvals(0.5 * (h + adjoint(h))),
            np.linalg.eigvalsh(h),
            atol=1e-10,
        )


def test_jacobi_converges_on_state_differences():
    rng = np.random.default_rng(1)
    for _ in range(200):
        r1, r2 = random_density(2, rng), random_density(2, rng)
        delta = r1.mat - r2.mat
        np.testing.assert_allclose(
            hermitian_eigvals(delta, solver="jacobi"),
            np.linalg.eigvalsh(0.5 * (delta + adjoint(delta))),
            atol=1e-12,
        )


def test_jacobi_backend_runs_a_full_scenario(monkeypatch):
    monkeypatch.setenv("DIVISI_EIGENSOLVER", "jacobi")
    for name in ("bell", "w"):
        step = run_scenario(build_scenario(name)).analysis.step
        assert step.d_full_out == pytest.approx(step.d_full_in, abs=1e-10)


# ---------------------------------------------------------------------
# TESTS: algebraic identities
# ---------------------------------------------------------------------
def test_mat_mul_is_associative(rng):
    for _ in range(20):
        a, b, c = (random_unitary(4, rng) for _ in range(3))
        np.testing.assert_allclose(mat_mul(mat_mul(a, b), c), mat_mul(a, mat_mul(b, c)), atol=1e-12)


def test_kron_mixed_product(rng):
    for _ in range(20):
        a, c = random_hermitian(2, rng), random_hermitian(2, rng)
        b, d = random_hermitian(4, rng), random_hermitian(4, rng)
        np.testing.assert_allclose(
            mat_mul(kron(a, b), kron(c, d)),
            kron(mat_mul(a, c), mat_mul(b, d)),
            atol=1e-12,
        )


def test_trace_is_cyclic(rng):
    for _ in range(20):
        a, b = random_hermitian(8, rng), random_unitary(8, rng)
        assert trace(mat_mul(a, b)) == pytest.approx(trace(mat_mul(b, a)), abs=1e-12)


def test_adjoint_is_an_involution(rng):
    a = random_hermitian(4, rng) + 1j * random_unitary(4, rng)
    np.testing.assert_array_equal(adjoint(adjoint(a)), a)
    np.testing.assert_allclose(adjoint(mat_mul(a, a.T)), mat_mul(adjoint(a.T), adjoint(a)), atol=1e-12)


@pytest.mark.parametrize("solver", ["lapack", "jacobi"])
def test_spectrum_is_unitarily_invariant(rng, solver):
    for _ in range(20):
        h = random_hermitian(8, rng)
        u = random_unitary(8, rng)
        rotated = adjoint(u) @ h @ u
        np.testing.assert_allclose(
            hermitian_eigvals(0.5 * (rotated + adjoint(rotated)), solver=solver),
            hermitian_eigvals(h, solver=solver),
            atol=1e-10,
        )
