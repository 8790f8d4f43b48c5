import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mumkit import tolerances
from mumkit.linalg import (
    ConvergenceError,
    HermitianOperator,
    LinalgError,
    eigenvalues_hermitian,
    hs_inner,
    jacobi_eigh,
    kron,
    partial_trace,
)

from conftest import random_hermitian, random_mixed, random_pure
from oracles import cubic_eigenvalues, kron_loops, partial_trace_loops

SX = np.array([[0, 1], [1, 0]])
SZ = np.array([[1, 0], [0, -1]])


def test_hs_inner_trivial():
    assert hs_inner(np.eye(2), np.eye(2)) == 2
    assert hs_inner(SX, SZ) == 0


def test_hs_inner_pure_state(rng):
    rho = random_pure(rng, 4)
    assert hs_inner(rho, rho) == pytest.approx(1.0, abs=1e-12)


def test_hs_inner_dimension_mismatch():
    with pytest.raises(LinalgError):
        hs_inner(np.eye(2), np.eye(3))


def test_hs_inner_rejects_non_hermitian_residue():
    with pytest.raises(LinalgError):
        hs_inner(np.array([[0, 1j], [0, 0]]), np.array([[0, 0], [1, 0]]))


@given(st.integers(0, 2**32 - 1), st.floats(-3, 3), st.floats(-3, 3))
def test_hs_inner_symmetric_bilinear(seed, x, y):
    rng = np.random.default_rng(seed)
    a, b, c = (random_hermitian(rng, 3) for _ in range(3))
    assert hs_inner(a, b) == pytest.approx(hs_inner(b, a), abs=1e-12)
    lhs = hs_inner(x * a + y * b, c)
    assert lhs == pytest.approx(x * hs_inner(a, c) + y * hs_inner(b, c), abs=1e-10)


def test_hermitian_operator_symmetrises_small_drift():
    a = np.array([[1, 1e-10], [0, 2]])
    op = HermitianOperator(a)
    np.testing.assert_allclose(op.matrix, op.matrix.conj().T, atol=0)
    assert op.correction == pytest.approx(5e-11)
    assert np.max(np.abs(op.matrix - op.matrix.conj().T)) <= 1e-12


def test_hermitian_operator_rejects_large_asymmetry():
    with pytest.raises(LinalgError):
        HermitianOperator(np.array([[1, 1e-6], [0, 2]]))


def test_hermitian_operator_is_read_only():
    op = HermitianOperator(np.eye(2))
    with pytest.raises(ValueError):
        op.matrix[0, 0] = 3


@pytest.mark.parametrize(
    "a, expected",
    [(np.diag([3.0, 1.0, 2.0]), [1, 2, 3]), (SX, [-1, 1])],
)
def test_eigenvalues_known(a, expected):
    np.testing.assert_allclose(eigenvalues_hermitian(a), expected, atol=1e-14)


@pytest.mark.parametrize("seed", range(10))
def test_eigenvalues_match_cubic_formula(seed):
    a = random_hermitian(np.random.default_rng(seed), 3)
    np.testing.assert_allclose(eigenvalues_hermitian(a), cubic_eigenvalues(a), atol=1e-9)


@pytest.mark.parametrize("d", [2, 5, 9, 16])
def test_jacobi_reconstruction(rng, d):
    a = random_hermitian(rng, d)
    w, v = jacobi_eigh(a)
    assert np.all(np.diff(w) >= 0)
    np.testing.assert_allclose(v @ np.diag(w) @ v.conj().T, a, atol=1e-9)
    np.testing.assert_allclose(v.conj().T @ v, np.eye(d), atol=1e-10)


def test_jacobi_degenerate_spectrum():
    u = np.linalg.qr(np.random.default_rng(3).standard_normal((4, 4)))[0]
    a = u @ np.diag([1.0, 1.0, 1.0, -2.0]) @ u.T
    np.testing.assert_allclose(eigenvalues_hermitian(a), [-2, 1, 1, 1], atol=1e-12)


def test_jacobi_sweep_cap_raises_with_residual(rng):
    a = random_hermitian(rng, 6)
    with pytest.raises(ConvergenceError) as info:
        jacobi_eigh(a, max_sweeps=1)
    assert info.value.residual > 0


def test_jacobi_sweep_cap_from_tolerance_table(rng):
    tolerances.override("jacobi_max_sweeps", 1)
    with pytest.raises(ConvergenceError):
        eigenvalues_hermitian(random_hermitian(rng, 6))


def test_kron_trivial():
    np.testing.assert_array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))
    np.testing.assert_array_equal(kron(np.diag([1, 0]), np.diag([0, 1])), np.diag([0, 1, 0, 0]))


def test_kron_matches_index_loops(rng):
    a = random_hermitian(rng, 3)
    b = rng.standard_normal((2, 3))
    np.testing.assert_allclose(kron(a, b), kron_loops(a, b), atol=0)


def test_kron_trace_factorises(rng):
    a, b = random_hermitian(rng, 3), random_hermitian(rng, 3)
    assert np.trace(kron(a, b)) == pytest.approx(np.trace(a) * np.trace(b), abs=1e-12)


@pytest.mark.parametrize("d", [2, 3])
def test_kron_mixed_product(rng, d):
    a, b, c, e = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)) for _ in range(4))
    np.testing.assert_allclose(kron(a, b) @ kron(c, e), kron(a @ c, b @ e), atol=1e-10)


def test_partial_trace_product_state(rng):
    ra, rb = random_mixed(rng, 3), random_mixed(rng, 3)
    joint = kron(ra, rb)
    np.testing.assert_allclose(partial_trace(joint, "B", 3), ra, atol=1e-12)
    np.testing.assert_allclose(partial_trace(joint, "A", 3), rb, atol=1e-12)


def test_partial_trace_bell_state():
    v = np.array([1, 0, 0, 1]) / np.sqrt(2)
    phi = np.outer(v, v)
    np.testing.assert_allclose(partial_trace(phi, "B"), np.eye(2) / 2, atol=1e-15)
    np.testing.assert_allclose(partial_trace(phi, "A"), np.eye(2) / 2, atol=1e-15)


@pytest.mark.parametrize("traced", ["A", "B"])
def test_partial_trace_matches_index_loops_on_mixtures(rng, traced):
    d = 3
    states = [random_mixed(rng, d * d) for _ in range(3)]
    w = rng.dirichlet(np.ones(3))
    mix = sum(wi * s for wi, s in zip(w, states))
    got = partial_trace(mix, traced, d)
    np.testing.assert_allclose(got, partial_trace_loops(mix, d, traced), atol=1e-14)
    # linearity
    parts = sum(wi * partial_trace(s, traced, d) for wi, s in zip(w, states))
    np.testing.assert_allclose(got, parts, atol=1e-14)
    assert np.trace(got) == pytest.approx(np.trace(mix), abs=1e-14)


@given(st.integers(0, 2**32 - 1), st.integers(2, 4))
def test_partial_trace_of_kron_scales_by_trace(seed, d):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    b = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    np.testing.assert_allclose(partial_trace(kron(a, b), "B", d), np.trace(b) * a, atol=1e-10)


def test_partial_trace_rejects_non_square_dimension():
    with pytest.raises(LinalgError):
        partial_trace(np.eye(5), "B")
    with pytest.raises(LinalgError):
        partial_trace(np.eye(4), "C")
