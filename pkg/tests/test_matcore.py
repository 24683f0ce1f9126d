import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from measdisc.constructions import weyl_x, weyl_z
from measdisc.matcore import (
    NotHermitianError,
    hermitian_eigen,
    is_psd,
    is_unitary,
    kron,
    partial_trace_A,
    partial_trace_B,
    psd_power,
    trace_norm,
    unitary_eigenvectors,
)

from conftest import random_density, random_hermitian, random_matrix, random_unitary

SX = np.array([[0, 1], [1, 0]])
SZ = np.diag([1, -1])


def phi_plus(d):
    return np.eye(d).reshape(d * d) / np.sqrt(d)


def test_kron_identity_and_ordering():
    assert np.array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))
    assert np.array_equal(kron(np.diag([1, -1]), np.eye(2)), np.diag([1, 1, -1, -1]))


def test_kron_transpose_trick_on_bell_state():
    phi = phi_plus(2)
    lhs = kron(SX, SZ) @ phi
    rhs = kron(np.eye(2), SZ @ SX.T) @ phi
    # |phi+> = (|00> + |11>)/sqrt2, (X (x) Z)|phi+> = (|10> - |01>)/sqrt2
    expected = np.array([0, -1, 1, 0]) / np.sqrt(2)
    assert np.allclose(lhs, expected, atol=1e-15)
    assert np.allclose(rhs, expected, atol=1e-15)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_transpose_trick_random(rng, d):
    phi = phi_plus(d)
    for _ in range(100):
        a, b = random_matrix(rng, d), random_matrix(rng, d)
        lhs = kron(a, b) @ phi
        rhs = kron(np.eye(d), b @ a.T) @ phi
        assert np.max(np.abs(lhs - rhs)) < 1e-10


def test_partial_trace_product(rng):
    rho = random_density(rng, 3)
    sigma = random_density(rng, 2)
    out = partial_trace_A(kron(2.5 * rho, sigma), 3, 2)
    assert np.allclose(out, 2.5 * sigma, atol=1e-13)
    assert np.allclose(partial_trace_B(kron(rho, sigma), 3, 2), rho, atol=1e-13)


def test_partial_trace_bell_marginal():
    bell = np.outer(phi_plus(2), phi_plus(2))
    assert np.allclose(partial_trace_A(bell, 2, 2), np.eye(2) / 2)


def test_partial_trace_index_loop_oracle(rng):
    rho = random_density(rng, 4)
    expected = np.zeros((2, 2), dtype=complex)
    for j in range(2):
        for l in range(2):
            for i in range(2):
                expected[j, l] += rho[i * 2 + j, i * 2 + l]
    out = partial_trace_A(rho, 2, 2)
    assert np.allclose(out, expected, atol=1e-15)
    assert abs(np.trace(out) - np.trace(rho)) < 1e-12


def test_partial_trace_dimension_mismatch():
    with pytest.raises(ValueError):
        partial_trace_A(np.eye(6), 2, 2)


def test_eigen_diagonal_and_pauli():
    assert np.allclose(hermitian_eigen(np.diag([3.0, 1.0, 2.0])).eigenvalues, [1, 2, 3])
    assert np.allclose(hermitian_eigen(SX).eigenvalues, [-1, 1])


@pytest.mark.parametrize("d", [1, 2, 4, 7, 16])
def test_eigen_reconstruction(rng, d):
    h = random_hermitian(rng, d)
    w, v = hermitian_eigen(h)
    assert np.all(np.diff(w) >= 0)
    assert np.max(np.abs(v @ np.diag(w) @ v.conj().T - h)) < 1e-10
    assert np.max(np.abs(v.conj().T @ v - np.eye(d))) < 1e-10
    assert abs(w.sum() - np.trace(h).real) < 1e-10
    assert np.allclose(w, np.linalg.eigvalsh(h), atol=1e-10)


def test_eigen_degenerate_spectrum(rng):
    u = random_unitary(rng, 5)
    h = u @ np.diag([1.0, 1.0, 1.0, -2.0, -2.0]) @ u.conj().T
    w, v = hermitian_eigen(h)
    assert np.allclose(w, [-2, -2, 1, 1, 1], atol=1e-12)
    assert np.max(np.abs(v @ np.diag(w) @ v.conj().T - h)) < 1e-10


def test_eigen_rejects_non_hermitian():
    with pytest.raises(NotHermitianError):
        hermitian_eigen(np.array([[1, 2], [0, 1]]))


def test_trace_norm_values():
    assert trace_norm(np.diag([1.0, -1.0])) == pytest.approx(2)
    assert trace_norm(np.zeros((3, 3))) == 0
    plus = np.array([1, 1]) / np.sqrt(2)
    # eigenvalues of |0><0| - |+><+| are +-1/sqrt2
    assert trace_norm(np.diag([1, 0]) - np.outer(plus, plus)) == pytest.approx(np.sqrt(2), abs=1e-14)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), d=st.integers(1, 5), c=st.floats(-3, 3))
def test_trace_norm_is_a_norm(seed, d, c):
    rng = np.random.default_rng(seed)
    a, b = random_hermitian(rng, d), random_hermitian(rng, d)
    assert trace_norm(a + b) <= trace_norm(a) + trace_norm(b) + 1e-9
    assert abs(trace_norm(c * a) - abs(c) * trace_norm(a)) < 1e-9


def test_is_psd():
    assert is_psd(np.eye(3))
    assert not is_psd(np.diag([1, -0.1]), 1e-9)
    r3 = np.sqrt(3)
    v0 = np.array([1, r3]) / 2
    assert is_psd(2 / 3 * np.outer(v0, v0))
    assert not is_psd(np.array([[1, 1], [0, 1]]))


def test_is_unitary():
    x, z = weyl_x(4), weyl_z(4)
    assert is_unitary(weyl_z(3))
    assert is_unitary(x @ x @ z)
    assert not is_unitary(0.5 * np.eye(3))
    with pytest.raises(ValueError):
        is_unitary(np.ones((2, 3)))


@pytest.mark.parametrize("d", [2, 3, 5])
def test_unitary_eigenvectors(rng, d):
    u = random_unitary(rng, d)
    eigs, vecs = unitary_eigenvectors(u)
    assert np.max(np.abs(u @ vecs - vecs * eigs)) < 1e-10
    assert np.max(np.abs(vecs.conj().T @ vecs - np.eye(d))) < 1e-10


def test_unitary_eigenvectors_degenerate():
    u = kron(weyl_z(4), weyl_z(4))
    eigs, vecs = unitary_eigenvectors(u)
    assert np.max(np.abs(u @ vecs - vecs * eigs)) < 1e-12


def test_psd_power_pseudo_inverse(rng):
    rho = random_density(rng, 4, rank=2)
    inv_root = psd_power(rho, -0.5)
    proj = inv_root @ rho @ inv_root
    assert np.allclose(proj @ proj, proj, atol=1e-8)
    assert np.trace(proj).real == pytest.approx(2)
