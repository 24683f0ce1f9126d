"""Dense complex linear algebra for small operators (d <= 16).

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``.
Tensor products always put subsystem A on the left (slow/block index).
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

DEFAULT_TOL = 1e-9

_JACOBI_OFF_TOL = 1e-13
_JACOBI_MAX_SWEEPS = 100
_MIX = 1 / np.sqrt(7.0)


class HermitianEigenResult(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


class NotHermitianError(ValueError):
    pass


def as_matrix(m, square: bool = True) -> np.ndarray:
    """Coerce ``m`` to a finite 2-D complex array."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {a.shape}")
    if square and a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def projector(v) -> np.ndarray:
    v = np.asarray(v, dtype=np.complex128).ravel()
    return np.outer(v, v.conj())


def max_abs(m) -> float:
    m = np.asarray(m)
    return float(np.max(np.abs(m))) if m.size else 0.0


def kron(a, b) -> np.ndarray:
    """Tensor product ``a (x) b`` with ``a`` as the block index."""
    return np.kron(as_matrix(a, square=False), as_matrix(b, square=False))


def partial_trace_A(m, d_A: int, d_B: int) -> np.ndarray:
    """Trace out the left factor of a ``(d_A*d_B)``-dimensional operator."""
    m = as_matrix(m)
    if m.shape[0] != d_A * d_B:
        raise ValueError(f"matrix of size {m.shape[0]} is not {d_A}x{d_B}")
    return np.einsum("ijik->jk", m.reshape(d_A, d_B, d_A, d_B))


def partial_trace_B(m, d_A: int, d_B: int) -> np.ndarray:
    m = as_matrix(m)
    if m.shape[0] != d_A * d_B:
        raise ValueError(f"matrix of size {m.shape[0]} is not {d_A}x{d_B}")
    return np.einsum("ijkj->ik", m.reshape(d_A, d_B, d_A, d_B))


def is_hermitian(m, tol: float = DEFAULT_TOL) -> bool:
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and max_abs(m - dagger(m)) <= tol


def _check_hermitian(m, tol: float) -> np.ndarray:
    m = as_matrix(m)
    if not is_hermitian(m, tol):
        raise NotHermitianError(
            f"matrix is not Hermitian (residual {max_abs(m - dagger(m)):.3e} > {tol:g})"
        )
    return 0.5 * (m + dagger(m))


def hermitian_eigen(m, tol: float = DEFAULT_TOL) -> HermitianEigenResult:
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi sweeps.

    Each rotation first removes the phase of the pivot ``a[p, q]`` and then
    applies the classical real Jacobi rotation to the 2x2 block. Sweeps stop
    once the off-diagonal Frobenius mass drops below ``1e-13`` (relative to
    the matrix norm when that exceeds one) or after 100 sweeps.

    Returns eigenvalues in ascending order and the matching unit eigenvectors
    as columns.
    """
    a = _check_hermitian(m, tol).copy()
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    threshold = _JACOBI_OFF_TOL * max(1.0, float(np.linalg.norm(a)))
    off_mask = ~np.eye(n, dtype=bool)

    for _ in range(_JACOBI_MAX_SWEEPS):
        off = float(np.linalg.norm(a[off_mask]))
        if off < threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag < 1e-300:
                    continue
                phase = apq / mag
                theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                if theta == 0.0:
                    t = 1.0
                elif abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # J = diag(1, conj(phase)) @ [[c, s], [-s, c]]
                j = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ j
                a[idx, :] = dagger(j) @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ j

    w = np.real(np.diag(a))
    order = np.argsort(w, kind="stable")
    vecs = v[:, order]
    vecs = vecs / np.linalg.norm(vecs, axis=0)
    return HermitianEigenResult(w[order], vecs)


def eigvalsh(m, tol: float = DEFAULT_TOL) -> np.ndarray:
    return hermitian_eigen(m, tol).eigenvalues


def trace_norm(m, tol: float = DEFAULT_TOL) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    return float(np.sum(np.abs(eigvalsh(m, tol))))


def is_psd(m, tol: float = DEFAULT_TOL) -> bool:
    m = np.asarray(m)
    if not is_hermitian(m, tol):
        return False
    return bool(eigvalsh(m, tol)[0] >= -tol)


def is_unitary(m, tol: float = DEFAULT_TOL) -> bool:
    m = as_matrix(m)
    return max_abs(dagger(m) @ m - np.eye(m.shape[0])) <= tol


def unitary_eigenvectors(u, degeneracy_tol: float = 1e-6) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and eigenvectors of a unitary (or any normal) matrix.

    Uses only the Hermitian solver: the commuting pair ``(U + U^dag)/2`` and
    ``(U - U^dag)/2i`` is diagonalized jointly, resolving degenerate
    eigenspaces of the first with the second. Clusters of nearly equal
    eigenvalues are re-diagonalized with a generic mix of both parts so that
    near-degeneracies do not cost accuracy.
    """
    u = as_matrix(u)
    if max_abs(u @ dagger(u) - dagger(u) @ u) > 1e-8:
        raise ValueError("matrix is not normal")
    re_part = 0.5 * (u + dagger(u))
    im_part = (u - dagger(u)) / 2j
    w, v = hermitian_eigen(re_part)
    cols = []
    start = 0
    n = len(w)
    while start < n:
        stop = start + 1
        while stop < n and w[stop] - w[stop - 1] <= degeneracy_tol:
            stop += 1
        block = v[:, start:stop]
        if stop - start > 1:
            sub = dagger(block) @ (im_part + _MIX * re_part) @ block
            _, rot = hermitian_eigen(0.5 * (sub + dagger(sub)))
            block = block @ rot
        cols.append(block)
        start = stop
    vecs = np.concatenate(cols, axis=1)
    eigs = np.einsum("ij,ik,kj->j", vecs.conj(), u, vecs)
    return eigs, vecs


def psd_power(m, power: float, floor: float = 1e-12) -> np.ndarray:
    """``m**power`` for a PSD matrix, restricted to eigenvalues above ``floor``.

    Eigenvalues at or below ``floor`` are mapped to zero, so negative powers
    act as pseudo-inverses. LAPACK is used here because iterative solvers
    call this in tight loops.
    """
    w, v = np.linalg.eigh(0.5 * (m + dagger(m)))
    keep = w > floor
    wp = np.zeros_like(w)
    wp[keep] = w[keep] ** power
    return (v * wp) @ dagger(v)


def support_projector(m, floor: float = 1e-12) -> np.ndarray:
    w, v = np.linalg.eigh(0.5 * (m + dagger(m)))
    vk = v[:, w > floor]
    return vk @ dagger(vk)
