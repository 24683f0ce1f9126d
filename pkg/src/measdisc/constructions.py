"""Measurement families, bases and the overlap conditions that certify them.

Outcome index conventions:

* Weyl-covariant ensembles have ``d*d`` outcomes; outcome ``a = k*d + l``
  belongs to the displacement ``X^k Z^l``.
* (d+1)-outcome ensembles use ``a < d`` for ``Z^a U|x>`` and ``a = d`` for
  the computational vector ``|x>``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .matcore import dagger, max_abs, projector, unitary_eigenvectors
from .measurements import MeasurementEnsemble, Povm

STRICT_MARGIN = 1e-9

# The magic-state angles used for every qubit-based IC example.
MAGIC_ALPHA = np.pi / 4
MAGIC_BETA = float(np.arccos(1 / np.sqrt(3)) / 2)

# Largest tensor power for which the IC condition of the magic basis is known.
IC_VERIFIED_MAX_POWER = 5


@dataclass(frozen=True, eq=False)
class Basis:
    """Orthonormal basis; ``vectors[i]`` is the i-th basis vector."""

    vectors: np.ndarray

    def __post_init__(self):
        v = np.array(self.vectors, dtype=np.complex128, copy=True)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError(f"a basis of C^d needs d vectors of length d, got shape {v.shape}")
        norms = np.linalg.norm(v, axis=1)
        if np.max(np.abs(norms - 1)) > 1e-12:
            raise ValueError("basis vectors are not normalized")
        if max_abs(v.conj() @ v.T - np.eye(len(v))) > 1e-9:
            raise ValueError("basis vectors are not orthogonal")
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)

    @classmethod
    def from_unnormalized(cls, vectors) -> "Basis":
        v = np.asarray(vectors, dtype=np.complex128)
        return cls(v / np.linalg.norm(v, axis=1, keepdims=True))

    @classmethod
    def computational(cls, d: int) -> "Basis":
        return cls(np.eye(d))

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def __len__(self):
        return len(self.vectors)

    def __getitem__(self, i):
        return self.vectors[i]

    def unitary(self) -> np.ndarray:
        """The unitary sending ``|i>`` to the i-th basis vector."""
        return self.vectors.T.copy()


@dataclass(frozen=True)
class ConditionReport:
    satisfied: bool
    witness: tuple | None = None
    overlap: float | None = None
    detail: str = ""

    def __bool__(self):
        return self.satisfied

    def to_dict(self) -> dict:
        return {
            "satisfied": self.satisfied,
            "witness": list(self.witness) if self.witness is not None else None,
            "overlap": self.overlap,
            "detail": self.detail,
        }


def _check_dim(d: int) -> int:
    d = int(d)
    if d < 2:
        raise ValueError(f"dimension must be at least 2, got {d}")
    return d


def weyl_z(d: int) -> np.ndarray:
    d = _check_dim(d)
    return np.diag(np.exp(2j * np.pi * np.arange(d) / d))


def weyl_x(d: int) -> np.ndarray:
    """Cyclic shift ``|i> -> |i+1 mod d>``."""
    d = _check_dim(d)
    return np.roll(np.eye(d, dtype=np.complex128), 1, axis=0)


@lru_cache(maxsize=None)
def _weyl_table(d: int) -> np.ndarray:
    x, z = weyl_x(d), weyl_z(d)
    xs = [np.linalg.matrix_power(x, k) for k in range(d)]
    zs = [np.linalg.matrix_power(z, l) for l in range(d)]
    table = np.array([xs[k] @ zs[l] for k in range(d) for l in range(d)])
    table.setflags(write=False)
    return table


def weyl_unitary(k: int, l: int, d: int) -> np.ndarray:
    d = _check_dim(d)
    if not (0 <= k < d and 0 <= l < d):
        raise ValueError(f"indices ({k}, {l}) out of range for d={d}")
    return _weyl_table(d)[k * d + l].copy()


def weyl_unitaries(d: int) -> np.ndarray:
    """All ``X^k Z^l`` stacked in ``k*d + l`` order."""
    return _weyl_table(_check_dim(d))


# ---------------------------------------------------------------- projective


def table1_vectors() -> np.ndarray:
    """Vectors ``v[x, a]`` of four projective measurements in dimension 4.

    ``v[3, 3]`` is ``(2|0> - |1> + |2>)/sqrt(6)``: the only unit vector (up to
    phase) orthogonal to the rest of its row and column.
    """
    e = np.eye(4)
    r2, r3, r6 = np.sqrt(2), np.sqrt(3), np.sqrt(6)
    rows = [
        [e[0], e[1], e[2], e[3]],
        [(e[1] - e[2]) / r2, (e[0] + e[3]) / r2, (e[0] - e[3]) / r2, (e[1] + e[2]) / r2],
        [(e[1] + e[2] + e[3]) / r3, (e[0] + e[2] - e[3]) / r3,
         (e[1] - e[3] - e[0]) / r3, (e[1] - e[2] + e[0]) / r3],
        [(e[1] + e[2] - 2 * e[3]) / r6, (-e[0] + 2 * e[2] + e[3]) / r6,
         (2 * e[1] + e[3] + e[0]) / r6, (2 * e[0] - e[1] + e[2]) / r6],
    ]
    return np.array(rows, dtype=np.complex128)


def table1_bases() -> list[Basis]:
    return [Basis(row) for row in table1_vectors()]


def projective_ensemble(bases: Sequence[Basis], priors=None) -> MeasurementEnsemble:
    vecs = _stack_bases(bases)
    elements = vecs[..., :, None] * vecs[..., None, :].conj()
    return MeasurementEnsemble(elements, priors)


def table1_projective_ensemble() -> MeasurementEnsemble:
    return projective_ensemble(table1_bases())


def _stack_bases(bases) -> np.ndarray:
    if isinstance(bases, np.ndarray):
        vecs = np.asarray(bases, dtype=np.complex128)
    else:
        rows = [b.vectors if isinstance(b, Basis) else np.asarray(b) for b in bases]
        shapes = {r.shape for r in rows}
        if len(shapes) != 1:
            raise ValueError(f"ragged set of bases: {sorted(shapes)}")
        vecs = np.array(rows, dtype=np.complex128)
    if vecs.ndim != 3:
        raise ValueError("expected a list of bases, each a list of vectors")
    return vecs


def check_theorem2_conditions(bases) -> ConditionReport:
    """Check that projective measurements ``v[x, a]`` are perfectly
    distinguishable with a maximally entangled probe but not with a single
    system.

    Required: each row is an orthonormal basis; for every outcome ``a`` the
    vectors ``v[0, a], ..., v[n-1, a]`` are orthonormal; and some pair of
    outcomes ``a != a'`` has all cross overlaps strictly below one.
    """
    vecs = _stack_bases(bases)
    n, m, d = vecs.shape
    if n != d or m != d:
        raise ValueError(f"need d bases of d vectors in C^d, got shape {vecs.shape}")
    # gram[x, a, y, b] = <v[x, a] | v[y, b]>
    gram = np.einsum("xai,ybi->xayb", vecs.conj(), vecs)
    eye = np.eye(d)
    for x in range(n):
        err = np.abs(gram[x, :, x, :] - eye)
        if err.max() > STRICT_MARGIN:
            a, b = np.unravel_index(np.argmax(err), err.shape)
            return ConditionReport(False, (int(x), int(a), int(b)), float(abs(gram[x, a, x, b])),
                                   "setting is not an orthonormal basis")
    for a in range(m):
        err = np.abs(gram[:, a, :, a] - eye)
        if err.max() > STRICT_MARGIN:
            x, y = np.unravel_index(np.argmax(err), err.shape)
            return ConditionReport(False, (int(a), int(x), int(y)), float(abs(gram[x, a, y, a])),
                                   "condition 1 fails: outcome vectors not orthonormal across settings")
    mags = np.abs(gram)
    best = None
    for a in range(m):
        for b in range(a + 1, m):
            worst = float(mags[:, a, :, b].max())
            if best is None or worst < best[2]:
                best = (a, b, worst)
    a, b, worst = best
    if worst <= 1 - STRICT_MARGIN:
        return ConditionReport(True, (a, b), worst, "both conditions hold")
    return ConditionReport(False, (a, b), worst, "condition 2 fails: every outcome pair shares a vector")


def appendix_search(d: int, trials: int = 100_000, seed: int = 0) -> dict:
    """Random search for d projective measurements in C^d (d = 2, 3) that
    satisfy :func:`check_theorem2_conditions`.

    Candidates fix the first measurement to the computational basis (no loss
    of generality) and draw the rest from three families: Haar-random bases,
    the most general outcome-wise orthonormal layout with random complex
    coefficients, and phased permutation layouts (which satisfy every
    orthogonality constraint). Returns counts; a satisfying instance is
    reported in ``found``.
    """
    if d not in (2, 3):
        raise ValueError("the randomized search is defined for d = 2 and d = 3")
    rng = np.random.default_rng(seed)
    found = []
    by_family = {"haar": 0, "layout": 0, "permutation": 0}
    for t in range(trials):
        family = ("haar", "layout", "permutation")[t % 3]
        by_family[family] += 1
        vecs = _appendix_candidate(d, family, rng)
        if check_theorem2_conditions(vecs).satisfied:
            found.append(vecs)
    return {"d": d, "trials": trials, "seed": seed, "satisfying": len(found),
            "by_family": by_family, "found": found}


def _random_unitary(d: int, rng) -> np.ndarray:
    z = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def _phase(rng, size=None):
    return np.exp(2j * np.pi * rng.random(size))


def _appendix_candidate(d: int, family: str, rng) -> np.ndarray:
    e = np.eye(d, dtype=np.complex128)
    vecs = np.empty((d, d, d), dtype=np.complex128)
    vecs[0] = e
    if family == "haar":
        for x in range(1, d):
            vecs[x] = _random_unitary(d, rng).T
        return vecs
    if family == "permutation":
        # Latin-square layout of phased computational vectors.
        step = int(rng.integers(1, d))
        for x in range(1, d):
            perm = (np.arange(d) + x * step) % d
            vecs[x] = e[perm] * _phase(rng, d)[:, None]
        return vecs
    # General layout: for each outcome a, the vectors of settings x >= 1 span
    # the complement of |a> with random complex coefficients.
    for a in range(d):
        rest = [i for i in range(d) if i != a]
        u = _random_unitary(d - 1, rng)
        for x in range(1, d):
            v = np.zeros(d, dtype=np.complex128)
            v[rest] = u[:, x - 1]
            vecs[x, a] = v
    return vecs


# ------------------------------------------------------------ Weyl-covariant


def weyl_covariant_povm_ensemble(basis: Basis) -> MeasurementEnsemble:
    """d POVMs with elements ``U_{k,l} |v_x><v_x| U_{k,l}^dag / d``."""
    if not isinstance(basis, Basis):
        basis = Basis(basis)
    d = basis.dim
    us = weyl_unitaries(d)
    # kets[x, a] = U_a |v_x>
    kets = np.einsum("aij,xj->xai", us, basis.vectors)
    elements = kets[..., :, None] * kets[..., None, :].conj() / d
    return MeasurementEnsemble(elements)


def displaced_overlaps(basis: Basis) -> np.ndarray:
    """``|<v_j| U_{k,l} |v_i>|`` indexed ``[k*d + l, j, i]``."""
    v = basis.vectors
    return np.abs(np.einsum("ja,kab,ib->kji", v.conj(), weyl_unitaries(basis.dim), v))


def check_cond(basis: Basis) -> ConditionReport:
    """Is there a displacement ``(k, l) != (0, 0)`` mapping no basis vector
    onto another (all overlaps strictly below one)?"""
    d = basis.dim
    worst = displaced_overlaps(basis).reshape(d * d, -1).max(axis=1)
    worst[0] = np.inf
    idx = int(np.argmin(worst))
    k, l = divmod(idx, d)
    ok = worst[idx] <= 1 - STRICT_MARGIN
    return ConditionReport(bool(ok), (k, l), float(worst[idx]),
                           "displacement with all overlaps < 1" if ok
                           else "every displacement maps some basis vector onto another")


def check_ic_condition(basis: Basis) -> ConditionReport:
    """Diagonal displaced overlaps ``|<v_i|U_{k,l}|v_i>|`` must all be nonzero."""
    d = basis.dim
    ov = displaced_overlaps(basis)
    diag = ov[:, np.arange(d), np.arange(d)]
    flat = int(np.argmin(diag))
    kl, i = divmod(flat, d)
    k, l = divmod(kl, d)
    value = float(diag[kl, i])
    return ConditionReport(value >= STRICT_MARGIN, (k, l, i), value,
                           "minimal diagonal overlap")


def sarkar_unitary(d: int) -> np.ndarray:
    d = _check_dim(d)
    i = np.arange(d)
    root = lambda e: np.exp(2j * np.pi * e / d)  # noqa: E731
    is0 = (i == 0).astype(int)
    sign = (-1.0) ** (is0[:, None] + is0[None, :])
    return np.diag(root(i + 0.5)) - (2 / d) * sign * root((i[:, None] + i[None, :] + 1) / 2)


def sarkar_basis(d: int) -> Basis:
    """Eigenbasis of :func:`sarkar_unitary`."""
    _, vecs = unitary_eigenvectors(sarkar_unitary(d))
    return Basis(vecs.T)


def magic_qubit_basis(alpha: float = MAGIC_ALPHA, beta: float = MAGIC_BETA) -> Basis:
    if not 0 < beta < np.pi / 4:
        raise ValueError("beta must lie in the open interval (0, pi/4)")
    c, s = np.cos(beta), np.sin(beta)
    ph = np.exp(1j * alpha)
    return Basis([[c, ph * s], [np.conj(ph) * s, -c]])


def tensor_power_basis(b: Basis, r: int) -> Basis:
    """All r-fold tensor products of a qubit basis, binary index order."""
    if r < 1:
        raise ValueError("tensor power must be at least 1")
    if b.dim != 2:
        raise ValueError("tensor powers are built from a qubit basis")
    vecs = b.vectors
    for _ in range(r - 1):
        vecs = np.einsum("ai,bj->abij", vecs, b.vectors).reshape(len(vecs) * 2, -1)
    return Basis(vecs)


def ic_basis_d3() -> Basis:
    r3 = np.sqrt(3)
    return Basis.from_unnormalized([[0, 1, -1], [1 + r3, 1, 1], [1 - r3, 1, 1]])


def ic_basis(d: int, allow_unverified: bool = False) -> Basis:
    """The informationally complete example basis for dimension ``d``.

    ``d = 3`` uses :func:`ic_basis_d3`; ``d = 2**r`` uses tensor powers of the
    magic qubit basis, known to work for ``r <= 5``.
    """
    if d == 3:
        return ic_basis_d3()
    r = int(round(np.log2(d))) if d >= 2 else 0
    if d < 2 or 2 ** r != d:
        raise ValueError(f"no IC example basis for d={d}")
    if r > IC_VERIFIED_MAX_POWER and not allow_unverified:
        raise ValueError(f"IC condition is unverified for d=2^{r}; pass allow_unverified=True")
    return tensor_power_basis(magic_qubit_basis(), r)


# ----------------------------------------------------------- (d+1)-outcome


def check_condd1(basis: Basis) -> ConditionReport:
    """``|<j|v_i>|`` must equal ``1/d`` on the diagonal and ``sqrt(d+1)/d`` off it."""
    d = basis.dim
    mags = np.abs(basis.vectors)  # mags[i, j] = |<j|v_i>|
    target = np.full((d, d), np.sqrt(d + 1) / d)
    np.fill_diagonal(target, 1 / d)
    err = np.abs(mags - target)
    i, j = np.unravel_index(np.argmax(err), err.shape)
    return ConditionReport(bool(err.max() <= STRICT_MARGIN), (int(j), int(i)), float(mags[i, j]),
                           "largest deviation from the required |<j|v_i>|")


def dplus1_vectors(basis: Basis) -> np.ndarray:
    """``eta[x, a]``: ``Z^a U|x> = Z^a |v_x>`` for ``a < d`` and ``|x>`` for ``a = d``."""
    d = basis.dim
    phases = np.exp(2j * np.pi * np.outer(np.arange(d), np.arange(d)) / d)  # [a, i]
    eta = np.empty((d, d + 1, d), dtype=np.complex128)
    eta[:, :d, :] = phases[None, :, :] * basis.vectors[:, None, :]
    eta[:, d, :] = np.eye(d)
    return eta


def dplus1_povm_ensemble(basis: Basis, check: bool = True) -> MeasurementEnsemble:
    if not isinstance(basis, Basis):
        basis = Basis(basis)
    if check:
        report = check_condd1(basis)
        if not report.satisfied:
            raise ValueError(
                f"basis violates the (d+1)-outcome magnitude condition at (j, i)={report.witness}; "
                "the elements would not sum to the identity"
            )
    d = basis.dim
    eta = dplus1_vectors(basis)
    elements = (d / (d + 1)) * eta[..., :, None] * eta[..., None, :].conj()
    return MeasurementEnsemble(elements)


def example_basis_dplus1(d: int) -> Basis:
    if d == 2:
        r3 = np.sqrt(3)
        return Basis(np.array([[1, r3], [r3, -1]]) / 2)
    if d == 3:
        e = np.eye(3)
        return Basis([e[i] / 3 - 2 * e[(i + 1) % 3] / 3 - 2 * e[(i + 2) % 3] / 3 for i in range(3)])
    if d == 4:
        s = np.sqrt(5)
        return Basis(np.array([
            [1, s, s, s],
            [s, -1, s, -s],
            [s, -s, -1, s],
            [s, s, -s, -1],
        ]) / 4)
    raise ValueError(f"no (d+1)-outcome example basis for d={d}; supported: 2, 3, 4")


def trine_pair_ensemble() -> MeasurementEnsemble:
    """Two three-outcome qubit POVMs with elements ``(2/3)|.><.|`` of
    ``v_i``, ``Z v_i`` and ``|i>``."""
    r3 = np.sqrt(3)
    v = [np.array([1, r3]) / 2, np.array([r3, -1]) / 2]
    z = np.diag([1, -1])
    e = np.eye(2)
    povms = [[2 / 3 * projector(v[i]), 2 / 3 * projector(z @ v[i]), 2 / 3 * projector(e[i])]
             for i in range(2)]
    return MeasurementEnsemble(np.array(povms), [0.5, 0.5])


# ---------------------------------------------------------------- Bob side


def _transposed_projectors(kets: np.ndarray) -> list[Povm]:
    """``kets[x, a]`` -> for each ``a`` the POVM ``{(|k><k|)^T}_x``."""
    n, m, _ = kets.shape
    out = []
    for a in range(m):
        elements = np.array([projector(kets[x, a]).T for x in range(n)])
        out.append(Povm(elements))
    return out


def proof_bob_measurements(kind: str, basis=None) -> list[Povm]:
    """Bob's measurements that reach perfect discrimination with the
    maximally entangled state, one POVM (indexed by setting x) per Alice
    outcome.

    ``kind`` is ``"table1"`` (or ``"projective"`` with a list of bases),
    ``"weyl"`` with a :class:`Basis`, or ``"dplus1"`` with a :class:`Basis`.
    """
    if kind == "table1":
        return _transposed_projectors(table1_vectors())
    if kind == "projective":
        return _transposed_projectors(_stack_bases(basis))
    if kind == "weyl":
        kets = np.einsum("aij,xj->xai", weyl_unitaries(basis.dim), basis.vectors)
        return _transposed_projectors(kets)
    if kind == "dplus1":
        return _transposed_projectors(dplus1_vectors(basis))
    raise ValueError(f"unknown construction {kind!r}; expected table1, projective, weyl or dplus1")


def transpose_bob_measurements(ens: MeasurementEnsemble) -> list[Povm]:
    """Normalized transposes of rank-one elements, ``N[a][x] = (M[x, a] / Tr M[x, a])^T``.

    Agrees with :func:`proof_bob_measurements` on all catalog constructions.
    """
    traces = np.real(np.einsum("xaii->xa", ens.elements))
    if np.any(traces <= 0):
        raise ValueError("ensemble has zero elements")
    normalized = ens.elements / traces[..., None, None]
    return [Povm(np.swapaxes(normalized[:, a], -1, -2)) for a in range(ens.n_outcomes)]
