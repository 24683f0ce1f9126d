"""POVMs, measurement ensembles with priors, validation and JSON I/O."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .matcore import DEFAULT_TOL, as_matrix, dagger, eigvalsh, is_unitary, max_abs


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Povm:
    """Ordered measurement operators, one per outcome.

    Only the shape is checked on construction; call :func:`validate` (or
    :meth:`is_valid`) for positivity and completeness.
    """

    elements: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.elements, dtype=np.complex128)
        if e.ndim != 3 or e.shape[1] != e.shape[2] or e.shape[0] == 0:
            raise ValueError(f"POVM elements must have shape (m, d, d), got {e.shape}")
        if not np.all(np.isfinite(e)):
            raise ValueError("POVM has non-finite entries")
        object.__setattr__(self, "elements", _frozen(e))

    @property
    def dim(self) -> int:
        return self.elements.shape[1]

    @property
    def n_outcomes(self) -> int:
        return self.elements.shape[0]

    def __len__(self):
        return self.n_outcomes

    def __getitem__(self, a):
        return self.elements[a]

    def completeness_residual(self) -> float:
        return max_abs(self.elements.sum(axis=0) - np.eye(self.dim))

    def is_valid(self, tol: float = DEFAULT_TOL) -> bool:
        return _povm_defects(self.elements, tol)[0]

    def is_projective(self, tol: float = DEFAULT_TOL) -> bool:
        return _is_projective(self.elements, tol)


@dataclass(frozen=True, eq=False)
class MeasurementEnsemble:
    """``n`` POVMs on a common space, each with ``m`` outcomes, and priors p(x).

    ``elements[x, a]`` is the operator for outcome ``a`` of setting ``x``.
    """

    elements: np.ndarray
    priors: np.ndarray = field(default=None)

    def __post_init__(self):
        e = np.asarray(self.elements, dtype=np.complex128)
        if e.ndim != 4 or e.shape[2] != e.shape[3]:
            raise ValueError(
                f"ensemble elements must have shape (n, m, d, d), got {e.shape}; "
                "ragged POVMs are not supported"
            )
        if not np.all(np.isfinite(e)):
            raise ValueError("ensemble has non-finite entries")
        n = e.shape[0]
        if self.priors is None:
            p = np.full(n, 1.0 / n)
        else:
            p = np.asarray(self.priors, dtype=float).ravel()
        if p.shape != (n,):
            raise ValueError(f"expected {n} priors, got {p.shape[0]}")
        if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-12:
            raise ValueError("priors must be non-negative and sum to 1")
        p = p.copy()
        p.setflags(write=False)
        object.__setattr__(self, "elements", _frozen(e))
        object.__setattr__(self, "priors", p)

    @classmethod
    def from_povms(cls, povms: Sequence[Povm | np.ndarray], priors=None) -> "MeasurementEnsemble":
        arrays = [np.asarray(p.elements if isinstance(p, Povm) else p) for p in povms]
        if not arrays:
            raise ValueError("ensemble needs at least one measurement")
        dims = {a.shape[-1] for a in arrays}
        if len(dims) != 1:
            raise ValueError(f"POVMs act on different dimensions: {sorted(dims)}")
        counts = {a.shape[0] for a in arrays}
        if len(counts) != 1:
            raise ValueError(f"POVMs have different outcome counts: {sorted(counts)}")
        return cls(np.stack(arrays), priors)

    @property
    def dim(self) -> int:
        return self.elements.shape[-1]

    @property
    def n_settings(self) -> int:
        return self.elements.shape[0]

    @property
    def n_outcomes(self) -> int:
        return self.elements.shape[1]

    @property
    def measurements(self) -> list[Povm]:
        return [Povm(e) for e in self.elements]

    def weighted(self) -> np.ndarray:
        """``p(x) * M[x, a]`` as an array of shape (n, m, d, d)."""
        return self.priors[:, None, None, None] * self.elements

    def allclose(self, other: "MeasurementEnsemble", atol: float = 1e-12) -> bool:
        return (
            self.elements.shape == other.elements.shape
            and np.allclose(self.elements, other.elements, rtol=0, atol=atol)
            and np.allclose(self.priors, other.priors, rtol=0, atol=atol)
        )


@dataclass(frozen=True)
class ValidationCertificate:
    povm_valid: tuple[bool, ...]
    projective: tuple[bool, ...]
    max_completeness_residual: float
    max_negative_eigenvalue: float

    @property
    def ok(self) -> bool:
        return all(self.povm_valid)

    def to_dict(self) -> dict:
        return {
            "povm_valid": list(self.povm_valid),
            "projective": list(self.projective),
            "max_completeness_residual": self.max_completeness_residual,
            "max_negative_eigenvalue": self.max_negative_eigenvalue,
        }


def _povm_defects(elements: np.ndarray, tol: float) -> tuple[bool, float, float]:
    d = elements.shape[-1]
    completeness = max_abs(elements.sum(axis=0) - np.eye(d))
    negative = 0.0
    hermitian = True
    for e in elements:
        if max_abs(e - dagger(e)) > tol:
            hermitian = False
            continue
        negative = max(negative, -float(eigvalsh(e, tol)[0]))
    valid = hermitian and completeness <= tol and negative <= tol
    return valid, completeness, negative


def _is_projective(elements: np.ndarray, tol: float) -> bool:
    for i, e in enumerate(elements):
        if max_abs(e @ e - e) > tol:
            return False
        for f in elements[i + 1:]:
            if max_abs(e @ f) > tol:
                return False
    return True


def validate(ens: MeasurementEnsemble, tol: float = DEFAULT_TOL) -> ValidationCertificate:
    valid, projective = [], []
    worst_completeness = 0.0
    worst_negative = 0.0
    for elements in ens.elements:
        ok, completeness, negative = _povm_defects(elements, tol)
        valid.append(ok)
        projective.append(ok and _is_projective(elements, tol))
        worst_completeness = max(worst_completeness, completeness)
        worst_negative = max(worst_negative, negative)
    return ValidationCertificate(tuple(valid), tuple(projective), worst_completeness, worst_negative)


def check_density(rho, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Return ``rho`` as a Hermitian array, raising if it is not a state."""
    rho = as_matrix(rho)
    if max_abs(rho - dagger(rho)) > tol:
        raise ValueError("density matrix is not Hermitian")
    rho = 0.5 * (rho + dagger(rho))
    if abs(np.trace(rho) - 1.0) > tol:
        raise ValueError(f"density matrix has trace {np.trace(rho).real:.6g}, expected 1")
    if eigvalsh(rho, tol)[0] < -tol:
        raise ValueError("density matrix is not positive semi-definite")
    return rho


def outcome_probability(ens: MeasurementEnsemble, x: int, a: int, rho, tol: float = DEFAULT_TOL) -> float:
    """Born-rule probability Tr(rho M[x, a]), clamped to [0, 1]."""
    rho = check_density(rho, tol)
    if rho.shape[0] != ens.dim:
        raise ValueError(f"state dimension {rho.shape[0]} does not match ensemble dimension {ens.dim}")
    value = float(np.real(np.trace(rho @ ens.elements[x, a])))
    return min(1.0, max(0.0, value))


def conjugate_ensemble(ens: MeasurementEnsemble, u, tol: float = DEFAULT_TOL) -> MeasurementEnsemble:
    """Rotate every element, ``E -> u E u^dag``; priors are kept."""
    u = as_matrix(u)
    if u.shape[0] != ens.dim:
        raise ValueError("unitary dimension does not match ensemble")
    if not is_unitary(u, tol):
        raise ValueError("conjugating matrix is not unitary")
    return MeasurementEnsemble(u @ ens.elements @ dagger(u), ens.priors)


# JSON schema: {"dim": d, "priors": [...],
#               "measurements": [ [ matrix per outcome ] per setting ]}
# where a matrix is a row-major list of rows of [re, im] pairs.
# For d*d-outcome Weyl ensembles outcome a corresponds to (k, l) = divmod(a, d).


def matrix_to_json(m) -> list:
    m = np.asarray(m, dtype=np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def matrix_from_json(rows) -> np.ndarray:
    a = np.asarray(rows, dtype=float)
    if a.ndim != 3 or a.shape[-1] != 2:
        raise ValueError("matrix must be a list of rows of [re, im] pairs")
    return a[..., 0] + 1j * a[..., 1]


def ensemble_to_dict(ens: MeasurementEnsemble) -> dict:
    return {
        "dim": ens.dim,
        "priors": [float(p) for p in ens.priors],
        "measurements": [[matrix_to_json(e) for e in povm] for povm in ens.elements],
    }


def ensemble_from_dict(doc: dict) -> MeasurementEnsemble:
    try:
        povms = [np.stack([matrix_from_json(e) for e in povm]) for povm in doc["measurements"]]
        ens = MeasurementEnsemble.from_povms(povms, doc.get("priors"))
    except KeyError as exc:
        raise ValueError(f"ensemble document is missing {exc}") from None
    if "dim" in doc and int(doc["dim"]) != ens.dim:
        raise ValueError(f"declared dim {doc['dim']} does not match matrices ({ens.dim})")
    return ens


def dumps_ensemble(ens: MeasurementEnsemble, **kwargs) -> str:
    # repr() of a float is the shortest string that round-trips exactly.
    return json.dumps(ensemble_to_dict(ens), **kwargs)


def loads_ensemble(text: str) -> MeasurementEnsemble:
    return ensemble_from_dict(json.loads(text))
