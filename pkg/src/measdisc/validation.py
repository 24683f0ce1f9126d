"""Input coercion shared by the estimators and the CLI."""
from __future__ import annotations

import numpy as np

from .entangled import BipartiteDensity
from .measurements import MeasurementEnsemble, ensemble_from_dict


def check_ensemble(X, priors=None) -> MeasurementEnsemble:
    """Accept an ensemble, its JSON document, or an ``(n, m, d, d)`` array."""
    if isinstance(X, MeasurementEnsemble):
        if priors is not None:
            return MeasurementEnsemble(X.elements, priors)
        return X
    if isinstance(X, dict):
        return ensemble_from_dict(X)
    arr = np.asarray(X)
    if arr.ndim != 4:
        raise ValueError(f"expected a measurement ensemble or an (n, m, d, d) array, got shape {arr.shape}")
    return MeasurementEnsemble(arr, priors)


def check_pure_states(X, dim: int, tol: float = 1e-9) -> np.ndarray:
    """Return a ``(n_samples, dim)`` complex array of unit vectors."""
    arr = np.asarray(X, dtype=np.complex128)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != dim:
        raise ValueError(f"expected states of shape (n_samples, {dim}), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("states contain non-finite entries")
    norms = np.linalg.norm(arr, axis=1)
    if np.any(np.abs(norms - 1) > tol):
        raise ValueError("states must be unit vectors")
    return arr


def check_bipartite_states(X, dim_A: int) -> list[BipartiteDensity]:
    """Accept one state or a sequence of states as :class:`BipartiteDensity`
    objects or square arrays; bare arrays are split as ``dim_A x rest``."""
    if isinstance(X, BipartiteDensity):
        items = [X]
    elif isinstance(X, np.ndarray) and X.ndim == 2:
        items = [X]
    else:
        items = list(X)
    out = []
    for item in items:
        if not isinstance(item, BipartiteDensity):
            m = np.asarray(item, dtype=np.complex128)
            if m.ndim != 2 or m.shape[0] % dim_A:
                raise ValueError(f"state of shape {m.shape} cannot be split with dim_A={dim_A}")
            item = BipartiteDensity(dim_A, m.shape[0] // dim_A, m)
        if item.dim_A != dim_A:
            raise ValueError(f"state has dim_A={item.dim_A}, ensemble acts on {dim_A}")
        out.append(item)
    return out
