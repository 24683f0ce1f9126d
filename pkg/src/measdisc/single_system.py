"""Single-system distinguishability: best guessing probability when the
measurement device is probed with one pure state."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .measurements import MeasurementEnsemble


@dataclass(frozen=True)
class HypersphereParams:
    """Angles of a pure state in C^d: ``d-1`` polar angles and ``d-1`` phases."""

    thetas: np.ndarray
    nus: np.ndarray

    def __post_init__(self):
        th = np.atleast_1d(np.asarray(self.thetas, dtype=float))
        nu = np.atleast_1d(np.asarray(self.nus, dtype=float))
        if th.shape != nu.shape or th.ndim != 1:
            raise ValueError("thetas and nus must be 1-D with equal length d-1")
        object.__setattr__(self, "thetas", th)
        object.__setattr__(self, "nus", nu)

    @property
    def dim(self) -> int:
        return len(self.thetas) + 1

    @classmethod
    def from_vector(cls, x) -> "HypersphereParams":
        x = np.asarray(x, dtype=float)
        half = len(x) // 2
        return cls(x[:half], x[half:])

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.thetas, self.nus])

    def wrapped(self) -> "HypersphereParams":
        """Phases reduced to [0, 2pi) and polar angles clamped to [0, pi/2]."""
        return HypersphereParams(np.clip(self.thetas, 0, np.pi / 2), np.mod(self.nus, 2 * np.pi))


def states_from_angles(thetas, nus) -> np.ndarray:
    """Vectorized state map; angle arrays have shape ``(..., d-1)``."""
    thetas = np.asarray(thetas, dtype=float)
    nus = np.asarray(nus, dtype=float)
    k = thetas.shape[-1]
    sines = np.cumprod(np.sin(thetas), axis=-1)
    prefix = np.concatenate([np.ones(thetas.shape[:-1] + (1,)), sines], axis=-1)
    mags = prefix.copy()
    mags[..., :k] *= np.cos(thetas)
    phases = np.concatenate([np.zeros(nus.shape[:-1] + (1,)), nus], axis=-1)
    return mags * np.exp(1j * phases)


def state_from_params(p: HypersphereParams) -> np.ndarray:
    """``cos t1 |0> + sum_k (prod_{i<=k} sin t_i) cos t_{k+1} e^{i nu_k} |k>
    + (prod sin t_i) e^{i nu_{d-1}} |d-1>``."""
    return states_from_angles(p.thetas, p.nus)


def _weighted_flat(ens: MeasurementEnsemble) -> np.ndarray:
    w = ens.weighted()
    n, m, d, _ = w.shape
    return w.reshape(n * m * d, d)


def _guess_table(flat: np.ndarray, shape: tuple[int, int], psi: np.ndarray) -> np.ndarray:
    """``p(x) <psi|M[x, a]|psi>`` for a single state or a batch ``(..., d)``."""
    n, m = shape
    d = flat.shape[1]
    mv = psi @ flat.T  # (..., n*m*d), entries sum_j W[xai, j] psi_j
    mv = mv.reshape(psi.shape[:-1] + (n, m, d))
    return np.real(np.einsum("...xai,...i->...xa", mv, psi.conj()))


def score_details(psi, ens: MeasurementEnsemble) -> tuple[float, np.ndarray]:
    """Score of ``psi`` and the best setting guess for every outcome.

    Ties go to the lowest setting index.
    """
    psi = np.asarray(psi, dtype=np.complex128).ravel()
    if psi.shape[0] != ens.dim:
        raise ValueError(f"state has dimension {psi.shape[0]}, ensemble acts on {ens.dim}")
    table = _guess_table(_weighted_flat(ens), ens.elements.shape[:2], psi)
    guess = np.argmax(table, axis=0)
    return float(table.max(axis=0).sum()), guess


def score(psi, ens: MeasurementEnsemble) -> float:
    """``sum_a max_x p(x) <psi|M[x, a]|psi>`` for a unit vector ``psi``."""
    return score_details(psi, ens)[0]


def score_batch(states, ens: MeasurementEnsemble) -> np.ndarray:
    states = np.asarray(states, dtype=np.complex128)
    return _guess_table(_weighted_flat(ens), ens.elements.shape[:2], states).max(axis=-2).sum(axis=-1)


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int | None = None  # None -> 50 * (d - 1)
    max_evals: int = 5000
    tol: float = 1e-9
    seed: int = 0

    def restarts_for(self, d: int) -> int:
        return self.restarts if self.restarts is not None else 50 * (d - 1)


@dataclass(frozen=True)
class DiscriminationReport:
    value: float
    best_state: np.ndarray
    argmax_map: tuple[int, ...]
    restarts_used: int
    converged: bool
    spread: float
    best_params: HypersphereParams | None = None
    evaluations: int = 0
    restart_values: tuple[float, ...] = field(default=(), repr=False)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "best_state": [[float(z.real), float(z.imag)] for z in self.best_state],
            "argmax_map": list(self.argmax_map),
            "restarts_used": self.restarts_used,
            "converged": self.converged,
            "spread": self.spread,
            "evaluations": self.evaluations,
        }


def restart_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream for restart ``index`` derived from one root seed."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def _local_search(objective, x0, cfg: OptimizerConfig):
    # fatol=inf: stop on simplex diameter alone.
    opts = {"xatol": cfg.tol, "fatol": np.inf, "maxfev": cfg.max_evals}
    res = minimize(objective, x0, method="Nelder-Mead", options=opts)
    evals = res.nfev
    # One fresh simplex around the first optimum: kinks from the inner max
    # often collapse the first simplex early.
    res2 = minimize(objective, res.x, method="Nelder-Mead", options=opts)
    evals += res2.nfev
    best = res2 if res2.fun <= res.fun else res
    return best.x, -float(best.fun), bool(res2.success), evals


def optimize_d(ens: MeasurementEnsemble, cfg: OptimizerConfig | None = None) -> DiscriminationReport:
    """Multi-start simplex search for the single-system distinguishability.

    Each restart draws polar angles uniformly from [0, pi/2] and phases from
    [0, 2pi) using its own seed stream, so results do not depend on the order
    restarts are run in. The best restart wins, ties to the lowest index.
    """
    cfg = cfg or OptimizerConfig()
    d = ens.dim
    if d < 2:
        psi = np.ones(1, dtype=np.complex128)
        value, guess = score_details(psi, ens)
        return DiscriminationReport(value, psi, tuple(int(g) for g in guess), 0, True, 0.0)

    flat = _weighted_flat(ens)
    shape = ens.elements.shape[:2]
    k = d - 1

    def objective(x):
        psi = states_from_angles(x[:k], x[k:])
        return -float(_guess_table(flat, shape, psi).max(axis=0).sum())

    n_restarts = max(1, cfg.restarts_for(d))
    values = []
    best = None
    total_evals = 0
    for r in range(n_restarts):
        rng = restart_rng(cfg.seed, r)
        x0 = np.concatenate([rng.uniform(0, np.pi / 2, k), rng.uniform(0, 2 * np.pi, k)])
        x, val, ok, evals = _local_search(objective, x0, cfg)
        total_evals += evals
        values.append(val)
        if best is None or val > best[1]:
            best = (x, val, ok)

    x, _, ok = best
    params = HypersphereParams.from_vector(x)
    psi = state_from_params(params)
    value, guess = score_details(psi, ens)
    return DiscriminationReport(
        value=value,
        best_state=psi,
        argmax_map=tuple(int(g) for g in guess),
        restarts_used=n_restarts,
        converged=ok,
        spread=float(max(values) - min(values)),
        best_params=params.wrapped(),
        evaluations=total_evals,
        restart_values=tuple(values),
    )


def grid_oracle_d(ens: MeasurementEnsemble, resolution: int = 1000) -> float:
    """Exhaustive scan of qubit states on a ``resolution x resolution`` grid
    of (theta, nu), theta in [0, pi/2] and nu in [0, 2pi)."""
    if ens.dim != 2:
        raise ValueError("the grid oracle is only defined for qubit ensembles")
    thetas = np.linspace(0, np.pi / 2, resolution)
    nus = np.linspace(0, 2 * np.pi, resolution, endpoint=False)
    flat = _weighted_flat(ens)
    shape = ens.elements.shape[:2]
    best = -np.inf
    for chunk in np.array_split(thetas, max(1, resolution // 64)):
        th, nu = np.meshgrid(chunk, nus, indexing="ij")
        psi = states_from_angles(th[..., None], nu[..., None])
        best = max(best, float(_guess_table(flat, shape, psi).max(axis=-2).sum(axis=-1).max()))
    return best


def trine_d_closed_form(delta: float) -> float:
    """Score of ``sin(delta)|0> + cos(delta)|1>`` on the trine pair."""
    if not 0 <= delta <= np.pi / 4 + 1e-15:
        raise ValueError("delta must lie in [0, pi/4]")
    if delta <= np.pi / 12:
        return (3 + 2 * np.cos(2 * delta)) / 6
    return (3 + np.cos(2 * delta) + np.sqrt(3) * np.sin(2 * delta)) / 6
