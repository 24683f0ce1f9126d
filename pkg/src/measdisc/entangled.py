"""Entanglement-assisted distinguishability and the steering witness.

Alice's device measures her half of a shared state and announces the
outcome ``a``; Bob then measures his half with a POVM chosen by ``a`` and
outputs a guess of the setting ``x``. Conditioning on ``a`` turns the
problem into one minimum-error discrimination task per outcome, over the
subnormalized operators ``sigma[a][x] = p(x) Tr_A[(M[x, a] (x) 1) rho]``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .matcore import (
    DEFAULT_TOL,
    as_matrix,
    dagger,
    hermitian_eigen,
    is_psd,
    max_abs,
    projector,
    psd_power,
    support_projector,
)
from .measurements import MeasurementEnsemble, Povm, check_density, matrix_from_json, matrix_to_json
from .single_system import score_details


@dataclass(frozen=True, eq=False)
class BipartiteDensity:
    """Density operator on C^dim_A (x) C^dim_B, A as the block index."""

    dim_A: int
    dim_B: int
    matrix: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.matrix)
        if m.shape[0] != self.dim_A * self.dim_B:
            raise ValueError(f"matrix of size {m.shape[0]} does not match {self.dim_A}x{self.dim_B}")
        m = check_density(m)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_vector(cls, psi, dim_A: int, dim_B: int) -> "BipartiteDensity":
        psi = np.asarray(psi, dtype=np.complex128).ravel()
        return cls(dim_A, dim_B, projector(psi / np.linalg.norm(psi)))

    def marginal_A(self) -> np.ndarray:
        return np.einsum("ijkj->ik", self.matrix.reshape(self.dim_A, self.dim_B, self.dim_A, self.dim_B))

    def marginal_B(self) -> np.ndarray:
        return np.einsum("ijil->jl", self.matrix.reshape(self.dim_A, self.dim_B, self.dim_A, self.dim_B))

    def to_dict(self) -> dict:
        return {"dim_A": self.dim_A, "dim_B": self.dim_B, "matrix": matrix_to_json(self.matrix)}

    @classmethod
    def from_dict(cls, doc: dict) -> "BipartiteDensity":
        try:
            return cls(int(doc["dim_A"]), int(doc["dim_B"]), matrix_from_json(doc["matrix"]))
        except KeyError as exc:
            raise ValueError(f"state document is missing {exc}") from None


def max_entangled(d: int) -> BipartiteDensity:
    if d < 2:
        raise ValueError("dimension must be at least 2")
    phi = np.eye(d).reshape(d * d) / np.sqrt(d)
    return BipartiteDensity(d, d, projector(phi))


def werner_state(p: float) -> BipartiteDensity:
    """``p |phi+><phi+| + (1-p) 1/4`` on two qubits."""
    if not 0 <= p <= 1:
        raise ValueError("Werner parameter must lie in [0, 1]")
    return BipartiteDensity(2, 2, p * max_entangled(2).matrix + (1 - p) * np.eye(4) / 4)


def pure_two_qubit(alpha: float) -> BipartiteDensity:
    """``sin(alpha)|00> + cos(alpha)|11>``."""
    psi = np.array([np.sin(alpha), 0, 0, np.cos(alpha)])
    return BipartiteDensity.from_vector(psi, 2, 2)


def product_state(psi_A, phi_B) -> BipartiteDensity:
    psi_A = np.asarray(psi_A, dtype=np.complex128)
    phi_B = np.asarray(phi_B, dtype=np.complex128)
    return BipartiteDensity.from_vector(np.kron(psi_A, phi_B), len(psi_A), len(phi_B))


@dataclass(frozen=True, eq=False)
class Assemblage:
    """``operators[a, x]``: Bob's subnormalized conditional state, prior included."""

    operators: np.ndarray

    @property
    def n_outcomes(self) -> int:
        return self.operators.shape[0]

    @property
    def n_settings(self) -> int:
        return self.operators.shape[1]

    @property
    def dim(self) -> int:
        return self.operators.shape[-1]

    def total_trace(self) -> float:
        return float(np.real(np.einsum("axii->", self.operators)))

    def is_valid(self, tol: float = DEFAULT_TOL) -> bool:
        ok = all(is_psd(s, tol) for s in self.operators.reshape(-1, self.dim, self.dim))
        return ok and abs(self.total_trace() - 1) <= tol


def assemblage_of(rho: BipartiteDensity, ens: MeasurementEnsemble) -> Assemblage:
    if rho.dim_A != ens.dim:
        raise ValueError(f"Alice's dimension {rho.dim_A} does not match the ensemble ({ens.dim})")
    r = rho.matrix.reshape(rho.dim_A, rho.dim_B, rho.dim_A, rho.dim_B)
    # Tr_A[(M (x) 1) rho]_{jl} = sum_{i,k} M_{ki} rho_{(ij),(kl)}
    ops = np.einsum("xaki,ijkl->axjl", ens.weighted(), r)
    ops = 0.5 * (ops + dagger(ops))
    return Assemblage(ops)


@dataclass(frozen=True)
class MinErrorResult:
    value: float
    povm: Povm
    dual_bound: float
    iterations: int
    converged: bool

    @property
    def gap(self) -> float:
        return self.dual_bound - self.value


@dataclass(frozen=True)
class SolverConfig:
    tol: float = 1e-8
    max_iter: int = 10_000
    floor: float = 1e-12


@dataclass(frozen=True)
class BValueReport:
    value: float
    method: str  # "exact-bob" | "helstrom" | "iterative"
    bob_povms: list[Povm] | None = field(default=None, repr=False)
    iterations: int = 0
    gap: float = 0.0
    dual_bound: float | None = None
    converged: bool = True

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "value": self.value,
            "gap": self.gap,
            "dual_bound": self.dual_bound,
            "iterations": self.iterations,
            "converged": self.converged,
        }


def _check_psd_input(s, name: str) -> np.ndarray:
    s = as_matrix(s)
    if not is_psd(s):
        raise ValueError(f"{name} is not positive semi-definite")
    return 0.5 * (s + dagger(s))


def helstrom_pair(s0, s1) -> MinErrorResult:
    """Optimal two-outcome discrimination of subnormalized ``s0`` and ``s1``:
    ``(Tr(s0 + s1) + ||s0 - s1||_1) / 2``.

    The optimal measurement projects onto the positive eigenspace of
    ``s0 - s1`` (outcome 0) and its complement (outcome 1).
    """
    s0 = _check_psd_input(s0, "s0")
    s1 = _check_psd_input(s1, "s1")
    if s0.shape != s1.shape:
        raise ValueError("operators have different dimensions")
    w, v = hermitian_eigen(s0 - s1)
    value = 0.5 * (float(np.real(np.trace(s0 + s1))) + float(np.sum(np.abs(w))))
    vp = v[:, w > 0]
    n0 = vp @ dagger(vp)
    n1 = np.eye(len(w)) - n0
    return MinErrorResult(value, Povm(np.array([n0, n1])), value, 0, True)


def _dual_bound(sigmas: np.ndarray, povm: np.ndarray) -> tuple[float, float]:
    """Primal value and a feasible dual value ``Tr Y`` with ``Y >= sigma_x``."""
    y = np.einsum("xij,xjk->ik", sigmas, povm)
    value = float(np.real(np.trace(y)))
    y = 0.5 * (y + dagger(y))
    shift = max(float(np.linalg.eigvalsh(s - y)[-1]) for s in sigmas)
    dual = float(np.real(np.trace(y))) + max(shift, 0.0) * y.shape[0]
    return value, dual


def min_error_discrimination(sigmas, cfg: SolverConfig | None = None) -> MinErrorResult:
    """Maximize ``sum_x Tr(sigma_x N_x)`` over POVMs ``{N_x}``.

    Two hypotheses use the Helstrom closed form. Otherwise the POVM starts
    at the pretty-good measurement and follows the fixed-point map
    ``N_x <- G^{-1/2} sigma_x N_x sigma_x G^{-1/2}`` with
    ``G = sum_y sigma_y N_y sigma_y``, stopping when the dual certificate
    closes to ``cfg.tol``.
    """
    cfg = cfg or SolverConfig()
    sigmas = np.asarray(sigmas, dtype=np.complex128)
    sigmas = 0.5 * (sigmas + dagger(sigmas))
    n, d, _ = sigmas.shape
    if n == 1:
        value = float(np.real(np.trace(sigmas[0])))
        return MinErrorResult(value, Povm(np.eye(d)[None]), value, 0, True)
    if n == 2:
        return helstrom_pair(sigmas[0], sigmas[1])

    def complete(povm):
        # Hand the part of the space no sigma touches to outcome 0.
        povm[0] += np.eye(d) - povm.sum(axis=0)
        return povm

    total = sigmas.sum(axis=0)
    root = psd_power(total, -0.5, cfg.floor)
    povm = complete(np.einsum("ij,xjk,kl->xil", root, sigmas, root))

    value, dual = _dual_bound(sigmas, povm)
    it = 0
    while dual - value > cfg.tol and it < cfg.max_iter:
        it += 1
        update = np.einsum("xij,xjk,xkl->xil", sigmas, povm, sigmas)
        g = psd_power(update.sum(axis=0), -0.5, cfg.floor)
        povm = np.einsum("ij,xjk,kl->xil", g, update, g)
        povm = complete(0.5 * (povm + dagger(povm)))
        value, dual = _dual_bound(sigmas, povm)
    return MinErrorResult(value, Povm(povm), dual, it, dual - value <= cfg.tol)


def b_value_with_bob(rho: BipartiteDensity, ens: MeasurementEnsemble, bob) -> BValueReport:
    """``sum_{x,a} p(x) Tr[rho (M[x, a] (x) N[a][x])]`` for given Bob POVMs."""
    bob = [b if isinstance(b, Povm) else Povm(b) for b in bob]
    if len(bob) != ens.n_outcomes:
        raise ValueError(f"need one Bob POVM per outcome ({ens.n_outcomes}), got {len(bob)}")
    for b in bob:
        if b.n_outcomes != ens.n_settings or b.dim != rho.dim_B:
            raise ValueError("each Bob POVM needs one outcome per setting on Bob's space")
    sig = assemblage_of(rho, ens).operators
    nb = np.array([b.elements for b in bob])  # [a, x]
    value = float(np.real(np.einsum("axij,axji->", sig, nb)))
    return BValueReport(value, "exact-bob", bob, dual_bound=None)


def b_value_optimal(rho: BipartiteDensity, ens: MeasurementEnsemble, cfg: SolverConfig | None = None) -> BValueReport:
    """Best value over all Bob measurements, solving each outcome separately."""
    cfg = cfg or SolverConfig()
    sig = assemblage_of(rho, ens).operators
    results = [min_error_discrimination(s, cfg) for s in sig]
    value = sum(r.value for r in results)
    dual = sum(r.dual_bound for r in results)
    return BValueReport(
        value=value,
        method="helstrom" if ens.n_settings <= 2 else "iterative",
        bob_povms=[r.povm for r in results],
        iterations=max(r.iterations for r in results),
        gap=dual - value,
        dual_bound=dual,
        converged=all(r.converged for r in results),
    )


def b_value_direct(rho: BipartiteDensity, ens: MeasurementEnsemble, bob) -> float:
    """Same quantity as :func:`b_value_with_bob`, by full tensor products."""
    total = 0.0
    for x in range(ens.n_settings):
        for a in range(ens.n_outcomes):
            op = np.kron(ens.elements[x, a], np.asarray(bob[a][x]))
            total += ens.priors[x] * float(np.real(np.trace(rho.matrix @ op)))
    return total


def concurrence_of_angle(alpha: float) -> float:
    return float(np.sin(2 * alpha))


def two_qubit_b_closed(alpha: float) -> float:
    """``(4 + sqrt(1 + 3 C^2)) / 6`` with ``C = sin(2 alpha)``."""
    if not 0 < alpha <= np.pi / 4 + 1e-15:
        raise ValueError("alpha must lie in (0, pi/4]")
    c = concurrence_of_angle(alpha)
    return (4 + np.sqrt(1 + 3 * c * c)) / 6


_SX = np.array([[0, 1], [1, 0]], dtype=np.complex128)
_SZ = np.diag([1.0, -1.0]).astype(np.complex128)


def two_qubit_optimal_bob(alpha: float) -> list[Povm]:
    """Bob's observables for the trine pair on ``sin(a)|00> + cos(a)|11>``.

    Outcome ``x`` of POVM ``a`` is the eigenvalue ``(-1)**x`` projector of
    ``sin t sx - cos t sz``, ``-sin t sx - cos t sz`` and ``sz`` for
    ``a = 0, 1, 2``, with ``sin t = sqrt(3) C / sqrt(1 + 3 C^2)``.
    """
    if not 0 < alpha <= np.pi / 4 + 1e-15:
        raise ValueError("alpha must lie in (0, pi/4]")
    c = concurrence_of_angle(alpha)
    s = np.sqrt(3) * c / np.sqrt(1 + 3 * c * c)
    co = np.sqrt(1 - s * s)
    observables = [s * _SX - co * _SZ, -s * _SX - co * _SZ, _SZ]
    eye = np.eye(2)
    return [Povm(np.array([(eye + o) / 2, (eye - o) / 2])) for o in observables]


@dataclass(frozen=True)
class WitnessVerdict:
    verdict: str  # "steerable-witnessed" | "inconclusive"
    b_value: float
    d_value: float
    margin: float
    b_report: BValueReport | None = field(default=None, repr=False)

    @property
    def gap(self) -> float:
        return self.b_value - self.d_value

    @property
    def steerable(self) -> bool:
        return self.verdict == "steerable-witnessed"

    def to_dict(self) -> dict:
        out = {
            "verdict": self.verdict,
            "B": self.b_value,
            "D": self.d_value,
            "gap": self.gap,
            "margin": self.margin,
        }
        if self.b_report is not None:
            out["b_report"] = self.b_report.to_dict()
        return out


def steering_witness(
    rho: BipartiteDensity,
    ens: MeasurementEnsemble,
    d_value: float,
    margin: float = 1e-4,
    cfg: SolverConfig | None = None,
) -> WitnessVerdict:
    """Flag ``rho`` as steerable when its entanglement-assisted value beats
    the single-system value ``d_value`` by more than ``margin``.

    States admitting a local-hidden-state model can never exceed the
    single-system value, so no violation proves nothing either way and is
    reported as inconclusive.
    """
    report = b_value_optimal(rho, ens, cfg)
    verdict = "steerable-witnessed" if report.value > d_value + margin else "inconclusive"
    return WitnessVerdict(verdict, report.value, float(d_value), margin, report)


def product_value(psi_A, ens: MeasurementEnsemble) -> float:
    """Single-system score of Alice's pure marginal (what a product state yields)."""
    return score_details(psi_A, ens)[0]
