import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from measdisc import constructions as C
from measdisc.measurements import MeasurementEnsemble
from measdisc.single_system import (
    HypersphereParams,
    OptimizerConfig,
    grid_oracle_d,
    optimize_d,
    restart_rng,
    score,
    score_batch,
    score_details,
    state_from_params,
    states_from_angles,
    trine_d_closed_form,
)

from conftest import random_ensemble, random_state


def test_state_parameterization_d2_d3():
    psi = state_from_params(HypersphereParams([0.3], [1.1]))
    assert np.allclose(psi, [np.cos(0.3), np.sin(0.3) * np.exp(1.1j)])
    psi = state_from_params(HypersphereParams([0.3, 0.7], [0.2, 0.5]))
    expected = [np.cos(0.3), np.sin(0.3) * np.cos(0.7) * np.exp(0.2j), np.sin(0.3) * np.sin(0.7) * np.exp(0.5j)]
    assert np.allclose(psi, expected)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), d=st.integers(2, 8))
def test_parameterized_states_are_unit(seed, d):
    rng = np.random.default_rng(seed)
    x = rng.uniform(-10, 10, size=2 * (d - 1))
    psi = state_from_params(HypersphereParams.from_vector(x))
    assert abs(np.linalg.norm(psi) - 1) < 1e-14


def test_params_round_trip_and_wrap():
    p = HypersphereParams([2.0, -0.1], [7.0, -1.0])
    assert np.array_equal(HypersphereParams.from_vector(p.as_vector()).as_vector(), p.as_vector())
    w = p.wrapped()
    assert np.all((w.thetas >= 0) & (w.thetas <= np.pi / 2))
    assert np.all((w.nus >= 0) & (w.nus < 2 * np.pi))
    with pytest.raises(ValueError):
        HypersphereParams([0.1, 0.2], [0.3])


def test_batch_matches_single(rng):
    ens = random_ensemble(rng, 3, 3, 4, uniform=False)
    states = np.array([random_state(rng, 3) for _ in range(20)])
    assert np.allclose(score_batch(states, ens), [score(s, ens) for s in states], atol=1e-14)
    angles = rng.uniform(0, 3, size=(5, 2))
    batch = states_from_angles(angles, angles[:, ::-1])
    assert batch.shape == (5, 3)


def test_score_computational_basis():
    # every measurement is the computational basis: perfect only if d = 1 setting
    e = np.eye(2)
    proj = np.array([np.diag(e[0]), np.diag(e[1])])
    ens = MeasurementEnsemble(np.array([proj, proj]))
    assert score([1, 0], ens) == pytest.approx(0.5)
    value, guess = score_details([1, 0], ens)
    assert list(guess) == [0, 0]  # ties to the lowest setting


def test_score_global_phase_invariance(rng):
    ens = C.table1_projective_ensemble()
    psi = random_state(rng, 4)
    assert score(np.exp(0.7j) * psi, ens) == pytest.approx(score(psi, ens), abs=1e-15)


def test_score_dimension_mismatch():
    with pytest.raises(ValueError):
        score([1, 0, 0], C.trine_pair_ensemble())


def test_trine_closed_form_against_score():
    ens = C.trine_pair_ensemble()
    for delta in np.linspace(0, np.pi / 4, 41):
        psi = np.array([np.sin(delta), np.cos(delta)])
        assert score(psi, ens) == pytest.approx(trine_d_closed_form(delta), abs=1e-13)
    with pytest.raises(ValueError):
        trine_d_closed_form(1.0)


def test_optimize_trine():
    rep = optimize_d(C.trine_pair_ensemble(), OptimizerConfig(restarts=10))
    assert rep.value == pytest.approx(5 / 6, abs=1e-8)
    assert rep.restarts_used == 10 and len(rep.restart_values) == 10
    assert rep.spread >= 0
    assert score(rep.best_state, C.trine_pair_ensemble()) == rep.value
    assert set(rep.to_dict()) >= {"value", "best_state", "argmax_map"}


def test_optimize_deterministic():
    ens = C.weyl_covariant_povm_ensemble(C.ic_basis_d3())
    a = optimize_d(ens, OptimizerConfig(restarts=4, seed=7))
    b = optimize_d(ens, OptimizerConfig(restarts=4, seed=7))
    assert a.value == b.value and np.array_equal(a.best_state, b.best_state)


def test_restart_streams_independent():
    x = restart_rng(3, 0).random(4)
    y = restart_rng(3, 1).random(4)
    assert not np.allclose(x, y)
    assert np.array_equal(x, restart_rng(3, 0).random(4))


def test_default_restarts():
    assert OptimizerConfig().restarts_for(4) == 150
    assert OptimizerConfig(restarts=3).restarts_for(4) == 3


def test_value_bounds(rng):
    """1/n <= D <= 1 for any ensemble with uniform priors."""
    for _ in range(3):
        ens = random_ensemble(rng, 2, 3, 3)
        value = optimize_d(ens, OptimizerConfig(restarts=5)).value
        assert 1 / 3 - 1e-12 <= value <= 1 + 1e-12


def test_optimum_beats_random_states(rng):
    ens = C.table1_projective_ensemble()
    value = optimize_d(ens, OptimizerConfig(restarts=30)).value
    states = np.array([random_state(rng, 4) for _ in range(2000)])
    assert score_batch(states, ens).max() <= value + 1e-9


def test_grid_oracle():
    assert grid_oracle_d(C.trine_pair_ensemble(), 400) == pytest.approx(5 / 6, abs=1e-4)
    with pytest.raises(ValueError):
        grid_oracle_d(C.table1_projective_ensemble())


def test_one_dimensional_ensemble():
    ens = MeasurementEnsemble(np.ones((2, 1, 1, 1)))
    rep = optimize_d(ens)
    assert rep.value == pytest.approx(0.5)
