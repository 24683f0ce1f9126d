import numpy as np
import pytest

from measdisc import constructions as C
from measdisc.matcore import is_unitary, kron
from measdisc.measurements import validate

from conftest import random_matrix


@pytest.mark.parametrize("d", [2, 3, 5])
def test_weyl_commutation(d):
    x, z = C.weyl_x(d), C.weyl_z(d)
    w = np.exp(2j * np.pi / d)
    assert np.allclose(z @ x, w * x @ z, atol=1e-13)
    assert np.allclose(np.linalg.matrix_power(x, d), np.eye(d), atol=1e-12)
    assert np.allclose(np.linalg.matrix_power(z, d), np.eye(d), atol=1e-12)


def test_weyl_index_convention():
    d = 3
    us = C.weyl_unitaries(d)
    x, z = C.weyl_x(d), C.weyl_z(d)
    assert np.allclose(us[2 * d + 1], x @ x @ z)
    assert np.allclose(C.weyl_unitary(0, 0, d), np.eye(d))


@pytest.mark.parametrize("d", [2, 3, 4])
def test_weyl_twirl(rng, d):
    """(1/d) sum_{k,l} U Xi U^dag = Tr(Xi) I, checked by an explicit loop."""
    for _ in range(5):
        xi = random_matrix(rng, d)
        acc = np.zeros((d, d), dtype=complex)
        for k in range(d):
            for l in range(d):
                u = np.linalg.matrix_power(C.weyl_x(d), k) @ np.linalg.matrix_power(C.weyl_z(d), l)
                acc += u @ xi @ u.conj().T
        assert np.allclose(acc / d, np.trace(xi) * np.eye(d), atol=1e-12)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_z_power_average(rng, d):
    """(1/d) sum_a Z^a Xi Z^-a keeps only the diagonal of Xi."""
    z = C.weyl_z(d)
    for _ in range(5):
        xi = random_matrix(rng, d)
        acc = sum(np.linalg.matrix_power(z, a) @ xi @ np.linalg.matrix_power(z, a).conj().T for a in range(d))
        assert np.allclose(acc / d, np.diag(np.diag(xi)), atol=1e-12)


def test_table1_bases_orthonormal():
    v = C.table1_vectors()
    for x in range(4):
        assert np.allclose(v[x].conj() @ v[x].T, np.eye(4), atol=1e-14)
    for a in range(4):
        assert np.allclose(v[:, a].conj() @ v[:, a].T, np.eye(4), atol=1e-14)


def test_table1_conditions():
    rep = C.check_theorem2_conditions(C.table1_bases())
    assert rep.satisfied
    assert rep.overlap < 1 - 1e-6


def test_conditions_reject_repeated_basis():
    e = C.Basis.computational(3)
    rep = C.check_theorem2_conditions([e, e, e])
    assert not rep.satisfied
    assert "condition 1" in rep.detail


def test_conditions_detect_shared_outcome_vectors():
    # Latin square with a constant column: every outcome pair shares a vector
    e = np.eye(2)
    rep = C.check_theorem2_conditions([e, e[::-1]])
    assert not rep.satisfied and "condition 2" in rep.detail


def test_basis_validation():
    with pytest.raises(ValueError):
        C.Basis([[1, 0], [1, 0]])
    b = C.Basis.from_unnormalized([[1, 1], [1, -1]])
    assert is_unitary(b.unitary())


def test_magic_basis_conditions():
    b = C.magic_qubit_basis()
    assert C.check_cond(b).satisfied
    assert C.check_ic_condition(b).satisfied
    with pytest.raises(ValueError):
        C.magic_qubit_basis(beta=np.pi / 4)


@pytest.mark.parametrize("d", [2, 3, 4, 8])
def test_ic_bases(d):
    b = C.ic_basis(d)
    assert C.check_ic_condition(b).satisfied
    assert C.check_cond(b).satisfied


def test_ic_basis_limits():
    with pytest.raises(ValueError):
        C.ic_basis(64)
    assert C.ic_basis(64, allow_unverified=True).dim == 64
    with pytest.raises(ValueError):
        C.ic_basis(5)


def test_computational_basis_fails_weyl_conditions():
    b = C.Basis.computational(3)
    assert not C.check_ic_condition(b).satisfied
    # X maps |i> to |i+1>, Z fixes |i>; displacement X^k Z^l with k != 0 still permutes
    assert not C.check_cond(b).satisfied


@pytest.mark.parametrize("d", [3, 4, 5, 6])
def test_displacement_free_basis(d):
    u = C.sarkar_unitary(d)
    assert is_unitary(u, 1e-12)
    b = C.sarkar_basis(d)
    assert C.check_cond(b).satisfied
    # no eigenvector is shared with X or Z (eigenvectors found independently)
    for g in (C.weyl_x(d), C.weyl_z(d)):
        _, w = np.linalg.eig(g)
        w /= np.linalg.norm(w, axis=0)
        assert np.abs(w.conj().T @ b.vectors.T).max() < 1 - 1e-6


def test_displacement_free_unitary_d2_is_minus_x():
    u = C.sarkar_unitary(2)
    assert np.allclose(u, -C.weyl_x(2), atol=1e-15)
    # its eigenbasis is the X eigenbasis, so some displacement fixes it
    assert not C.check_cond(C.sarkar_basis(2)).satisfied


@pytest.mark.parametrize("d", [2, 3, 4])
def test_weyl_ensemble_valid(d):
    ens = C.weyl_covariant_povm_ensemble(C.ic_basis(d) if d != 3 else C.ic_basis_d3())
    assert validate(ens).ok
    assert ens.n_settings == d and ens.n_outcomes == d * d


@pytest.mark.parametrize("d", [2, 3, 4])
def test_dplus1_examples(d):
    b = C.example_basis_dplus1(d)
    assert C.check_condd1(b).satisfied
    ens = C.dplus1_povm_ensemble(b)
    cert = validate(ens)
    assert cert.ok and cert.max_completeness_residual < 1e-12
    assert ens.n_outcomes == d + 1


def test_dplus1_rejects_bad_basis():
    with pytest.raises(ValueError, match="magnitude"):
        C.dplus1_povm_ensemble(C.Basis.computational(3))
    bad = C.dplus1_povm_ensemble(C.Basis.from_unnormalized([[1, 1], [1, -1]]), check=False)
    assert not validate(bad).ok


def test_trine_equals_dplus1_d2():
    assert C.trine_pair_ensemble().allclose(C.dplus1_povm_ensemble(C.example_basis_dplus1(2)), atol=1e-14)


@pytest.mark.parametrize("kind,basis", [
    ("table1", None),
    ("weyl", C.ic_basis(2)),
    ("weyl", C.ic_basis_d3()),
    ("dplus1", C.example_basis_dplus1(3)),
])
def test_proof_bob_are_povms(kind, basis):
    for povm in C.proof_bob_measurements(kind, basis):
        assert povm.is_valid()


def test_transpose_bob_matches_proof():
    b = C.example_basis_dplus1(4)
    ens = C.dplus1_povm_ensemble(b)
    ours = C.transpose_bob_measurements(ens)
    ref = C.proof_bob_measurements("dplus1", b)
    for p, q in zip(ours, ref):
        assert np.allclose(p.elements, q.elements, atol=1e-12)


def test_proof_bob_unknown_kind():
    with pytest.raises(ValueError):
        C.proof_bob_measurements("nope")


def test_tensor_power_basis():
    b = C.magic_qubit_basis()
    t = C.tensor_power_basis(b, 2)
    assert np.allclose(t.vectors[1], np.kron(b.vectors[0], b.vectors[1]))


def test_random_search_small():
    for d in (2, 3):
        out = C.appendix_search(d, trials=300, seed=1)
        assert out["satisfying"] == 0
        assert sum(out["by_family"].values()) == 300
    with pytest.raises(ValueError):
        C.appendix_search(4, trials=1)


@pytest.mark.parametrize("d", [2, 3])
def test_search_candidates_satisfy_orthogonality(d):
    rng = np.random.default_rng(3)
    for family in ("haar", "layout", "permutation"):
        vecs = C._appendix_candidate(d, family, rng)
        if family != "layout":
            for x in range(d):
                assert np.allclose(vecs[x].conj() @ vecs[x].T, np.eye(d), atol=1e-12)
        if family != "haar":
            for a in range(d):
                assert np.allclose(vecs[:, a].conj() @ vecs[:, a].T, np.eye(d), atol=1e-12)
