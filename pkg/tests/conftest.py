import numpy as np
import pytest

from measdisc.measurements import MeasurementEnsemble

_ACCEPTANCE = []


def random_matrix(rng, d, d2=None):
    d2 = d if d2 is None else d2
    return rng.normal(size=(d, d2)) + 1j * rng.normal(size=(d, d2))


def random_hermitian(rng, d):
    a = random_matrix(rng, d)
    return (a + a.conj().T) / 2


def random_density(rng, d, rank=None):
    a = random_matrix(rng, d, rank or d)
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def random_unitary(rng, d):
    q, r = np.linalg.qr(random_matrix(rng, d))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_state(rng, d):
    v = random_matrix(rng, d, 1).ravel()
    return v / np.linalg.norm(v)


def random_povm(rng, d, m):
    """Random POVM built as S^{-1/2} A_a S^{-1/2} from random positive A_a."""
    parts = []
    for _ in range(m):
        a = random_matrix(rng, d, rng.integers(1, d + 1))
        parts.append(a @ a.conj().T)
    s = sum(parts)
    w, v = np.linalg.eigh(s)
    root = v @ np.diag(w ** -0.5) @ v.conj().T
    return np.array([root @ p @ root for p in parts])


def random_ensemble(rng, d, n, m, uniform=True):
    povms = np.array([random_povm(rng, d, m) for _ in range(n)])
    if uniform:
        priors = None
    else:
        priors = rng.dirichlet(np.ones(n))
    return MeasurementEnsemble(povms, priors)


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): exit criterion")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("acceptance")
    if marker is None or call.when != "call":
        return
    number, title = marker.args
    _ACCEPTANCE.append((number, title, call.excinfo is None))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    merged = {}
    for number, title, ok in _ACCEPTANCE:
        prev = merged.get(number, (title, True))
        merged[number] = (title, prev[1] and ok)
    for number in sorted(merged):
        title, ok = merged[number]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {number:>2}: {title}")
