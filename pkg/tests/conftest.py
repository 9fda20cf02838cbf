import numpy as np
import pytest

from vdpsync import ModelParams

FIG1A = dict(delta=0.1, omega=1.0, eta=0.0, gamma1=1.0, gamma2=100.0, kappa=0.0, dim=20)
DEEP_UNDRIVEN = dict(delta=0.0, omega=0.0, eta=0.0, gamma1=1.0, gamma2=1000.0, kappa=0.0, dim=20)


def random_density_matrix(rng, dim, rank=None):
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_matrix(rng, dim):
    return rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))


def lindblad_rhs_direct(p, rho):
    """Right-hand side of the master equation from matrix products only."""
    n = p.dim
    a = np.diag(np.sqrt(np.arange(1, n)), 1).astype(complex)
    ad = a.conj().T
    h = p.delta * ad @ a + p.omega * (a + ad) + p.eta * (a @ a + ad @ ad)

    def d(jump):
        jd = jump.conj().T
        return jump @ rho @ jd - 0.5 * (jd @ jump @ rho + rho @ jd @ jump)

    return -1j * (h @ rho - rho @ h) + p.gamma1 * d(ad) + p.gamma2 * d(a @ a) + p.kappa * d(a)


@pytest.fixture
def rng():
    return np.random.default_rng(20201015)


@pytest.fixture
def fig1a():
    return ModelParams(**FIG1A)


@pytest.fixture
def deep_undriven():
    return ModelParams(**DEEP_UNDRIVEN)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
