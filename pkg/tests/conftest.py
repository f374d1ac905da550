import numpy as np
import pytest

from spinholonomy.gates_lab import catalog_entry, rotation_curve
from spinholonomy.grassmann import KPlane

SPINS = [0.5, 1, 1.5, 2, 2.5, 3, 5]


@pytest.fixture(scope="session")
def pi_not() -> KPlane:
    return catalog_entry("pi_not").plane


@pytest.fixture(scope="session")
def pi_cnot() -> KPlane:
    return catalog_entry("pi_cnot").plane


@pytest.fixture(scope="session")
def chi() -> np.ndarray:
    return catalog_entry("chi").state


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_plane(rng, twice_s, k) -> KPlane:
    from spinholonomy.grassmann import plane_from_kets

    n = twice_s + 1
    kets = rng.normal(size=(k, n)) + 1j * rng.normal(size=(k, n))
    return plane_from_kets(twice_s / 2, kets)


def random_unitary(rng, n) -> np.ndarray:
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))[None, :]


def not_curve(steps=2001):
    return rotation_curve([0.0, 1.0, 0.0], np.pi, steps)
