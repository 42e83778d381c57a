import functools

import pytest

from tvspec.elliptic import make_lattice
from tvspec.hill import make_problem


@functools.lru_cache(maxsize=32)
def lattice(tau):
    return make_lattice(tau)


@functools.lru_cache(maxsize=16)
def problem(tau, n):
    return make_problem(lattice(tau), n)


@pytest.fixture(scope="session")
def lat_i():
    return lattice(1j)


@pytest.fixture(scope="session")
def lat_13i():
    return lattice(1.3j)


@pytest.fixture(scope="session")
def lat_generic():
    return lattice(0.31 + 1.12j)
