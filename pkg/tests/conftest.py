# tests/conftest.py

import numpy as np
import pytest

from systems.exdc import exdc_theta
from utils.math_utils import random_complex_matrix, random_unitary


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def generic_z():
    return np.exp(1j * np.pi / 7)


@pytest.fixture
def exdc_half():
    return exdc_theta(0.5)


@pytest.fixture
def random_normal(rng):
    """theta = U diag(lambda) U^† con autovalores complejos."""
    def make(d):
        U = random_unitary(d, rng)
        ev = random_complex_matrix(d, rng, cols=1)[:, 0]
        return U @ np.diag(ev) @ np.conj(U).T
    return make
