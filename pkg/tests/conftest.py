import numpy as np
import pytest

from qig.channels import random_density
from qig.families import PAULI_Z, bloch_rotation_point
from qig.states import DensityMatrix, FamilyPoint


@pytest.fixture
def bloch_point():
    """Rotation family at r = 0.8, theta = 0: J^S = 0.64, J^R = 16/9."""
    return bloch_rotation_point(0.8, 0.0)


@pytest.fixture
def sigma_z_point():
    """rho = (I + theta sigma_z)/2 at theta = 0; commuting classical case."""
    return FamilyPoint([0.0], DensityMatrix(0.5 * np.eye(2)), [0.5 * PAULI_Z])


def random_qubit_pair(seed):
    """Two independent full-rank qubit states from one seeded generator."""
    rng = np.random.default_rng(seed)
    return random_density(2, rng), random_density(2, rng)


def commuting_point(probs, dprobs):
    """Diagonal family point from classical data."""
    dprobs = np.asarray(dprobs, dtype=float)
    return FamilyPoint(
        [0.0], DensityMatrix(np.diag(probs).astype(complex)), [np.diag(dprobs).astype(complex)]
    )
