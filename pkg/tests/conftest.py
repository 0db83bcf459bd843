import numpy as np
import pytest

from spinrad import CutoffProfile, SpinSystem
from spinrad.fock import build_mode_grid


@pytest.fixture(scope="session")
def profile():
    return CutoffProfile("gaussian", 1.0)


@pytest.fixture(scope="session")
def two_spin_system():
    return SpinSystem(positions=[[0.0, 0.0, 0.0], [0.9, -0.3, 0.4]],
                      moments=[0.8, -0.5], s=0.5)


@pytest.fixture(scope="session")
def default_grid(profile):
    return build_mode_grid(profile, 24, 12)


@pytest.fixture(scope="session")
def small_grid(profile):
    return build_mode_grid(profile, 6, 6)


def random_state(rng, dim):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)
