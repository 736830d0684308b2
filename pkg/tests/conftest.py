import numpy as np
import pytest


def unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def random_direction(rng):
    """Uniform unit vector on the sphere."""
    while True:
        v = rng.normal(size=3)
        norm = np.linalg.norm(v)
        if norm > 1e-6:
            return v / norm


def random_beta(rng, max_mag=0.999):
    """Velocity with uniform speed in [0, max_mag] and uniform direction."""
    return rng.uniform(0.0, max_mag) * random_direction(rng)


@pytest.fixture
def rng():
    return np.random.default_rng(20230823)
