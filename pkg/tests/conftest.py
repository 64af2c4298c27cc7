import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=200)
settings.load_profile("default")


def random_joint_vector(rng, n_max):
    v = rng.normal(size=2 * (n_max + 1)) + 1j * rng.normal(size=2 * (n_max + 1))
    return v / np.linalg.norm(v)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)
