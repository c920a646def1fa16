import numpy as np
import pytest
from hypothesis import settings

from hardylab.functions import RadialSchedule
from hardylab.quadrature import make_grid

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def grid4096():
    return make_grid(4096)


@pytest.fixture(scope="session")
def grid1024():
    return make_grid(1024)


@pytest.fixture(scope="session")
def schedule():
    return RadialSchedule.dyadic()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def disk_points(rng, n, rmax=0.95):
    r = rmax * np.sqrt(rng.uniform(size=n))
    return r * np.exp(2j * np.pi * rng.uniform(size=n))
