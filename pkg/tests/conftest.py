import numpy as np
import pytest

from plotmap.mapindex import MapIndex
from plotmap.worldgen import MapGenConfig, generate_map


@pytest.fixture(scope="session")
def seed1_map():
    return generate_map(MapGenConfig(seed=1, cell_count=1000))


@pytest.fixture(scope="session")
def seed1_index(seed1_map):
    return MapIndex(seed1_map)


@pytest.fixture(scope="session")
def small_map():
    return generate_map(MapGenConfig(seed=3, cell_count=200))


@pytest.fixture(scope="session")
def small_index(small_map):
    return MapIndex(small_map)


@pytest.fixture()
def rng():
    return np.random.default_rng(0)
