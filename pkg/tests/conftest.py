import numpy as np
import pytest

from paratorus import PeriodicGrid


@pytest.fixture
def grid64():
    return PeriodicGrid(64)


@pytest.fixture
def grid128():
    return PeriodicGrid(128)


@pytest.fixture
def grid256():
    return PeriodicGrid(256)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
