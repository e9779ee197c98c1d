import numpy as np
import pytest

from aniso_spectra import geometry


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def unit_square():
    return geometry.unit_square()


@pytest.fixture
def hexagon():
    return geometry.regular_polygon(6, 0.8)
