import numpy as np
import pytest

from mellinlat.quadrature import DEFAULT_CONFIG


@pytest.fixture
def rng():
    return np.random.default_rng(20260814)


@pytest.fixture
def cfg():
    return DEFAULT_CONFIG
