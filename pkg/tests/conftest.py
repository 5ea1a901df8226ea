import numpy as np
import pytest

from mslab import InnerFunction, circle_grid


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def z2():
    return InnerFunction.monomial(2)


@pytest.fixture(scope="session")
def grid256():
    return circle_grid(256)
