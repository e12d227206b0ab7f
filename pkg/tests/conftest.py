import numpy as np
import pytest

from blisnet.zoo import graph_zoo


@pytest.fixture(scope="session")
def zoo():
    return graph_zoo()


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
