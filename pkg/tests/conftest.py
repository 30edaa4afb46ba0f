import numpy as np
import pytest

from magweyl.magfield import FieldSpec, transversal_gauge
from magweyl.phasespace import PhaseGrid


@pytest.fixture
def grid8():
    return PhaseGrid(2, 8, 6.0)


@pytest.fixture
def field1():
    return FieldSpec(2, "constant", b=1.0)


@pytest.fixture
def pot1(field1):
    return transversal_gauge(field1)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
