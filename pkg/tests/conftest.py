import pytest

from src.core.params import PhysicalParams
from src.physics.planewave import BasisSpec


@pytest.fixture
def unit():
    """m = c = Z = 1"""
    return PhysicalParams(m=1.0, c=1.0, Z=1.0)


@pytest.fixture
def free():
    return PhysicalParams(m=1.0, c=1.0, Z=0.0)


@pytest.fixture
def basis():
    return BasisSpec(L=10.0, Lambda=50.0)
