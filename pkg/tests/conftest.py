"""
Shared fixtures for the interfem tests.
"""

import pytest

from interfem.src.analysis import ManufacturedSolution
from interfem.src.config import reset_config
from interfem.src.fem.orientation import reset_orientation
from interfem.src.mesh import generate_fitted_mesh


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: mesh ladders and full campaigns")


@pytest.fixture(autouse=True)
def clean_state():
    """Every test starts from the default configuration and the derived interface sign."""
    reset_config()
    reset_orientation()
    yield
    reset_config()
    reset_orientation()


@pytest.fixture
def ms1():
    return ManufacturedSolution.ms1()


@pytest.fixture
def ms1_mesh(ms1):
    return generate_fitted_mesh(ms1.partition, 0.1, seed=1234)
