# Third-Party Library
import pytest
import matplotlib
from loguru import logger
from hypothesis import HealthCheck, settings

matplotlib.use("Agg")

# My Library
from model.theory import load_catalog
from utils.helper import Bounds


settings.register_profile("distlaw", max_examples=60, derandomize=True, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("distlaw")


@pytest.fixture(autouse=True)
def quiet_logger():
    """keep loguru's stderr sink out of the test output"""
    logger.remove()
    yield
    logger.remove()


@pytest.fixture(scope="session")
def bounds() -> Bounds:
    return Bounds()


@pytest.fixture(scope="session")
def catalog():
    return load_catalog
