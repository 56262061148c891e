import numpy as np
import pytest
from hypothesis import settings

from lfequad import WindowConfig, build_reference

settings.register_profile("ci", deadline=None, max_examples=60)
settings.load_profile("ci")


@pytest.fixture(scope="session")
def config():
    return WindowConfig()


@pytest.fixture(scope="session")
def factors(config):
    return build_reference(config)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
