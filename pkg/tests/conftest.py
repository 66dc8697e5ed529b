import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("gkspin", deadline=None, max_examples=25)
settings.load_profile("gkspin")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
