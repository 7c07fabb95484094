import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("horoxform", derandomize=True, deadline=None, max_examples=60, print_blob=True)
settings.load_profile("horoxform")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_unit(rng, n):
    w = rng.normal(size=n)
    return w / np.linalg.norm(w)


def rel_err(a, b):
    return abs(a - b) / abs(b)
