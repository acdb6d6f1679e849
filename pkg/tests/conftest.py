import numpy as np
import pytest

from wigweyl.phase_space import SUBVACUUM_PARAMS, HYBRID_PARAMS


@pytest.fixture
def subvac():
    return SUBVACUUM_PARAMS


@pytest.fixture
def hybrid():
    return HYBRID_PARAMS


@pytest.fixture
def rng():
    return np.random.default_rng(20251016)
