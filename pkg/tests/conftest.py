import numpy as np
import pytest

from asrrkit.validate import Fixture


@pytest.fixture
def fx():
    """Reconstructed 200 GHz reference pixel (C_total 11.7 fF, Q 10 -> 54)."""
    return Fixture()


@pytest.fixture
def rng():
    return np.random.default_rng(988)
