import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

import helpers  # noqa: E402


@pytest.fixture
def golden():
    return helpers.golden_channel()


@pytest.fixture
def rng():
    return np.random.default_rng(20240913)
