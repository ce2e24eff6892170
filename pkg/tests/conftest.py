import os

import numpy as np
import pytest

# One seed for every randomized property test; override to shake the suite.
SEED = int(os.environ.get("POVM_PURITY_SEED", "271828"))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(SEED)
