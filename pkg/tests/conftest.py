import os

import numpy as np
import pytest

DEFAULT_SEED = 20240611


@pytest.fixture
def seed() -> int:
    return int(os.environ.get("SYMSEP_SEED", DEFAULT_SEED))


@pytest.fixture
def rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)
