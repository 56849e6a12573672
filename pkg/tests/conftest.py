from pathlib import Path

import numpy as np
import pytest

from utils.sysfile import load_system

SYSTEMS = Path(__file__).resolve().parent.parent / "systems"


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def swing1_path():
    return SYSTEMS / "swing1.sys"


@pytest.fixture
def swing2_path():
    return SYSTEMS / "swing2.sys"


@pytest.fixture
def swing1(swing1_path):
    return load_system(swing1_path)


@pytest.fixture
def swing2(swing2_path):
    return load_system(swing2_path)
