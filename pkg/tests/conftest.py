import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # makes `oracles` importable

from altismooth import jason2_like


@pytest.fixture(scope="session")
def consts():
    return jason2_like()
