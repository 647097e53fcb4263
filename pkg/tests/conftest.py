import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qclattice import presets


@pytest.fixture(scope="session")
def example1_bundle():
    return presets.example1()


@pytest.fixture(scope="session")
def wimax_bundle():
    return presets.wimax1152()
