import sys
from pathlib import Path

import pytest

# Add the project root to Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from models.entities import SpectrumInterval  # noqa: E402
from services.matfun import make_rng, random_spd  # noqa: E402

FIXTURES = project_root / "data" / "fixtures"


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def rng():
    return make_rng(42)


@pytest.fixture
def spd_pair(rng):
    """Factory for two seeded strictly positive matrices"""
    def make(dim=3, lo=0.1, hi=10.0):
        spectrum = SpectrumInterval(lo=lo, hi=hi)
        return random_spd(dim, spectrum, rng), random_spd(dim, spectrum, rng)
    return make
