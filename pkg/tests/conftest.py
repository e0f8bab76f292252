import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from wienerquad import atom, atoms_measure, density_measure, rho_comb, zero_measure


@pytest.fixture
def rho_one():
    return density_measure([0.0, 1.0], [1.0])


@pytest.fixture
def rho_pair():
    return atoms_measure([(0.5, 1.0), (0.75, -1.0)])


@pytest.fixture
def rho_zero():
    return zero_measure()


@pytest.fixture
def rho_comb4():
    return rho_comb(4)
