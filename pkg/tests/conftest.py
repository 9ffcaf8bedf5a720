import math

import pytest

from twpasim import SnailParameters, operating_point

GHZ = 2.0 * math.pi * 1e9


@pytest.fixture(scope="session")
def device():
    """Measured device: 2.19 uA, r=0.07, 250 fF, 50 fF, 700 cells."""
    return SnailParameters(i0=2.19e-6, r=0.07, cg=250e-15, cj=50e-15, n_cells=700)


@pytest.fixture(scope="session")
def half_flux_op(device):
    return operating_point(device, math.pi)


@pytest.fixture(scope="session")
def zero_flux_op(device):
    return operating_point(device, 0.0)
