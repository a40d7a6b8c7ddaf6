import numpy as np
import pytest

from patcirc.forward import detector_signal
from patcirc.funkmink import FunkInverter
from patcirc.grids import SphereGrid, SphereTimeGrid
from patcirc.phantom import bundled_phantom


@pytest.fixture(scope="session")
def fig3():
    return bundled_phantom("fig3")


@pytest.fixture(scope="session")
def fig2():
    return bundled_phantom("fig2")


@pytest.fixture(scope="session")
def default_grid():
    return SphereTimeGrid()


@pytest.fixture(scope="session")
def fig3_data(fig3, default_grid):
    """Exact detector data of the smooth phantom on the 50 x 200 x 50 grid."""
    return detector_signal(fig3, default_grid)


@pytest.fixture(scope="session")
def default_inverter():
    return FunkInverter(SphereGrid())


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture(scope="session")
def fig3_rp(fig3, default_grid):
    """Numerical R_P data of the smooth phantom on the 50 x 200 x 50 grid."""
    from patcirc.forward import rp_numeric

    return rp_numeric(fig3, default_grid)
