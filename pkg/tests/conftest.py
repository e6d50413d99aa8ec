import numpy as np
import pytest

from kerrsnr.fock import default_grid, evolve_hierarchy
from kerrsnr.params import SystemParams
from kerrsnr.pulses import PulseShape


@pytest.fixture(scope="session")
def fig_params():
    """Working point used by most figure-style checks."""
    return SystemParams(gamma_b=1.0, gamma_c=2.0, gamma_con=0.6672, beta=0.4)


@pytest.fixture(scope="session")
def fig_pulse(fig_params):
    return PulseShape.exponential(fig_params.gamma_con)


@pytest.fixture(scope="session")
def coarse_grid(fig_pulse):
    # 4x the production step; plenty for RK4 at these rates, 4x faster tests
    return default_grid(fig_pulse, dt=4e-3)


@pytest.fixture(scope="session")
def fig_evolution(fig_params, fig_pulse, coarse_grid):
    return evolve_hierarchy(fig_params, fig_pulse, coarse_grid)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
