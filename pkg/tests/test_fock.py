import math

import numpy as np
import pytest

from kerrsnr.fock import (
    B00,
    B01,
    B10,
    B11,
    FockHierarchy,
    IntegrationFailureError,
    default_grid,
    evolve_hierarchy,
    expected_signal,
)
from kerrsnr.params import SystemParams, TimeGrid
from kerrsnr.pulses import PulseShape
from kerrsnr.qutrit import validate_density_matrix


def test_hierarchy_vector_roundtrip():
    h = FockHierarchy.ground()
    v = h.to_vec()
    assert v.shape == (36,)
    back = FockHierarchy.from_vec(v)
    assert np.allclose(back.rho11, h.rho11)
    # the four slices partition the vector
    assert [s.stop - s.start for s in (B00, B01, B10, B11)] == [9, 9, 9, 9]


def test_default_grid_covers_pulse_and_ringdown(fig_pulse):
    grid = default_grid(fig_pulse, dt=1e-3)
    # capture horizon of exp pulse at eps=e^-10 is 10/gamma_con, plus ringdown 5
    assert grid.t_final == pytest.approx(10.0 / 0.6672 + 5.0, abs=2e-3)


def test_vacuum_block_is_stationary(fig_evolution):
    rho00_0 = fig_evolution.states[0][B00]
    rho00_T = fig_evolution.states[-1][B00]
    assert np.allclose(rho00_0, rho00_T, atol=1e-12)


def test_physical_block_stays_a_density_matrix(fig_evolution):
    for k in (0, len(fig_evolution.times) // 2, -1):
        validate_density_matrix(fig_evolution.states[k][B11].reshape(3, 3))


def test_coherence_block_traceless(fig_evolution):
    traces = [abs(v[B01].reshape(3, 3).trace()) for v in fig_evolution.states]
    assert max(traces) < 1e-8


def test_polarisation_transient(fig_evolution):
    y = fig_evolution.y
    assert y[0] == 0.0
    assert y.max() > 0.1           # photon drives the probe quadrature
    assert abs(y[-1]) < 1e-2       # and it rings back down
    assert np.argmax(y) not in (0, len(y) - 1)


def test_expected_signal_positive_and_bounded(fig_params, fig_pulse, coarse_grid):
    s = expected_signal(fig_params, fig_pulse, coarse_grid)
    bound = math.sqrt(fig_params.gamma_c) * coarse_grid.t_final
    assert 0.0 < s < bound


def test_zero_probe_gives_zero_signal(fig_pulse, coarse_grid):
    p = SystemParams(gamma_con=0.6672, beta=0.0)
    evo = evolve_hierarchy(p, fig_pulse, coarse_grid)
    assert np.max(np.abs(evo.y)) < 1e-14


def test_step_halving_order_at_least_3_5(fig_params, fig_pulse):
    ref = evolve_hierarchy(fig_params, fig_pulse, TimeGrid.from_duration(16.0, 0.0125))
    errs = []
    for dt in (0.4, 0.2):
        e = evolve_hierarchy(fig_params, fig_pulse, TimeGrid.from_duration(16.0, dt))
        errs.append(np.abs(e.states[-1] - ref.states[-1]).max())
    assert math.log2(errs[0] / errs[1]) >= 3.5


def test_unstable_step_size_raises(fig_params, fig_pulse):
    grid = TimeGrid(dt=5.0, n_steps=20)
    with pytest.raises(IntegrationFailureError):
        evolve_hierarchy(fig_params.with_(beta=1.2), fig_pulse, grid)


def test_gaussian_pulse_runs(fig_params):
    pulse = PulseShape.gaussian(fig_params.gamma_con)
    evo = evolve_hierarchy(fig_params, pulse, default_grid(pulse, dt=4e-3))
    assert float(np.trapezoid(evo.y, evo.times)) > 0.0
