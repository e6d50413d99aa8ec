import math

import numpy as np
import pytest

from kerrsnr.cascaded import (
    CascadedModel,
    StepSizeFailureError,
    initial_state,
    partial_trace_cavity,
    simulate_ensemble,
    simulate_trajectory,
    unconditional_evolve,
)
from kerrsnr.fock import default_grid, evolve_hierarchy
from kerrsnr.params import SystemParams, TimeGrid
from kerrsnr.pulses import PulseShape


@pytest.fixture(scope="module")
def short_grid():
    return TimeGrid(dt=2e-3, n_steps=2500)  # T = 5


def test_initial_states():
    r0 = initial_state(0)
    r1 = initial_state(1)
    assert np.trace(r0) == pytest.approx(1.0)
    assert r0[0, 0] == 1.0           # |0> (x) |a>
    assert r1[3, 3] == 1.0           # |1> (x) |a>
    with pytest.raises(ValueError):
        initial_state(2)


def test_partial_trace(rng):
    m = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    rho = m @ m.conj().T
    rho /= np.trace(rho)
    red = partial_trace_cavity(rho)
    assert red.shape == (3, 3)
    assert np.trace(red) == pytest.approx(1.0)


def test_generator_preserves_trace(fig_params):
    model = CascadedModel.plain(fig_params)
    assert np.max(np.abs(np.eye(6).ravel() @ model.ldet)) < 1e-10


def test_unconditional_matches_hierarchy(fig_params):
    """The source-cavity representation and the envelope hierarchy describe
    the same physics for an exponential one-photon wave packet."""
    pulse = PulseShape.exponential(fig_params.gamma_con)
    grid = default_grid(pulse, dt=2e-3)
    evo = evolve_hierarchy(fig_params, pulse, grid)
    _, _, y_cascaded = unconditional_evolve(fig_params, grid, n_photon=1)
    assert np.abs(evo.y - y_cascaded).max() < 1e-6


def test_trajectory_is_deterministic_in_seed(fig_params, short_grid):
    a = simulate_trajectory(fig_params, short_grid, seed=42, n_photon=1)
    b = simulate_trajectory(fig_params, short_grid, seed=42, n_photon=1)
    c = simulate_trajectory(fig_params, short_grid, seed=43, n_photon=1)
    assert a.signal == b.signal
    assert np.array_equal(a.j_samples, b.j_samples)
    assert a.signal != c.signal


def test_current_integrates_to_signal(fig_params, short_grid):
    rec = simulate_trajectory(fig_params, short_grid, seed=7, n_photon=1)
    assert rec.signal == pytest.approx(
        float(rec.j_samples.sum() * short_grid.dt), rel=1e-12
    )


def test_ensemble_split_concat_identity(fig_params, short_grid):
    whole = simulate_ensemble(fig_params, short_grid, 6, base_seed=100, n_photon=1)
    left = simulate_ensemble(fig_params, short_grid, 3, base_seed=100, n_photon=1)
    right = simulate_ensemble(fig_params, short_grid, 3, base_seed=103, n_photon=1)
    assert np.array_equal(whole.values, np.concatenate([left.values, right.values]))


def test_ensemble_chunking_invariance(fig_params, short_grid):
    a = simulate_ensemble(fig_params, short_grid, 5, 0, n_photon=0, chunk_size=2)
    b = simulate_ensemble(fig_params, short_grid, 5, 0, n_photon=0, chunk_size=500)
    assert np.array_equal(a.values, b.values)


def test_vacuum_noise_calibration(fig_params):
    grid = TimeGrid(dt=2e-3, n_steps=5000)  # T = 10
    s0 = simulate_ensemble(fig_params, grid, 200, base_seed=2024, n_photon=0)
    t_final = grid.t_final
    # Wiener sums: mean ~ 0 with SE sqrt(T/n); variance ~ T
    assert abs(s0.wiener_sums.mean()) < 4.0 * math.sqrt(t_final / 200)
    assert s0.wiener_sums.var(ddof=1) == pytest.approx(t_final, rel=0.35)
    # vacuum signal is a martingale: E[S0] ~ 0
    se = s0.values.std(ddof=1) / math.sqrt(200)
    assert abs(s0.values.mean()) < 4.0 * se


def test_conditional_polarisation_bounded(fig_params, short_grid):
    s1 = simulate_ensemble(fig_params, short_grid, 20, base_seed=5, n_photon=1)
    assert s1.max_abs_y <= math.sqrt(fig_params.gamma_c)


def test_absurd_step_size_fails_loudly(fig_params):
    grid = TimeGrid(dt=0.5, n_steps=1000)
    with pytest.raises(StepSizeFailureError):
        simulate_ensemble(fig_params.with_(beta=1.2), grid, 4,
                          base_seed=1, n_photon=1)


def test_ensemble_requires_two_trajectories(fig_params, short_grid):
    with pytest.raises(ValueError):
        simulate_ensemble(fig_params, short_grid, 1, 0, n_photon=1)
