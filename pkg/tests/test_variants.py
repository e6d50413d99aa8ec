import math

import numpy as np
import pytest

from kerrsnr.cascaded import CascadedModel
from kerrsnr.fock import default_grid
from kerrsnr.params import SystemParams, TimeGrid
from kerrsnr.pulses import PulseShape
from kerrsnr.variants import (
    DegenerateDressingError,
    FourLevelParams,
    LadderReduction,
    SingularParameterError,
    SqueezeParams,
    TransmissionVariant,
    ensemble_rescaled_params,
    four_level_populations,
    four_level_reduce,
    ratio_sweep,
    snr_cascade,
    snr_squeezed,
    squeezed_model,
    transmission,
    variance_regression_cascaded,
)


# --- squeezed probe ---------------------------------------------------------


def test_squeeze_params_identities():
    sq = SqueezeParams(r=0.0)
    assert sq.n_th == 0.0 and sq.m_coh == 0.0 and sq.l_factor == 1.0
    sq = SqueezeParams(r=0.7, theta=0.0)
    assert sq.l_factor == pytest.approx(math.exp(2 * 0.7), rel=1e-12)
    sq_pi = SqueezeParams(r=0.7, theta=math.pi)
    assert sq_pi.l_factor == pytest.approx(math.exp(-2 * 0.7), rel=1e-12)
    assert SqueezeParams(r=1.0).r_db == pytest.approx(20.0 / math.log(10.0))
    with pytest.raises(ValueError):
        SqueezeParams(r=-0.1)


@pytest.mark.parametrize("r", [0.3, 0.9, 1.5])
def test_noise_factor_reciprocal_at_conjugate_angles(r):
    prod = SqueezeParams(r, 0.0).l_factor * SqueezeParams(r, math.pi).l_factor
    assert prod == pytest.approx(1.0, abs=1e-12)


def test_unsqueezed_model_is_bit_identical_to_plain(fig_params):
    plain = CascadedModel.plain(fig_params)
    sq = squeezed_model(fig_params, SqueezeParams(r=0.0))
    assert np.array_equal(plain.ldet, sq.ldet)
    assert np.array_equal(plain.c_meas, sq.c_meas)
    assert sq.current_scale == 1.0


def test_squeezing_at_noise_reducing_angle_helps_slightly(fig_params):
    grid = default_grid(PulseShape.exponential(fig_params.gamma_con), dt=4e-3)
    base = snr_squeezed(fig_params, SqueezeParams(r=0.0), grid)
    better = snr_squeezed(fig_params, SqueezeParams(r=0.1, theta=math.pi), grid)
    worse = snr_squeezed(fig_params, SqueezeParams(r=0.1, theta=0.0), grid)
    assert better > base
    assert worse < base
    assert better < 1.1 * base  # a slight gain, not a qualitative change


def test_cascaded_regression_zero_probe(fig_params):
    p = fig_params.with_(beta=0.0)
    grid = TimeGrid(dt=4e-3, n_steps=2500)
    mean_s, var = variance_regression_cascaded(CascadedModel.plain(p), grid)
    assert mean_s == pytest.approx(0.0, abs=1e-10)
    assert var == pytest.approx(grid.t_final, abs=1e-8)


# --- ensemble rescaling -----------------------------------------------------


def test_rescaled_parameter_values(fig_params):
    scaled, t_factor = ensemble_rescaled_params(fig_params, 4)
    assert scaled.gamma_b == pytest.approx(4.0 * fig_params.gamma_b)
    assert scaled.gamma_c == pytest.approx(4.0 * fig_params.gamma_c)
    assert scaled.gamma_con == pytest.approx(4.0 * fig_params.gamma_con)
    assert scaled.beta == pytest.approx(2.0 * fig_params.beta)
    assert t_factor == pytest.approx(0.25)
    with pytest.raises(ValueError):
        ensemble_rescaled_params(fig_params, 0)


# --- transmission and cascading ---------------------------------------------


def test_transmission_far_detuned_limit(fig_params):
    t = transmission(1e6, 1e6, 1.0, fig_params, v_g=0.3)
    assert abs(t) == pytest.approx(1.0, abs=1e-5)


@pytest.mark.parametrize("variant", list(TransmissionVariant))
def test_transmission_is_passive(fig_params, variant):
    deltas = np.linspace(-30.0, 30.0, 1201)
    mags = [abs(transmission(float(d), float(d), 1.0, fig_params, 0.3, variant))
            for d in deltas]
    assert max(mags) <= 1.0 + 1e-12


def test_transmission_validation(fig_params):
    with pytest.raises(ValueError):
        transmission(0.0, 0.0, 1.0, fig_params, v_g=0.0)


def test_cascade_limits():
    assert snr_cascade(1, 0.33, 0.5) == 0.33
    for n in (2, 5, 20):
        assert snr_cascade(n, 0.33, 1.0) == pytest.approx(
            math.sqrt(n) * 0.33, abs=1e-14
        )
    with pytest.raises(ValueError):
        snr_cascade(0, 0.33, 0.5)
    with pytest.raises(ValueError):
        snr_cascade(2, 0.33, 1.5)


def test_cascade_decays_for_lossy_links():
    snrs = [snr_cascade(n, 0.33, 0.2) for n in range(1, 21)]
    assert max(snrs) == snrs[0]  # heavy loss: chaining never helps


# --- four-level reduction ---------------------------------------------------


def _p4(omega=10.0):
    lam = -0.5 * omega
    return FourLevelParams(omega_drive=omega, delta_12=0.0,
                           delta_10=lam, delta_32=lam)


def test_dressing_angle_and_eigenvalues():
    p4 = _p4(10.0)
    assert p4.theta_mix == pytest.approx(math.pi / 4.0)
    assert p4.lambda_plus == pytest.approx(5.0)
    assert p4.lambda_minus == pytest.approx(-5.0)
    with pytest.raises(DegenerateDressingError):
        FourLevelParams(omega_drive=0.0, delta_12=0.0).theta_mix


def test_reduction_couplings():
    red = four_level_reduce(_p4(10.0))
    assert math.cos(red.theta_mix) ** 2 + math.sin(red.theta_mix) ** 2 == \
        pytest.approx(1.0)
    assert red.coupling_signal == pytest.approx(math.cos(math.pi / 4.0))
    assert red.coupling_probe == pytest.approx(math.sin(math.pi / 4.0))
    assert red.gamma_dephase == pytest.approx(0.25)


def test_reduction_requires_dressed_resonance():
    p4 = FourLevelParams(omega_drive=10.0, delta_12=0.0,
                         delta_10=0.0, delta_32=-5.0)
    with pytest.raises(ValueError):
        four_level_reduce(p4)


def test_four_level_populations_are_physical():
    grid = TimeGrid(dt=2e-3, n_steps=2000)
    _, pop4, pop3 = four_level_populations(_p4(10.0), grid)
    for pop in (pop4, pop3):
        assert pop.min() >= -1e-10
        assert pop.max() <= 1.0 + 1e-10
    assert np.abs(pop4 - pop3).max() < 0.04


def test_four_level_agreement_improves_with_drive():
    grid = TimeGrid(dt=2e-3, n_steps=4000)
    sups = []
    for omega in (5.0, 20.0):
        _, pop4, pop3 = four_level_populations(_p4(omega), grid)
        sups.append(float(np.abs(pop4 - pop3).max()))
    assert sups[1] < sups[0]


# --- ratio sweep ------------------------------------------------------------


def test_ratio_sweep_validates_range(fig_params):
    with pytest.raises(ValueError):
        ratio_sweep([0.5], fig_params)
    with pytest.raises(ValueError):
        ratio_sweep([101.0], fig_params)


def test_ratio_sweep_small(fig_params):
    rows = ratio_sweep([1.0, 5.0], fig_params,
                       beta_grid=[0.2, 0.45, 0.8], dt=4e-3)
    assert len(rows) == 2
    (r1, b1, s1), (r5, b5, s5) = rows
    assert r1 == 1.0 and r5 == 5.0
    assert s5 > s1          # faster probe relaxation helps
    assert s5 < 1.0
    assert 0.2 <= b1 <= 0.8 or b1 > 0  # refined optimum may leave the grid
