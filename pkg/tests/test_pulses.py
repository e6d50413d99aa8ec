import math

import numpy as np
import pytest

from kerrsnr.pulses import (
    PulseKind,
    PulseShape,
    amplitude,
    capture_horizon,
    captured_fraction,
)

SHAPES = [
    PulseShape.exponential(0.6672),
    PulseShape.gaussian(0.6672),
    PulseShape.rectangular(0.6672),
]


@pytest.mark.parametrize("pulse", SHAPES, ids=[s.kind.value for s in SHAPES])
def test_one_photon_normalization(pulse):
    t = np.linspace(0.0, 60.0, 600001)
    integral = np.trapezoid(np.abs(amplitude(pulse, t)) ** 2, t)
    # the rectangular edge limits trapezoid accuracy to O(dt)
    tol = 1e-4 if pulse.kind is PulseKind.RECTANGULAR else 1e-6
    assert integral == pytest.approx(1.0, abs=tol)


@pytest.mark.parametrize("pulse", SHAPES, ids=[s.kind.value for s in SHAPES])
@pytest.mark.parametrize("t_final", [0.5, 2.0, 10.0])
def test_captured_fraction_matches_quadrature(pulse, t_final):
    t = np.linspace(0.0, t_final, 200001)
    numeric = np.trapezoid(np.abs(amplitude(pulse, t)) ** 2, t)
    tol = 1e-4 if pulse.kind is PulseKind.RECTANGULAR else 1e-5
    assert captured_fraction(pulse, t_final) == pytest.approx(numeric, abs=tol)


@pytest.mark.parametrize("pulse", SHAPES, ids=[s.kind.value for s in SHAPES])
def test_capture_horizon_reaches_target(pulse):
    eps = 1e-4
    t = capture_horizon(pulse, eps)
    assert captured_fraction(pulse, t) >= 1.0 - eps - 1e-12


def test_capture_horizon_grid_aligned():
    pulse = PulseShape.exponential(0.6672)
    dt = 1e-3
    t = capture_horizon(pulse, math.exp(-10.0), dt=dt)
    assert abs(t / dt - round(t / dt)) < 1e-9
    assert t >= capture_horizon(pulse, math.exp(-10.0)) - 1e-12


def test_exponential_amplitude_closed_form():
    g = 0.6672
    pulse = PulseShape.exponential(g)
    assert amplitude(pulse, 0.0) == pytest.approx(math.sqrt(g))
    assert amplitude(pulse, 2.0) == pytest.approx(math.sqrt(g) * math.exp(-g))


def test_negative_time_rejected():
    with pytest.raises(ValueError):
        amplitude(SHAPES[0], -0.1)
    with pytest.raises(ValueError):
        amplitude(SHAPES[0], np.array([0.0, -1.0]))


def test_invalid_construction():
    with pytest.raises(ValueError):
        PulseShape(PulseKind.EXPONENTIAL, width_param=0.0)
    with pytest.raises(ValueError):
        capture_horizon(SHAPES[0], 1.5)
