"""Acceptance gate: one test (and one printed pass/fail line) per criterion.

These run the full production-scale checks, including the 5000+5000
trajectory stochastic ensembles; expect the module to take tens of minutes.
"""

import pytest

from kerrsnr import acceptance


@pytest.fixture(scope="module")
def ctx():
    return acceptance.AcceptanceContext()


def _report(result):
    status = "PASS" if result.passed else "FAIL"
    print(f"\n{status}: {result.name} -- {result.detail} "
          f"[{result.elapsed:.1f}s]", flush=True)
    assert result.passed, f"{result.name}: {result.detail}"


def test_beta_sweep_single_peak(ctx):
    _report(acceptance.criterion_beta_sweep_single_peak(ctx))


def test_stochastic_matches_deterministic(ctx):
    _report(acceptance.criterion_stochastic_matches_deterministic(ctx))


def test_closed_form_matches_hierarchy(ctx):
    _report(acceptance.criterion_closed_form_matches_hierarchy(ctx))


def test_detuning_optimum_on_resonance(ctx):
    _report(acceptance.criterion_detuning_optimum_on_resonance(ctx))


def test_zero_photon_calibration(ctx):
    _report(acceptance.criterion_zero_photon_calibration(ctx))


def test_signal_boundedness(ctx):
    _report(acceptance.criterion_signal_boundedness(ctx))


def test_ensemble_rescaling_invariance(ctx):
    _report(acceptance.criterion_ensemble_rescaling_invariance(ctx))


def test_squeezing_bounded_gain(ctx):
    _report(acceptance.criterion_squeezing_bounded_gain(ctx))


def test_cascade_stays_below_unity(ctx):
    _report(acceptance.criterion_cascade_stays_below_unity(ctx))


def test_fourlevel_reduction_converges(ctx):
    _report(acceptance.criterion_fourlevel_reduction_converges(ctx))


def test_ratio_sweep_below_unity(ctx):
    _report(acceptance.criterion_ratio_sweep_below_unity(ctx))


def test_numerical_hygiene(ctx):
    _report(acceptance.criterion_numerical_hygiene(ctx))
