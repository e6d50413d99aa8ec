"""Acceptance criteria for the toolkit, each as a standalone pass/fail check.

Every criterion returns a CriterionResult; `kerrsnr check` prints one line
per criterion and exits nonzero if any fails, and the acceptance test suite
asserts each one individually. Expensive artifacts (the deterministic beta
sweep, the big stochastic ensembles) are computed once per AcceptanceContext
and shared across criteria.

Threshold constants that are not forced by theory (the four-level reduction
sup-norm bound, the squeezing improvement band) were frozen from the first
full computation and must not be tuned to make a failing build pass.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .analytic import polarisation_closed_form
from .cascaded import simulate_ensemble
from .fock import default_grid, evolve_hierarchy
from .params import SystemParams, TimeGrid
from .pulses import PulseShape
from .qutrit import GELL_MANN, liouvillian, lowering_b, lowering_c, hamiltonian
from .snr import (
    SnrMethod,
    SweepSpec,
    estimate_snr_deterministic,
    estimate_snr_stochastic,
    sweep,
)
from .variants import (
    SqueezeParams,
    FourLevelParams,
    TransmissionVariant,
    ensemble_rescaled_params,
    four_level_populations,
    ratio_sweep,
    snr_cascade,
    snr_squeezed,
    transmission,
)

# frozen thresholds (first full computation; see module docstring)
FOURLEVEL_SUP_THRESHOLD = 0.04       # measured max 0.0331 over the drive grid
SQUEEZE_IMPROVEMENT_BAND = 1.25      # measured peak gain ~4% over SNR(r=0)

BETA_SWEEP_RUNTIME_LIMIT = 120.0     # seconds
STOCHASTIC_RUNTIME_LIMIT = 1200.0
DETUNING_RUNTIME_LIMIT = 600.0

ENSEMBLE_N_TRAJ = 5000
ACCEPTANCE_SEED = 20260823

BETA_GRID = np.linspace(0.05, 1.2, 24)
DETUNING_GRID = np.linspace(-2.0, 2.0, 11)
DRIVE_GRID = (5.0, 10.0, 20.0, 40.0)
RATIO_GRID = (1.0, 2.0, 5.0, 10.0, 30.0, 100.0)


@dataclass
class CriterionResult:
    name: str
    passed: bool
    detail: str
    elapsed: float = 0.0


class AcceptanceContext:
    """Shared, lazily computed artifacts for the acceptance criteria."""

    def __init__(self, n_traj: int = ENSEMBLE_N_TRAJ,
                 base_seed: int = ACCEPTANCE_SEED, dt: float = 1e-3):
        self.n_traj = n_traj
        self.base_seed = base_seed
        self.dt = dt

    @cached_property
    def params(self) -> SystemParams:
        return SystemParams(gamma_b=1.0, gamma_c=2.0, gamma_con=0.6672,
                            beta=0.4)

    @cached_property
    def pulse(self) -> PulseShape:
        return PulseShape.exponential(self.params.gamma_con)

    @cached_property
    def grid(self) -> TimeGrid:
        return default_grid(self.pulse, dt=self.dt)

    @cached_property
    def det_result(self):
        return estimate_snr_deterministic(self.params, self.pulse, self.grid)

    @cached_property
    def beta_sweep(self):
        """(elapsed, betas, results) of the deterministic beta sweep."""
        spec = SweepSpec(
            axes={"beta": [float(b) for b in BETA_GRID]},
            fixed=self.params, method=SnrMethod.REGRESSION_ANALYTIC,
            dt=self.dt,
        )
        t0 = time.perf_counter()
        points = sweep(spec)
        elapsed = time.perf_counter() - t0
        bad = [pt for pt in points if pt.result is None]
        if bad:
            raise RuntimeError(f"beta sweep point failed: {bad[0].error}")
        return elapsed, BETA_GRID, [pt.result for pt in points]

    @cached_property
    def ensembles(self):
        """(elapsed, s1, s0): the big matched stochastic ensembles."""
        t0 = time.perf_counter()
        s1 = simulate_ensemble(self.params, self.grid, self.n_traj,
                               self.base_seed, n_photon=1)
        s0 = simulate_ensemble(self.params, self.grid, self.n_traj,
                               self.base_seed + self.n_traj, n_photon=0)
        return time.perf_counter() - t0, s1, s0


def _timed(fn):
    def wrapper(ctx: AcceptanceContext) -> CriterionResult:
        t0 = time.perf_counter()
        res = fn(ctx)
        res.elapsed = time.perf_counter() - t0
        return res
    wrapper.__name__ = fn.__name__
    return wrapper


@_timed
def criterion_beta_sweep_single_peak(ctx: AcceptanceContext) -> CriterionResult:
    """Deterministic SNR(beta) on [0.05, 1.2]: one interior peak, all < 1."""
    elapsed, betas, results = ctx.beta_sweep
    snrs = np.array([r.snr for r in results])
    i = int(np.argmax(snrs))
    interior = 0 < i < len(snrs) - 1
    unimodal = (np.all(np.diff(snrs[: i + 1]) > 0)
                and np.all(np.diff(snrs[i:]) < 0))
    below_one = bool(np.all(snrs < 1.0))
    in_time = elapsed < BETA_SWEEP_RUNTIME_LIMIT
    passed = interior and unimodal and below_one and in_time
    return CriterionResult(
        "beta_sweep_single_peak", passed,
        f"max SNR {snrs[i]:.6f} at beta={betas[i]:.4g}; interior={interior}, "
        f"unimodal={unimodal}, all<1={below_one}, {elapsed:.1f}s "
        f"(limit {BETA_SWEEP_RUNTIME_LIMIT:.0f}s)",
    )


@_timed
def criterion_stochastic_matches_deterministic(ctx) -> CriterionResult:
    """Ensemble SNR agrees with the regression SNR within 3 standard errors."""
    elapsed, s1, s0 = ctx.ensembles
    stoch = estimate_snr_stochastic(s1, s0)
    det = ctx.det_result
    z = abs(stoch.snr - det.snr) / stoch.stderr_snr
    in_time = elapsed < STOCHASTIC_RUNTIME_LIMIT
    passed = z <= 3.0 and in_time
    return CriterionResult(
        "stochastic_matches_deterministic", passed,
        f"stochastic {stoch.snr:.4f} +/- {stoch.stderr_snr:.4f} vs "
        f"deterministic {det.snr:.4f} (z={z:.2f}, limit 3); "
        f"{2 * ctx.n_traj} trajectories in {elapsed:.0f}s "
        f"(limit {STOCHASTIC_RUNTIME_LIMIT:.0f}s)",
    )


@_timed
def criterion_closed_form_matches_hierarchy(ctx) -> CriterionResult:
    """Closed-form <y(t)> vs the numeric hierarchy, sup norm below 1e-6."""
    p = SystemParams(gamma_b=1.0, gamma_c=2.0, gamma_con=1.0, beta=1.0)
    pulse = PulseShape.exponential(p.gamma_con)
    grid = default_grid(pulse, dt=ctx.dt)
    evo = evolve_hierarchy(p, pulse, grid)
    y_closed = polarisation_closed_form(p, grid)
    err = float(np.abs(evo.y - y_closed).max())
    return CriterionResult(
        "closed_form_matches_hierarchy", err < 1e-6,
        f"sup|y_closed - y_numeric| = {err:.3e} (limit 1e-6)",
    )


@_timed
def criterion_detuning_optimum_on_resonance(ctx) -> CriterionResult:
    """The 11x11 detuning map peaks at zero detuning on both axes."""
    p = ctx.params.with_(gamma_con=0.6772)
    pulse = PulseShape.exponential(p.gamma_con)
    t0 = time.perf_counter()
    snr = np.empty((len(DETUNING_GRID), len(DETUNING_GRID)))
    for i, db in enumerate(DETUNING_GRID):
        for j, dc in enumerate(DETUNING_GRID):
            pt = p.with_(delta_b=float(db), delta_c=float(dc))
            grid = default_grid(pulse, dt=ctx.dt)
            snr[i, j] = estimate_snr_deterministic(pt, pulse, grid).snr
    elapsed = time.perf_counter() - t0
    i, j = np.unravel_index(np.argmax(snr), snr.shape)
    on_res = DETUNING_GRID[i] == 0.0 and DETUNING_GRID[j] == 0.0
    in_time = elapsed < DETUNING_RUNTIME_LIMIT
    return CriterionResult(
        "detuning_optimum_on_resonance", bool(on_res and in_time),
        f"argmax at (delta_b, delta_c) = ({DETUNING_GRID[i]:.3g}, "
        f"{DETUNING_GRID[j]:.3g}), SNR {snr[i, j]:.4f}; {elapsed:.0f}s "
        f"(limit {DETUNING_RUNTIME_LIMIT:.0f}s)",
    )


@_timed
def criterion_zero_photon_calibration(ctx) -> CriterionResult:
    """Vacuum-input signals: mean compatible with 0, variance with T."""
    _, _, s0 = ctx.ensembles
    n = s0.n_traj
    m = float(s0.values.mean())
    v = float(s0.values.var(ddof=1))
    se_mean = math.sqrt(v / n)
    se_var = v * math.sqrt(2.0 / (n - 1))
    t_final = ctx.grid.t_final
    mean_ok = abs(m) <= 3.0 * se_mean
    var_ok = abs(v - t_final) <= 5.0 * se_var
    return CriterionResult(
        "zero_photon_calibration", mean_ok and var_ok,
        f"E[S0] = {m:.4f} ({abs(m) / se_mean:.2f} SE, limit 3); "
        f"Var[S0] = {v:.3f} vs T = {t_final:.3f} "
        f"({abs(v - t_final) / se_var:.2f} SE, limit 5)",
    )


@_timed
def criterion_signal_boundedness(ctx) -> CriterionResult:
    """|<y>| <= sqrt(gamma_c) along trajectories and |E[S1]| <= sqrt(gamma_c) T."""
    _, s1, s0 = ctx.ensembles
    root_gc = math.sqrt(ctx.params.gamma_c)
    t_final = ctx.grid.t_final
    max_y = max(s1.max_abs_y, s0.max_abs_y)
    mean_s1 = float(s1.values.mean())
    det_s1 = ctx.det_result.mean_s1
    y_ok = max_y <= root_gc
    s_ok = (abs(mean_s1) <= root_gc * t_final
            and abs(det_s1) <= root_gc * t_final)
    return CriterionResult(
        "signal_boundedness", y_ok and s_ok,
        f"max |<y>| = {max_y:.4f} (bound {root_gc:.4f}); |E[S1]| = "
        f"{abs(mean_s1):.3f} stochastic / {abs(det_s1):.3f} deterministic "
        f"(bound {root_gc * t_final:.1f})",
    )


@_timed
def criterion_ensemble_rescaling_invariance(ctx) -> CriterionResult:
    """Collective N-transmon rescaling leaves the SNR unchanged to 1e-8."""
    base = ctx.det_result.snr
    worst = 0.0
    for n in (2, 10):
        scaled, t_factor = ensemble_rescaled_params(ctx.params, n)
        grid = TimeGrid(dt=ctx.grid.dt * t_factor, n_steps=ctx.grid.n_steps)
        pulse = PulseShape.exponential(scaled.gamma_con)
        snr = estimate_snr_deterministic(scaled, pulse, grid).snr
        worst = max(worst, abs(snr - base))
    return CriterionResult(
        "ensemble_rescaling_invariance", worst < 1e-8,
        f"worst |SNR_N - SNR_1| = {worst:.3e} over N in (2, 10) (limit 1e-8)",
    )


@_timed
def criterion_squeezing_bounded_gain(ctx) -> CriterionResult:
    """Squeezed-probe SNR stays < 1 and within the frozen gain band; the
    noise factors of conjugate quadrature angles are exact reciprocals."""
    rs = np.linspace(0.0, 1.5, 31)
    snrs = np.array([
        snr_squeezed(ctx.params, SqueezeParams(r=float(r), theta=math.pi),
                     ctx.grid)
        for r in rs
    ])
    snr0 = snrs[0]
    below_one = bool(np.all(snrs < 1.0))
    in_band = bool(np.all(snrs <= SQUEEZE_IMPROVEMENT_BAND * snr0))
    dual = max(
        abs(SqueezeParams(r, 0.0).l_factor * SqueezeParams(r, math.pi).l_factor
            - 1.0)
        for r in (0.3, 0.9, 1.5)
    )
    passed = below_one and in_band and dual < 1e-12
    return CriterionResult(
        "squeezing_bounded_gain", passed,
        f"max SNR {snrs.max():.4f} at r={rs[int(np.argmax(snrs))]:.2f} vs "
        f"SNR(0) {snr0:.4f} (band {SQUEEZE_IMPROVEMENT_BAND}x); all<1="
        f"{below_one}; max |L(0)L(pi) - 1| = {dual:.2e} (limit 1e-12)",
    )


@_timed
def criterion_cascade_stays_below_unity(ctx) -> CriterionResult:
    """SNR_n < 1 for n = 1..20 and the algebra has its exact limits."""
    snr1 = ctx.det_result.snr
    t_amp = transmission(0.0, 0.0, 1.0, ctx.params, v_g=0.3,
                         variant=TransmissionVariant.PRINTED)
    t_prob = abs(t_amp) ** 2
    snrs = [snr_cascade(n, snr1, t_prob) for n in range(1, 21)]
    below_one = all(s < 1.0 for s in snrs)
    limit_n1 = snr_cascade(1, snr1, t_prob) == snr1
    limit_t1 = max(
        abs(snr_cascade(n, snr1, 1.0) - math.sqrt(n) * snr1)
        for n in (2, 7, 20)
    )
    passed = below_one and limit_n1 and limit_t1 < 1e-12
    return CriterionResult(
        "cascade_stays_below_unity", passed,
        f"max SNR_n = {max(snrs):.4f} (|t|^2 = {t_prob:.3f}); n=1 limit exact="
        f"{limit_n1}; T=1 limit error {limit_t1:.2e} (limit 1e-12)",
    )


@_timed
def criterion_fourlevel_reduction_converges(ctx) -> CriterionResult:
    """The ladder reduction tracks the four-level dynamics, improving with
    drive strength and staying below the frozen sup-norm threshold."""
    sups = []
    for omega in DRIVE_GRID:
        lam = -0.5 * omega  # lambda_minus at delta_12 = 0
        p4 = FourLevelParams(omega_drive=omega, delta_12=0.0, delta_10=lam,
                             delta_32=lam)
        grid = TimeGrid.from_duration(8.0, ctx.dt)
        _, pop4, pop3 = four_level_populations(p4, grid)
        sups.append(float(np.abs(pop4 - pop3).max()))
    below = max(sups) < FOURLEVEL_SUP_THRESHOLD
    decreasing = all(a > b for a, b in zip(sups, sups[1:]))
    return CriterionResult(
        "fourlevel_reduction_converges", below and decreasing,
        f"sup norms {[f'{s:.4f}' for s in sups]} over drives {DRIVE_GRID}; "
        f"threshold {FOURLEVEL_SUP_THRESHOLD}, strictly decreasing="
        f"{decreasing}",
    )


@_timed
def criterion_ratio_sweep_below_unity(ctx) -> CriterionResult:
    """The optimized SNR never reaches 1 for gamma_c/gamma_b in [1, 100]."""
    rows = ratio_sweep(RATIO_GRID, SystemParams(gamma_b=1.0, gamma_c=2.0,
                                                gamma_con=0.6672),
                       dt=ctx.dt)
    worst = max(r[2] for r in rows)
    return CriterionResult(
        "ratio_sweep_below_unity", worst < 1.0,
        f"largest optimized SNR = {worst:.4f} over ratios {RATIO_GRID}",
    )


@_timed
def criterion_numerical_hygiene(ctx) -> CriterionResult:
    """Basis orthonormality, generator trace preservation, state sanity,
    and fourth-order convergence of the integrator."""
    checks = []
    # Gell-Mann orthonormality Tr(l_i l_j) = 2 delta_ij
    gram = np.array([[np.trace(a @ b).real for b in GELL_MANN]
                     for a in GELL_MANN])
    checks.append(("gm_orthonormality",
                   float(np.abs(gram - 2.0 * np.eye(8)).max()), 1e-12))
    # trace preservation: Tr(L rho) = 0 for every rho
    p = ctx.params
    from .cascaded import CascadedModel

    model = CascadedModel.plain(p)
    tr_vec = np.eye(6).ravel()
    checks.append(("generator_traceless",
                   float(np.abs(tr_vec @ model.ldet).max()), 1e-10))
    l3 = liouvillian(hamiltonian(p), [lowering_b(p), lowering_c(p)])
    checks.append(("qutrit_generator_traceless",
                   float(np.abs(np.eye(3).ravel() @ l3).max()), 1e-10))
    # physical-block sanity at the end of the hierarchy evolution
    evo = evolve_hierarchy(p, ctx.pulse, ctx.grid)
    from .fock import B11
    from .qutrit import validate_density_matrix

    rho11 = evo.states[-1][B11].reshape(3, 3)
    rho00 = evo.states[-1][:9].reshape(3, 3)
    try:
        validate_density_matrix(rho11)
        validate_density_matrix(rho00)
        checks.append(("state_sanity", 0.0, 1.0))
    except Exception as exc:
        checks.append((f"state_sanity ({exc})", 1.0, 0.5))
    # step-halving convergence of the full hierarchy state at t = 16;
    # coarse steps so truncation error sits well above machine epsilon
    ref = evolve_hierarchy(p, ctx.pulse, TimeGrid.from_duration(16.0, 0.0125))
    errs = []
    for dt in (0.4, 0.2):
        e = evolve_hierarchy(p, ctx.pulse, TimeGrid.from_duration(16.0, dt))
        errs.append(float(np.abs(e.states[-1] - ref.states[-1]).max()))
    order = math.log2(errs[0] / errs[1])
    order_ok = order >= 3.5
    failed = [(n, v, tol) for n, v, tol in checks if v > tol]
    passed = not failed and order_ok
    detail = (f"convergence order {order:.2f} (limit 3.5); "
              + ("all invariants within tolerance" if not failed else
                 "; ".join(f"{n}: {v:.2e} > {tol:.0e}" for n, v, tol in failed)))
    return CriterionResult("numerical_hygiene", passed, detail)


FAST_CRITERIA = (
    criterion_beta_sweep_single_peak,
    criterion_closed_form_matches_hierarchy,
    criterion_ensemble_rescaling_invariance,
    criterion_squeezing_bounded_gain,
    criterion_cascade_stays_below_unity,
    criterion_fourlevel_reduction_converges,
    criterion_numerical_hygiene,
)

SLOW_CRITERIA = (
    criterion_stochastic_matches_deterministic,
    criterion_detuning_optimum_on_resonance,
    criterion_zero_photon_calibration,
    criterion_signal_boundedness,
    criterion_ratio_sweep_below_unity,
)

ALL_CRITERIA = (
    criterion_beta_sweep_single_peak,
    criterion_stochastic_matches_deterministic,
    criterion_closed_form_matches_hierarchy,
    criterion_detuning_optimum_on_resonance,
    criterion_zero_photon_calibration,
    criterion_signal_boundedness,
    criterion_ensemble_rescaling_invariance,
    criterion_squeezing_bounded_gain,
    criterion_cascade_stays_below_unity,
    criterion_fourlevel_reduction_converges,
    criterion_ratio_sweep_below_unity,
    criterion_numerical_hygiene,
)


def run_all(fast: bool = False,
            ctx: AcceptanceContext | None = None) -> list[CriterionResult]:
    """Run the acceptance criteria (fast mode skips the long stochastic ones)."""
    if ctx is None:
        ctx = AcceptanceContext()
    criteria = FAST_CRITERIA if fast else ALL_CRITERIA
    return [fn(ctx) for fn in criteria]
