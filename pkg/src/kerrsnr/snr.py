"""Signal statistics: SNR estimators, histograms, parameter sweeps, optimization.

The signal-to-noise ratio is SNR = E[S1] / (sqrt(2) sigma_S), with sigma_S
pooled across the zero- and one-photon ensembles for the stochastic
estimator (the noise is photon-number independent to good approximation;
the per-ensemble deviations are reported so that premise stays checkable)
and taken from the quantum-regression variance for the deterministic one.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .analytic import variance_regression
from .cascaded import SignalSamples
from .fock import default_grid, evolve_hierarchy
from .params import DEFAULT_DT, SystemParams, TimeGrid
from .pulses import PulseKind, PulseShape


class SnrMethod(enum.Enum):
    STOCHASTIC_ENSEMBLE = "stochastic_ensemble"
    REGRESSION_ANALYTIC = "regression_analytic"


class Optimizer(enum.Enum):
    GRID_ONLY = "grid_only"
    GRID_THEN_SIMPLEX = "grid_then_simplex"


class InsufficientSamplesError(ValueError):
    pass


@dataclass(frozen=True)
class SnrResult:
    mean_s1: float
    mean_s0: float
    sigma_s: float
    snr: float
    method: SnrMethod
    stderr_snr: float | None = None
    n_traj: int | None = None
    sigma_s1: float | None = None
    sigma_s0: float | None = None

    def __post_init__(self):
        if not self.sigma_s > 0:
            raise ValueError(f"sigma_s must be positive, got {self.sigma_s}")
        is_stoch = self.method is SnrMethod.STOCHASTIC_ENSEMBLE
        if is_stoch != (self.stderr_snr is not None):
            raise ValueError(
                "stderr_snr must be present exactly for the stochastic method"
            )


def estimate_snr_stochastic(s1: SignalSamples, s0: SignalSamples) -> SnrResult:
    """Pooled-variance SNR from matched one- and zero-photon ensembles."""
    if s1.n_traj < 2 or s0.n_traj < 2:
        raise InsufficientSamplesError("each ensemble needs at least 2 trajectories")
    n1, n0 = s1.n_traj, s0.n_traj
    m1 = float(s1.values.mean())
    m0 = float(s0.values.mean())
    v1 = float(s1.values.var(ddof=1))
    v0 = float(s0.values.var(ddof=1))
    pooled = ((n1 - 1) * v1 + (n0 - 1) * v0) / (n1 + n0 - 2)
    sigma = math.sqrt(pooled)
    snr = m1 / (math.sqrt(2.0) * sigma)
    # delta-method propagation: Var(m1) = v1/n1, Var(sigma) ~ sigma^2/(2(n-2))
    rel = (v1 / n1) / (m1 * m1) if m1 != 0 else 0.0
    stderr = abs(snr) * math.sqrt(rel + 0.5 / (n1 + n0 - 2))
    if m1 == 0:
        stderr = math.sqrt(v1 / n1) / (math.sqrt(2.0) * sigma)
    return SnrResult(
        mean_s1=m1, mean_s0=m0, sigma_s=sigma, snr=snr,
        method=SnrMethod.STOCHASTIC_ENSEMBLE, stderr_snr=stderr,
        n_traj=n1 + n0, sigma_s1=math.sqrt(v1), sigma_s0=math.sqrt(v0),
    )


def estimate_snr_deterministic(p: SystemParams, pulse: PulseShape,
                               grid: TimeGrid | None = None) -> SnrResult:
    """Noise-free SNR: fock-hierarchy mean signal + regression variance."""
    if grid is None:
        grid = default_grid(pulse)
    evo = evolve_hierarchy(p, pulse, grid)
    mean_s1 = float(np.trapezoid(evo.y, evo.times))
    var = variance_regression(p, pulse, grid, evolution=evo)
    sigma = math.sqrt(var) if var > 0 else math.sqrt(grid.t_final)
    return SnrResult(
        mean_s1=mean_s1, mean_s0=0.0, sigma_s=sigma,
        snr=mean_s1 / (math.sqrt(2.0) * sigma),
        method=SnrMethod.REGRESSION_ANALYTIC,
    )


@dataclass
class Histogram:
    bin_edges: np.ndarray
    counts_n0: np.ndarray
    counts_n1: np.ndarray

    def __post_init__(self):
        if not np.all(np.diff(self.bin_edges) > 0):
            raise ValueError("bin edges must be strictly increasing")

    @classmethod
    def from_samples(cls, s0: np.ndarray, s1: np.ndarray) -> "Histogram":
        """Freedman-Diaconis binning on the pooled samples."""
        pooled = np.concatenate([np.asarray(s0), np.asarray(s1)])
        q75, q25 = np.percentile(pooled, [75, 25])
        width = 2.0 * (q75 - q25) / len(pooled) ** (1.0 / 3.0)
        lo, hi = pooled.min(), pooled.max()
        if width <= 0:
            width = (hi - lo) / 10.0 or 1.0
        n_bins = max(1, int(math.ceil((hi - lo) / width)))
        edges = np.linspace(lo, hi, n_bins + 1)
        c0, _ = np.histogram(s0, bins=edges)
        c1, _ = np.histogram(s1, bins=edges)
        return cls(bin_edges=edges, counts_n0=c0, counts_n1=c1)


@dataclass
class SweepSpec:
    """Cartesian parameter sweep around a fixed baseline.

    axes maps SystemParams field names (beta, delta_b, delta_c, gamma_con,
    gamma_c) to value grids; points are visited in row-major axis order.
    """

    axes: dict[str, list[float]]
    fixed: SystemParams
    method: SnrMethod = SnrMethod.REGRESSION_ANALYTIC
    optimizer: Optimizer = Optimizer.GRID_THEN_SIMPLEX
    pulse_kind: PulseKind = PulseKind.EXPONENTIAL
    dt: float = DEFAULT_DT
    n_traj: int = 0
    base_seed: int = 0

    def __post_init__(self):
        if not self.axes:
            raise ValueError("sweep needs at least one axis")
        for name, grid in self.axes.items():
            if len(grid) == 0:
                raise ValueError(f"axis {name!r} is empty")
            if not np.all(np.isfinite(grid)):
                raise ValueError(f"axis {name!r} contains non-finite values")


def _pulse_for(spec: SweepSpec, p: SystemParams) -> PulseShape:
    factory = {
        PulseKind.EXPONENTIAL: PulseShape.exponential,
        PulseKind.GAUSSIAN: PulseShape.gaussian,
        PulseKind.RECTANGULAR: PulseShape.rectangular,
    }[spec.pulse_kind]
    return factory(p.gamma_con)


def _evaluate_point(spec: SweepSpec, p: SystemParams) -> SnrResult:
    pulse = _pulse_for(spec, p)
    grid = default_grid(pulse, dt=spec.dt)
    if spec.method is SnrMethod.REGRESSION_ANALYTIC:
        return estimate_snr_deterministic(p, pulse, grid)
    from .cascaded import simulate_ensemble

    if spec.n_traj < 2:
        raise InsufficientSamplesError("stochastic sweep needs n_traj >= 2")
    s1 = simulate_ensemble(p, grid, spec.n_traj, spec.base_seed, n_photon=1)
    s0 = simulate_ensemble(p, grid, spec.n_traj, spec.base_seed + spec.n_traj,
                           n_photon=0)
    return estimate_snr_stochastic(s1, s0)


@dataclass
class SweepPoint:
    values: dict[str, float]
    result: SnrResult | None
    error: str | None = None


def sweep(spec: SweepSpec) -> list[SweepPoint]:
    """SNR on the cartesian grid; point failures are recorded, not fatal."""
    names = list(spec.axes)
    out = []
    for combo in itertools.product(*(spec.axes[n] for n in names)):
        values = dict(zip(names, (float(v) for v in combo)))
        try:
            p = spec.fixed.with_(**values)
            out.append(SweepPoint(values=values, result=_evaluate_point(spec, p)))
        except Exception as exc:  # recorded per contract; sweep continues
            out.append(SweepPoint(values=values, result=None, error=str(exc)))
    return out


SIMPLEX_MAX_ITER = 200
SIMPLEX_FATOL = 1e-4


def optimize(spec: SweepSpec) -> tuple[dict[str, float], SnrResult]:
    """Maximize SNR: coarse grid search, then optional Nelder-Mead refinement.

    Only the deterministic method is supported (optimizing over Monte Carlo
    noise is refused). Grid ties break toward the lexicographically smallest
    parameter vector.
    """
    if spec.method is not SnrMethod.REGRESSION_ANALYTIC:
        raise ValueError("optimization over stochastic estimates is refused")
    names = list(spec.axes)
    points = sweep(spec)
    scored = [
        (pt.result.snr, tuple(pt.values[n] for n in names), pt)
        for pt in points if pt.result is not None
    ]
    if not scored:
        raise RuntimeError("every grid point failed to evaluate")
    best_snr = max(s for s, _, _ in scored)
    best = min(vec for s, vec, _ in scored if s == best_snr)
    best_pt = next(pt for s, vec, pt in scored if vec == best)
    if spec.optimizer is Optimizer.GRID_ONLY:
        return best_pt.values, best_pt.result

    cache: dict[tuple, SnrResult] = {}

    def objective(vec: np.ndarray) -> float:
        key = tuple(round(float(v), 12) for v in vec)
        values = dict(zip(names, key))
        p_trial = spec.fixed.with_(**values)
        if p_trial.beta < 0 or p_trial.gamma_con <= 0 or p_trial.gamma_c <= 0:
            return np.inf
        try:
            res = _evaluate_point(spec, p_trial)
        except Exception:
            return np.inf  # skipped per contract
        cache[key] = res
        return -res.snr

    res = minimize(
        objective, np.array(best, dtype=float), method="Nelder-Mead",
        options={"maxiter": SIMPLEX_MAX_ITER, "fatol": SIMPLEX_FATOL,
                 "xatol": 1e-6, "disp": False},
    )
    if np.isfinite(res.fun) and -res.fun >= best_snr:
        key = tuple(round(float(v), 12) for v in res.x)
        result = cache.get(key)
        if result is None:
            values = dict(zip(names, (float(v) for v in key)))
            result = _evaluate_point(spec, spec.fixed.with_(**values))
        return dict(zip(names, (float(v) for v in key))), result
    return best_pt.values, best_pt.result
