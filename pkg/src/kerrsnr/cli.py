"""Command-line entry point: one subcommand per experiment plus `check`.

Every run writes into its output directory: the experiment CSV (17
significant digits, header row), `manifest.txt` (resolved configuration
including applied defaults, package version, and the seed layout — enough
to replay the run bit-for-bit), and `summary.txt`. An `INCOMPLETE` sentinel
exists while the run is in flight and is removed only on success, so a
crashed run can never be mistaken for a finished one.

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 acceptance-check failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from importlib import metadata
from pathlib import Path

import numpy as np

from .analytic import UnsupportedRegimeError
from .cascaded import StepSizeFailureError, simulate_ensemble
from .config import ConfigError, Experiment, RunConfig, load_config
from .fock import IntegrationFailureError, default_grid, evolve_hierarchy
from .params import SystemParams, TimeGrid
from .pulses import PulseShape, amplitude
from .qutrit import NumericalConsistencyError
from .snr import (
    Histogram,
    SnrMethod,
    SweepSpec,
    estimate_snr_deterministic,
    estimate_snr_stochastic,
    sweep,
)
from .variants import (
    FourLevelParams,
    SingularParameterError,
    TransmissionVariant,
    SqueezeParams,
    ensemble_rescaled_params,
    four_level_populations,
    ratio_sweep,
    snr_cascade,
    snr_squeezed,
    transmission,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_CHECK_FAILED = 4

NUMERICAL_ERRORS = (
    NumericalConsistencyError,
    IntegrationFailureError,
    StepSizeFailureError,
    SingularParameterError,
    UnsupportedRegimeError,
)

INCOMPLETE_SENTINEL = "INCOMPLETE"


def _version() -> str:
    try:
        return metadata.version("kerrsnr")
    except metadata.PackageNotFoundError:
        return "unknown"


def write_csv(path: Path, header: list[str], rows) -> None:
    """Plain CSV, full double precision (17 significant digits)."""
    with path.open("w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(
                v if isinstance(v, str) else f"{v:.17g}" for v in row
            ) + "\n")


def _pulse(cfg: RunConfig, p: SystemParams) -> PulseShape:
    factory = {
        "exponential": PulseShape.exponential,
        "gaussian": PulseShape.gaussian,
        "rectangular": PulseShape.rectangular,
    }[cfg.pulse_kind.value]
    return factory(p.gamma_con)


# --- experiment runners; each returns (csv_name, header, rows, summary) -----


def _run_polarisation(cfg: RunConfig):
    p = cfg.params
    pulse = _pulse(cfg, p)
    evo = evolve_hierarchy(p, pulse, default_grid(pulse, dt=cfg["grid.dt"]))
    f2 = np.abs(amplitude(pulse, evo.times)) ** 2
    rows = [(t, f, y) for t, f, y in zip(evo.times, f2, evo.y)]
    s1 = float(np.trapezoid(evo.y, evo.times))
    return ("polarisation.csv", ["t", "f_abs2", "y_expect"], rows,
            [f"E[S1] = {s1:.17g}", f"max <y> = {float(evo.y.max()):.17g}"])


def _run_snr_beta_sweep(cfg: RunConfig):
    p = cfg.params
    betas = np.linspace(cfg["sweep.beta_min"], cfg["sweep.beta_max"],
                        cfg["sweep.n_points"])
    method = (SnrMethod.REGRESSION_ANALYTIC
              if cfg["sweep.method"] == "deterministic"
              else SnrMethod.STOCHASTIC_ENSEMBLE)
    spec = SweepSpec(
        axes={"beta": [float(b) for b in betas]}, fixed=p, method=method,
        pulse_kind=cfg.pulse_kind, dt=cfg["grid.dt"],
        n_traj=cfg["run.n_traj"], base_seed=cfg["run.base_seed"],
    )
    rows = []
    best = (-math.inf, None)
    for pt in sweep(spec):
        if pt.result is None:
            raise NumericalConsistencyError(
                f"sweep point beta={pt.values['beta']} failed: {pt.error}"
            )
        r = pt.result
        rows.append((pt.values["beta"], r.mean_s1, r.sigma_s, r.snr,
                     r.method.value))
        if r.snr > best[0]:
            best = (r.snr, pt.values["beta"])
    return ("snr_beta.csv", ["beta", "mean_s1", "sigma_s", "snr", "method"],
            rows, [f"best SNR = {best[0]:.17g} at beta = {best[1]:.17g}"])


def _run_snr_histogram(cfg: RunConfig):
    p = cfg.params
    pulse = _pulse(cfg, p)
    grid = default_grid(pulse, dt=cfg["grid.dt"])
    n = cfg["run.n_traj"]
    seed = cfg["run.base_seed"]
    s1 = simulate_ensemble(p, grid, n, seed, n_photon=1)
    s0 = simulate_ensemble(p, grid, n, seed + n, n_photon=0)
    res = estimate_snr_stochastic(s1, s0)
    hist = Histogram.from_samples(s0.values, s1.values)
    rows = [
        (lo, hi, int(c0), int(c1))
        for lo, hi, c0, c1 in zip(hist.bin_edges[:-1], hist.bin_edges[1:],
                                  hist.counts_n0, hist.counts_n1)
    ]
    return ("histogram.csv", ["bin_lo", "bin_hi", "count_n0", "count_n1"],
            rows,
            [f"SNR = {res.snr:.17g} +/- {res.stderr_snr:.17g}",
             f"E[S1] = {res.mean_s1:.17g}, E[S0] = {res.mean_s0:.17g}",
             f"sigma_S = {res.sigma_s:.17g} ({2 * n} trajectories)"])


def _run_detuning_map(cfg: RunConfig):
    p = cfg.params
    deltas = np.linspace(-cfg["map.delta_max"], cfg["map.delta_max"],
                         cfg["map.n_points"])
    rows = []
    best = (-math.inf, 0.0, 0.0)
    for db in deltas:
        for dc in deltas:
            pt = p.with_(delta_b=float(db), delta_c=float(dc))
            pulse = _pulse(cfg, pt)
            res = estimate_snr_deterministic(
                pt, pulse, default_grid(pulse, dt=cfg["grid.dt"])
            )
            rows.append((float(db), float(dc), res.snr))
            if res.snr > best[0]:
                best = (res.snr, float(db), float(dc))
    return ("detuning_map.csv", ["delta_b", "delta_c", "snr"], rows,
            [f"best SNR = {best[0]:.17g} at (delta_b, delta_c) = "
             f"({best[1]:.17g}, {best[2]:.17g})"])


def _run_squeeze_sweep(cfg: RunConfig):
    p = cfg.params
    pulse = _pulse(cfg, p)
    grid = default_grid(pulse, dt=cfg["grid.dt"])
    rows = []
    best = (-math.inf, 0.0)
    for r in np.linspace(0.0, cfg["squeeze.r_max"], cfg["squeeze.n_points"]):
        sq = SqueezeParams(r=float(r), theta=cfg["squeeze.theta"])
        snr = snr_squeezed(p, sq, grid)
        rows.append((sq.r_db, snr))
        if snr > best[0]:
            best = (snr, sq.r_db)
    return ("squeeze.csv", ["r_db", "snr"], rows,
            [f"best SNR = {best[0]:.17g} at {best[1]:.17g} dB "
             f"(theta = {cfg['squeeze.theta']:.17g})"])


def _run_ensemble_rescale(cfg: RunConfig):
    p = cfg.params
    pulse = _pulse(cfg, p)
    grid = default_grid(pulse, dt=cfg["grid.dt"])
    base = estimate_snr_deterministic(p, pulse, grid).snr
    rows = []
    for n in cfg["ensemble.n_values"]:
        scaled, t_factor = ensemble_rescaled_params(p, n)
        g = TimeGrid(dt=grid.dt * t_factor, n_steps=grid.n_steps)
        snr = estimate_snr_deterministic(scaled, _pulse(cfg, scaled), g).snr
        rows.append((n, snr, base, abs(snr - base)))
    worst = max(r[3] for r in rows)
    return ("ensemble.csv", ["n", "snr", "snr_base", "abs_diff"], rows,
            [f"single-transmon SNR = {base:.17g}",
             f"worst |SNR_N - SNR_1| = {worst:.17g}"])


def _run_transmission_spectrum(cfg: RunConfig):
    p = cfg.params
    variant = TransmissionVariant(cfg["trans.variant"])
    deltas = np.linspace(cfg["trans.delta_min"], cfg["trans.delta_max"],
                         cfg["trans.n_points"])
    rows = []
    for d in deltas:
        t = transmission(float(d), float(d), cfg["trans.alpha"], p,
                         cfg["trans.v_g"], variant)
        rows.append((float(d), t.real, t.imag, abs(t) ** 2))
    t0 = transmission(0.0, 0.0, cfg["trans.alpha"], p, cfg["trans.v_g"], variant)
    return ("transmission.csv", ["delta", "t_re", "t_im", "t_abs2"], rows,
            [f"|t(0)|^2 = {abs(t0) ** 2:.17g}"])


def _run_cascade_snr(cfg: RunConfig):
    p = cfg.params
    pulse = _pulse(cfg, p)
    snr1 = estimate_snr_deterministic(
        p, pulse, default_grid(pulse, dt=cfg["grid.dt"])
    ).snr
    t = transmission(0.0, 0.0, cfg["trans.alpha"], p, cfg["trans.v_g"],
                     TransmissionVariant(cfg["trans.variant"]))
    t_prob = abs(t) ** 2
    rows = [(n, snr_cascade(n, snr1, t_prob))
            for n in range(1, cfg["cascade.n_max"] + 1)]
    best = max(rows, key=lambda r: r[1])
    return ("cascade.csv", ["n", "snr_n"], rows,
            [f"SNR_1 = {snr1:.17g}, |t|^2 = {t_prob:.17g}",
             f"best SNR_n = {best[1]:.17g} at n = {best[0]}"])


def _run_fourlevel_compare(cfg: RunConfig):
    omega = cfg["fourlevel.omega"]
    d12 = cfg["fourlevel.delta_12"]
    lam = 0.5 * d12 - 0.5 * math.hypot(d12, omega)
    p4 = FourLevelParams(
        omega_drive=omega, delta_12=d12, delta_10=lam, delta_32=lam,
        gamma_01=1.0, gamma_12=cfg["fourlevel.gamma_12"],
        gamma_32=cfg["fourlevel.gamma_32"],
        alpha=cfg["fourlevel.alpha"], beta_sig=cfg["fourlevel.beta"],
    )
    grid = TimeGrid.from_duration(cfg["fourlevel.t_final"], cfg["grid.dt"])
    times, pop4, pop3 = four_level_populations(p4, grid)
    rows = [(t, a, b, a - b) for t, a, b in zip(times, pop4, pop3)]
    sup = float(np.abs(pop4 - pop3).max())
    return ("fourlevel.csv", ["t", "pop4", "pop3", "diff"], rows,
            [f"sup-norm |pop4 - pop3| = {sup:.17g} "
             f"(Omega = {omega:.17g})"])


def _run_ratio_sweep(cfg: RunConfig):
    p = cfg.params
    rows = ratio_sweep(cfg["ratio.values"], p, dt=cfg["grid.dt"])
    worst = max(r[2] for r in rows)
    return ("ratio.csv", ["ratio", "beta_opt", "snr_opt"], rows,
            [f"largest optimized SNR = {worst:.17g} (all ratios)"])


_RUNNERS = {
    Experiment.POLARISATION: _run_polarisation,
    Experiment.SNR_BETA_SWEEP: _run_snr_beta_sweep,
    Experiment.SNR_HISTOGRAM: _run_snr_histogram,
    Experiment.DETUNING_MAP: _run_detuning_map,
    Experiment.SQUEEZE_SWEEP: _run_squeeze_sweep,
    Experiment.ENSEMBLE_RESCALE: _run_ensemble_rescale,
    Experiment.TRANSMISSION_SPECTRUM: _run_transmission_spectrum,
    Experiment.CASCADE_SNR: _run_cascade_snr,
    Experiment.FOURLEVEL_COMPARE: _run_fourlevel_compare,
    Experiment.RATIO_SWEEP: _run_ratio_sweep,
}


def run_experiment(cfg: RunConfig, out_dir: Path) -> Path:
    """Execute one experiment and write its artifacts; returns the CSV path."""
    out_dir.mkdir(parents=True, exist_ok=True)
    sentinel = out_dir / INCOMPLETE_SENTINEL
    sentinel.write_text("run in progress or aborted\n")
    csv_name, header, rows, summary = _RUNNERS[cfg.experiment](cfg)
    csv_path = out_dir / csv_name
    write_csv(csv_path, header, rows)
    manifest = [
        f"# kerrsnr {_version()}",
        f"# experiment artifact: {csv_name}",
        *cfg.manifest_lines(),
    ]
    (out_dir / "manifest.txt").write_text("\n".join(manifest) + "\n")
    (out_dir / "summary.txt").write_text("\n".join(summary) + "\n")
    sentinel.unlink()
    return csv_path


def _apply_overrides(cfg: RunConfig, args) -> RunConfig:
    if args.seed is not None:
        cfg.values["run.base_seed"] = args.seed
        if "run.base_seed" in cfg.defaulted:
            cfg.defaulted.remove("run.base_seed")
    if args.dt is not None:
        if args.dt <= 0:
            raise ConfigError("--dt must be positive")
        cfg.values["grid.dt"] = args.dt
    if args.ntraj is not None:
        if args.ntraj < 0:
            raise ConfigError("--ntraj must be nonnegative")
        cfg.values["run.n_traj"] = args.ntraj
    if args.out is not None:
        cfg.values["run.output_dir"] = args.out
    if args.threads is not None:
        cfg.values["run.threads"] = args.threads
    return cfg


def _limit_threads(n: int):
    """Cap BLAS threads; returns a restore callable (no-op if unavailable)."""
    if n <= 0:
        return lambda: None
    try:
        from threadpoolctl import threadpool_limits
    except ImportError:
        return lambda: None
    ctl = threadpool_limits(limits=n)
    return lambda: ctl.__exit__(None, None, None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kerrsnr",
        description="Single-photon cross-Kerr detection: simulations and checks",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for exp in Experiment:
        sp = sub.add_parser(exp.value, help=f"run the {exp.value} experiment")
        sp.add_argument("--config", help="key = value configuration file")
        sp.add_argument("--seed", type=int, help="override run.base_seed")
        sp.add_argument("--out", help="override run.output_dir")
        sp.add_argument("--dt", type=float, help="override grid.dt")
        sp.add_argument("--ntraj", type=int, help="override run.n_traj")
        sp.add_argument("--threads", type=int, help="BLAS thread cap")
        sp.set_defaults(experiment=exp)
    chk = sub.add_parser("check", help="run the acceptance criteria")
    chk.add_argument("--fast", action="store_true",
                     help="skip the long-running stochastic criteria")
    chk.set_defaults(experiment=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "check":
            from .acceptance import run_all

            results = run_all(fast=args.fast)
            failed = 0
            for res in results:
                line = "PASS" if res.passed else "FAIL"
                print(f"{line}: {res.name} -- {res.detail}")
                failed += not res.passed
            print(f"{len(results) - failed}/{len(results)} criteria passed")
            return EXIT_OK if failed == 0 else EXIT_CHECK_FAILED

        if args.config is not None:
            cfg = load_config(args.config, experiment=args.experiment)
        else:
            if args.seed is None:
                raise ConfigError(
                    "run.base_seed is required: pass --config or --seed"
                )
            from .config import parse_config_text

            text = (f"experiment = {args.experiment.value}\n"
                    f"run.base_seed = {args.seed}\n")
            if args.ntraj is not None:
                text += f"run.n_traj = {args.ntraj}\n"
            cfg = parse_config_text(text)
        cfg = _apply_overrides(cfg, args)
        from .config import _validate

        _validate(cfg)  # overrides must satisfy the same invariants
        restore_threads = _limit_threads(cfg.values["run.threads"])
        try:
            csv_path = run_experiment(cfg, Path(cfg.values["run.output_dir"]))
        finally:
            restore_threads()
        print(f"wrote {csv_path}")
        return EXIT_OK
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
