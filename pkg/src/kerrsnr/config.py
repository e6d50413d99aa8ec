"""Strict flat key-value run configuration.

Format: one `key = value` per line, dotted section prefixes, `#` comments.
Unknown keys are hard errors (anti-typo), required keys must be present
(no entropy defaults for seeds), and every applied default is echoed to the
run manifest so a run is fully reproducible from its artifacts.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from pathlib import Path

from .params import DEFAULT_DT, SystemParams
from .pulses import PulseKind


class ConfigError(ValueError):
    pass


class Experiment(enum.Enum):
    POLARISATION = "polarisation"
    SNR_BETA_SWEEP = "snr_beta_sweep"
    SNR_HISTOGRAM = "snr_histogram"
    DETUNING_MAP = "detuning_map"
    SQUEEZE_SWEEP = "squeeze_sweep"
    ENSEMBLE_RESCALE = "ensemble_rescale"
    TRANSMISSION_SPECTRUM = "transmission_spectrum"
    CASCADE_SNR = "cascade_snr"
    FOURLEVEL_COMPARE = "fourlevel_compare"
    RATIO_SWEEP = "ratio_sweep"


def _parse_bool(s: str) -> bool:
    low = s.lower()
    if low in ("true", "yes", "1"):
        return True
    if low in ("false", "no", "0"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _parse_float_list(s: str) -> list[float]:
    return [float(x) for x in s.replace(",", " ").split()]


def _parse_int_list(s: str) -> list[int]:
    return [int(x) for x in s.replace(",", " ").split()]


@dataclass(frozen=True)
class KeySpec:
    parse: object
    default: object = None       # None + required=True means must be present
    required: bool = False
    experiments: tuple = ()      # empty tuple = valid for every experiment


_COMMON_KEYS: dict[str, KeySpec] = {
    "experiment": KeySpec(str),
    "params.gamma_b": KeySpec(float, 1.0),
    "params.gamma_c": KeySpec(float, 2.0),
    "params.gamma_con": KeySpec(float, 0.6672),
    "params.delta_b": KeySpec(float, 0.0),
    "params.delta_c": KeySpec(float, 0.0),
    "params.beta": KeySpec(float, 0.4),
    "grid.dt": KeySpec(float, DEFAULT_DT),
    "pulse.kind": KeySpec(str, "exponential"),
    "run.base_seed": KeySpec(int, required=True),
    "run.n_traj": KeySpec(int, 0),
    "run.output_dir": KeySpec(str, "out"),
    "run.threads": KeySpec(int, 0),
}

_EXPERIMENT_KEYS: dict[str, KeySpec] = {
    "sweep.beta_min": KeySpec(float, 0.05, experiments=(Experiment.SNR_BETA_SWEEP,)),
    "sweep.beta_max": KeySpec(float, 1.2, experiments=(Experiment.SNR_BETA_SWEEP,)),
    "sweep.n_points": KeySpec(int, 24, experiments=(Experiment.SNR_BETA_SWEEP,)),
    "sweep.method": KeySpec(str, "deterministic", experiments=(Experiment.SNR_BETA_SWEEP,)),
    "map.delta_max": KeySpec(float, 2.0, experiments=(Experiment.DETUNING_MAP,)),
    "map.n_points": KeySpec(int, 11, experiments=(Experiment.DETUNING_MAP,)),
    "squeeze.r_max": KeySpec(float, 1.5, experiments=(Experiment.SQUEEZE_SWEEP,)),
    "squeeze.n_points": KeySpec(int, 16, experiments=(Experiment.SQUEEZE_SWEEP,)),
    "squeeze.theta": KeySpec(float, math.pi, experiments=(Experiment.SQUEEZE_SWEEP,)),
    "ensemble.n_values": KeySpec(_parse_int_list, [2, 10],
                                 experiments=(Experiment.ENSEMBLE_RESCALE,)),
    "trans.delta_min": KeySpec(float, -8.0, experiments=(Experiment.TRANSMISSION_SPECTRUM,)),
    "trans.delta_max": KeySpec(float, 8.0, experiments=(Experiment.TRANSMISSION_SPECTRUM,)),
    "trans.n_points": KeySpec(int, 401, experiments=(Experiment.TRANSMISSION_SPECTRUM,)),
    "trans.alpha": KeySpec(float, 1.0, experiments=(Experiment.TRANSMISSION_SPECTRUM,
                                                    Experiment.CASCADE_SNR)),
    "trans.v_g": KeySpec(float, 0.3, experiments=(Experiment.TRANSMISSION_SPECTRUM,
                                                  Experiment.CASCADE_SNR)),
    "trans.variant": KeySpec(str, "printed", experiments=(Experiment.TRANSMISSION_SPECTRUM,
                                                          Experiment.CASCADE_SNR)),
    "cascade.n_max": KeySpec(int, 20, experiments=(Experiment.CASCADE_SNR,)),
    "fourlevel.omega": KeySpec(float, 10.0, experiments=(Experiment.FOURLEVEL_COMPARE,)),
    "fourlevel.delta_12": KeySpec(float, 0.0, experiments=(Experiment.FOURLEVEL_COMPARE,)),
    "fourlevel.gamma_12": KeySpec(float, 1.0, experiments=(Experiment.FOURLEVEL_COMPARE,)),
    "fourlevel.gamma_32": KeySpec(float, 1.0, experiments=(Experiment.FOURLEVEL_COMPARE,)),
    "fourlevel.alpha": KeySpec(float, 1.0, experiments=(Experiment.FOURLEVEL_COMPARE,)),
    "fourlevel.beta": KeySpec(float, 1.0, experiments=(Experiment.FOURLEVEL_COMPARE,)),
    "fourlevel.t_final": KeySpec(float, 8.0, experiments=(Experiment.FOURLEVEL_COMPARE,)),
    "ratio.values": KeySpec(_parse_float_list, [1.0, 2.0, 5.0, 10.0, 30.0, 100.0],
                            experiments=(Experiment.RATIO_SWEEP,)),
}

ALL_KEYS = {**_COMMON_KEYS, **_EXPERIMENT_KEYS}

_STOCHASTIC_EXPERIMENTS = (Experiment.SNR_HISTOGRAM,)


@dataclass
class RunConfig:
    experiment: Experiment
    values: dict[str, object]
    defaulted: list[str]               # keys that fell back to their defaults
    source_path: str | None = None

    def __getitem__(self, key: str):
        return self.values[key]

    @property
    def params(self) -> SystemParams:
        try:
            return SystemParams(
                gamma_b=self.values["params.gamma_b"],
                gamma_c=self.values["params.gamma_c"],
                gamma_con=self.values["params.gamma_con"],
                delta_b=self.values["params.delta_b"],
                delta_c=self.values["params.delta_c"],
                beta=self.values["params.beta"],
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    @property
    def pulse_kind(self) -> PulseKind:
        name = self.values["pulse.kind"]
        try:
            return PulseKind(name)
        except ValueError:
            raise ConfigError(
                f"pulse.kind must be one of "
                f"{[k.value for k in PulseKind]}, got {name!r}"
            ) from None

    def manifest_lines(self) -> list[str]:
        lines = [f"experiment = {self.experiment.value}"]
        for key in sorted(self.values):
            if key == "experiment":
                continue
            val = self.values[key]
            if isinstance(val, list):
                val = ",".join(str(v) for v in val)
            tag = "  # default" if key in self.defaulted else ""
            lines.append(f"{key} = {val}{tag}")
        return lines


def parse_config_text(text: str, experiment: Experiment | None = None,
                      source: str | None = None) -> RunConfig:
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, _, val = stripped.partition("=")
        key = key.strip()
        val = val.strip()
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        if key not in ALL_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        raw[key] = val

    if "experiment" in raw:
        try:
            declared = Experiment(raw["experiment"])
        except ValueError:
            raise ConfigError(
                f"unknown experiment {raw['experiment']!r}; expected one of "
                f"{[e.value for e in Experiment]}"
            ) from None
        if experiment is not None and declared is not experiment:
            raise ConfigError(
                f"config declares experiment {declared.value!r} but "
                f"{experiment.value!r} was requested"
            )
        experiment = declared
    if experiment is None:
        raise ConfigError("missing required key 'experiment'")

    values: dict[str, object] = {"experiment": experiment.value}
    defaulted: list[str] = []
    for key, spec in ALL_KEYS.items():
        if key == "experiment":
            continue
        scoped = not spec.experiments or experiment in spec.experiments
        if key in raw:
            if not scoped:
                raise ConfigError(
                    f"key {key!r} is not valid for experiment {experiment.value!r}"
                )
            try:
                values[key] = spec.parse(raw[key])
            except ValueError as exc:
                raise ConfigError(f"invalid value for {key!r}: {exc}") from exc
        elif scoped:
            if spec.required:
                raise ConfigError(f"missing required key {key!r}")
            values[key] = spec.default
            defaulted.append(key)

    cfg = RunConfig(experiment=experiment, values=values, defaulted=defaulted,
                    source_path=source)
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig) -> None:
    cfg.params  # raises ConfigError on non-physical values
    cfg.pulse_kind
    if cfg.values["grid.dt"] <= 0:
        raise ConfigError("grid.dt must be positive")
    if cfg.values["run.n_traj"] < 0:
        raise ConfigError("run.n_traj must be nonnegative")
    if cfg.experiment in _STOCHASTIC_EXPERIMENTS and cfg.values["run.n_traj"] < 2:
        raise ConfigError(
            f"experiment {cfg.experiment.value!r} needs run.n_traj >= 2"
        )
    if cfg.experiment is Experiment.SNR_BETA_SWEEP:
        method = cfg.values["sweep.method"]
        if method not in ("deterministic", "stochastic"):
            raise ConfigError(
                f"sweep.method must be 'deterministic' or 'stochastic', got {method!r}"
            )
        if method == "stochastic" and cfg.values["run.n_traj"] < 2:
            raise ConfigError("stochastic sweep.method needs run.n_traj >= 2")
        if not cfg.values["sweep.beta_min"] < cfg.values["sweep.beta_max"]:
            raise ConfigError("sweep.beta_min must be below sweep.beta_max")
    if cfg.experiment is Experiment.CASCADE_SNR or \
            cfg.experiment is Experiment.TRANSMISSION_SPECTRUM:
        if cfg.values["trans.variant"] not in ("printed", "uniform"):
            raise ConfigError("trans.variant must be 'printed' or 'uniform'")
        if cfg.values["trans.v_g"] <= 0:
            raise ConfigError("trans.v_g must be positive")


def load_config(path: str | Path, experiment: Experiment | None = None) -> RunConfig:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {p}")
    return parse_config_text(p.read_text(), experiment=experiment, source=str(p))
