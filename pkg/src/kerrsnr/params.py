"""Physical parameters and time grids.

All rates and frequencies are expressed in units of the lower-transition
decay rate gamma_b (gamma_b = 1 in the default configurations), matching
the convention used throughout the figure captions.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace


class OmegaPConvention(enum.Enum):
    """Convention for the probe Rabi rate Omega_p built from the amplitude beta.

    SQRT_GAMMA_C  : Omega_p = sqrt(gamma_c) * beta (consistent with the
                    closed-form resonant solution and the n-transmon model;
                    the default).
    SQRT_GAMMA_CON: Omega_p = sqrt(gamma_con) * beta (the main-text variant,
                    selectable for comparison).
    """

    SQRT_GAMMA_C = "sqrt_gamma_c"
    SQRT_GAMMA_CON = "sqrt_gamma_con"


@dataclass(frozen=True)
class SystemParams:
    """All rates, detunings and amplitudes of the driven three-level system.

    gamma_b   : |a> <-> |b> decay rate (sets the unit system).
    gamma_c   : |b> <-> |c> decay rate (2*gamma_b for a transmon).
    gamma_con : bandwidth of the control-photon source cavity.
    delta_b   : detuning of the control field from the a-b transition.
    delta_c   : two-photon detuning (delta_p + delta_b).
    beta      : probe amplitude, in units sqrt(rate).
    """

    gamma_b: float = 1.0
    gamma_c: float = 2.0
    gamma_con: float = 1.0
    delta_b: float = 0.0
    delta_c: float = 0.0
    beta: float = 0.0
    omega_p_convention: OmegaPConvention = OmegaPConvention.SQRT_GAMMA_C

    def __post_init__(self):
        for name in ("gamma_b", "gamma_c", "gamma_con"):
            val = getattr(self, name)
            if not (math.isfinite(val) and val > 0):
                raise ValueError(f"{name} must be positive and finite, got {val}")
        if not (math.isfinite(self.beta) and self.beta >= 0):
            raise ValueError(f"beta must be nonnegative and finite, got {self.beta}")
        for name in ("delta_b", "delta_c"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    @property
    def omega_p(self) -> float:
        if self.omega_p_convention is OmegaPConvention.SQRT_GAMMA_C:
            return math.sqrt(self.gamma_c) * self.beta
        return math.sqrt(self.gamma_con) * self.beta

    def with_(self, **kwargs) -> "SystemParams":
        return replace(self, **kwargs)


@dataclass(frozen=True)
class TimeGrid:
    """Uniform integration grid on [0, T] with T = n_steps * dt."""

    dt: float
    n_steps: int

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.n_steps < 1:
            raise ValueError("n_steps must be >= 1")

    @property
    def t_final(self) -> float:
        return self.n_steps * self.dt

    def times(self):
        import numpy as np

        return np.arange(self.n_steps + 1) * self.dt

    @classmethod
    def from_duration(cls, t_final: float, dt: float) -> "TimeGrid":
        """Grid covering at least t_final, aligned to an integer step count."""
        n = max(1, math.ceil(t_final / dt - 1e-12))
        return cls(dt=dt, n_steps=n)


DEFAULT_DT = 1e-3
RINGDOWN_TIME = 5.0  # extra evolution after the pulse, units of 1/gamma_b
