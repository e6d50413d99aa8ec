"""Single-photon temporal wave-packet envelopes f(t), normalized to one photon.

Every shape satisfies the one-photon condition int_0^inf |f(t)|^2 dt = 1 with
closed-form normalization constants. The characteristic width of all shapes is
tau = 1/gamma_con; the Gaussian is centered at 3*tau so that f(0) is
negligible, and its truncation at t = 0 is renormalized analytically.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erf, erfinv


class PulseKind(enum.Enum):
    EXPONENTIAL = "exponential"
    GAUSSIAN = "gaussian"
    RECTANGULAR = "rectangular"


@dataclass(frozen=True)
class PulseShape:
    kind: PulseKind
    width_param: float  # tau = 1/gamma_con
    t_offset: float = 0.0  # Gaussian center / rectangular start

    def __post_init__(self):
        if self.width_param <= 0:
            raise ValueError("width_param must be positive")
        if self.t_offset < 0:
            raise ValueError("t_offset must be nonnegative")

    @classmethod
    def exponential(cls, gamma_con: float) -> "PulseShape":
        return cls(PulseKind.EXPONENTIAL, width_param=1.0 / gamma_con)

    @classmethod
    def gaussian(cls, gamma_con: float) -> "PulseShape":
        tau = 1.0 / gamma_con
        return cls(PulseKind.GAUSSIAN, width_param=tau, t_offset=3.0 * tau)

    @classmethod
    def rectangular(cls, gamma_con: float) -> "PulseShape":
        return cls(PulseKind.RECTANGULAR, width_param=1.0 / gamma_con)


def amplitude(p: PulseShape, t):
    """Envelope f(t); accepts scalars or arrays, defined for t >= 0 only."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("pulse amplitude requested at t < 0")
    tau = p.width_param
    if p.kind is PulseKind.EXPONENTIAL:
        g = 1.0 / tau
        out = np.sqrt(g) * np.exp(-0.5 * g * t)
    elif p.kind is PulseKind.GAUSSIAN:
        t0 = p.t_offset
        # |f|^2 = norm^2 exp(-(t-t0)^2/tau^2); int_0^inf |f|^2 dt = 1
        norm_sq = 1.0 / (0.5 * math.sqrt(math.pi) * tau * (1.0 + erf(t0 / tau)))
        out = np.sqrt(norm_sq) * np.exp(-0.5 * ((t - t0) / tau) ** 2)
    elif p.kind is PulseKind.RECTANGULAR:
        inside = (t >= p.t_offset) & (t < p.t_offset + tau)
        out = np.where(inside, 1.0 / math.sqrt(tau), 0.0)
    else:  # pragma: no cover
        raise ValueError(f"unknown pulse kind {p.kind}")
    return out if out.ndim else float(out)


def captured_fraction(p: PulseShape, t_final: float) -> float:
    """Closed-form int_0^T |f(t)|^2 dt."""
    tau = p.width_param
    if p.kind is PulseKind.EXPONENTIAL:
        return 1.0 - math.exp(-t_final / tau)
    if p.kind is PulseKind.GAUSSIAN:
        t0 = p.t_offset
        return (erf((t_final - t0) / tau) + erf(t0 / tau)) / (1.0 + erf(t0 / tau))
    if p.kind is PulseKind.RECTANGULAR:
        return min(max((t_final - p.t_offset) / tau, 0.0), 1.0)
    raise ValueError(f"unknown pulse kind {p.kind}")  # pragma: no cover


def capture_horizon(p: PulseShape, epsilon: float, dt: float | None = None) -> float:
    """Smallest T (grid-aligned when dt is given) with int_0^T |f|^2 >= 1 - epsilon."""
    if not (0.0 < epsilon < 1.0):
        raise ValueError("epsilon must lie in (0, 1)")
    tau = p.width_param
    if p.kind is PulseKind.EXPONENTIAL:
        t = -tau * math.log(epsilon)
    elif p.kind is PulseKind.GAUSSIAN:
        t0 = p.t_offset
        target = (1.0 - epsilon) * (1.0 + erf(t0 / tau)) - erf(t0 / tau)
        t = t0 + tau * float(erfinv(target))
    elif p.kind is PulseKind.RECTANGULAR:
        t = p.t_offset + tau
    else:  # pragma: no cover
        raise ValueError(f"unknown pulse kind {p.kind}")
    if dt is not None:
        t = math.ceil(t / dt - 1e-12) * dt
    return t
