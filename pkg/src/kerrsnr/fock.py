"""Deterministic integrator for the one-photon Fock-state master-equation hierarchy.

The joint transmon-plus-photon state is described by four coupled 3x3 blocks
(rho00, rho01, rho10, rho11) driven by the pulse envelope f(t): the vacuum
block rho00 is stationary for a ground-state transmon, it sources the
coherence blocks rho01/rho10, which in turn source the physical block rho11.
The four blocks are stacked into a 36-component vector and advanced with a
fixed-step classical Runge-Kutta scheme, which keeps regression tests
bit-stable and is comfortably non-stiff at the rate magnitudes of interest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import DEFAULT_DT, RINGDOWN_TIME, SystemParams, TimeGrid
from .pulses import PulseShape, amplitude, capture_horizon
from .qutrit import (
    hamiltonian,
    liouvillian,
    lowering_b,
    lowering_c,
    spost,
    spre,
    y_operator,
)

# slices of the stacked hierarchy vector
B00 = slice(0, 9)
B01 = slice(9, 18)
B10 = slice(18, 27)
B11 = slice(27, 36)

TRACE_DRIFT_TOL = 1e-6
CAPTURE_EPSILON = math.exp(-10.0)


class IntegrationFailureError(RuntimeError):
    pass


@dataclass
class FockHierarchy:
    rho00: np.ndarray
    rho01: np.ndarray
    rho10: np.ndarray
    rho11: np.ndarray

    @classmethod
    def ground(cls) -> "FockHierarchy":
        g = np.zeros((3, 3), dtype=complex)
        g[0, 0] = 1.0  # |a><a|
        z = np.zeros((3, 3), dtype=complex)
        return cls(g.copy(), z.copy(), z.copy(), g.copy())

    def to_vec(self) -> np.ndarray:
        return np.concatenate(
            [self.rho00.ravel(), self.rho01.ravel(), self.rho10.ravel(), self.rho11.ravel()]
        )

    @classmethod
    def from_vec(cls, v: np.ndarray) -> "FockHierarchy":
        return cls(
            v[B00].reshape(3, 3).copy(),
            v[B01].reshape(3, 3).copy(),
            v[B10].reshape(3, 3).copy(),
            v[B11].reshape(3, 3).copy(),
        )


class FockGenerator:
    """Time-dependent linear generator of the stacked hierarchy."""

    def __init__(self, p: SystemParams, pulse: PulseShape):
        self.params = p
        self.pulse = pulse
        lb = lowering_b(p)
        lc = lowering_c(p)
        lsys = liouvillian(hamiltonian(p), [lb, lc])
        l0 = np.zeros((36, 36), dtype=complex)
        for blk in (B00, B01, B10, B11):
            l0[blk, blk] = lsys
        # f(t) couplings: rho10 <- [rho00, Lb+], rho11 <- [rho01, Lb+]
        right = spost(lb.conj().T) - spre(lb.conj().T)
        # f*(t) couplings: rho01 <- [Lb, rho00], rho11 <- [Lb, rho10]
        left = spre(lb) - spost(lb)
        l1 = np.zeros((36, 36), dtype=complex)
        l1[B10, B00] = right
        l1[B11, B01] = right
        l2 = np.zeros((36, 36), dtype=complex)
        l2[B01, B00] = left
        l2[B11, B10] = left
        self.l0, self.l1, self.l2 = l0, l1, l2
        yv = y_operator(p).conj().ravel()
        self.y_weights = np.zeros(36, dtype=complex)
        self.y_weights[B11] = yv

    def envelope(self, t) -> np.ndarray:
        return amplitude(self.pulse, t)

    def matrix(self, t: float) -> np.ndarray:
        f = complex(self.envelope(t))
        return self.l0 + f * self.l1 + f.conjugate() * self.l2

    def y_expect(self, v: np.ndarray) -> float:
        # Tr[y rho] = sum_ij conj(y_ij) rho_ij for Hermitian y
        return float(np.real(np.dot(self.y_weights, v)))


def default_grid(pulse: PulseShape, dt: float = DEFAULT_DT,
                 epsilon: float = CAPTURE_EPSILON,
                 ringdown: float = RINGDOWN_TIME) -> TimeGrid:
    """Grid covering the pulse capture horizon plus a ring-down tail."""
    t_final = capture_horizon(pulse, epsilon, dt=dt) + ringdown
    return TimeGrid.from_duration(t_final, dt)


def _rk4_sweep(gen: FockGenerator, v0: np.ndarray, grid: TimeGrid,
               callback=None) -> np.ndarray:
    """Integrate dv/dt = L(t) v over the grid; returns v at all samples."""
    dt = grid.dt
    n = grid.n_steps
    out = np.empty((n + 1, v0.size), dtype=complex)
    out[0] = v0
    v = v0.copy()
    mat_t = gen.matrix(0.0)
    for k in range(n):
        t = k * dt
        mat_half = gen.matrix(t + 0.5 * dt)
        mat_next = gen.matrix(t + dt)
        k1 = mat_t @ v
        k2 = mat_half @ (v + 0.5 * dt * k1)
        k3 = mat_half @ (v + 0.5 * dt * k2)
        k4 = mat_next @ (v + dt * k3)
        v = v + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[k + 1] = v
        mat_t = mat_next
        if callback is not None:
            callback(k + 1, v)
    return out


def _check_traces(step: int, v: np.ndarray, dt: float) -> None:
    tr11 = (v[B11].reshape(3, 3).trace()).real
    tr01 = abs(v[B01].reshape(3, 3).trace())
    if abs(tr11 - 1.0) > TRACE_DRIFT_TOL or tr01 > TRACE_DRIFT_TOL:
        raise IntegrationFailureError(
            f"hierarchy trace drift at step {step} (t={step * dt:.4f}): "
            f"|Tr rho11 - 1| = {abs(tr11 - 1.0):.2e}, |Tr rho01| = {tr01:.2e}; "
            f"reduce the step size (current dt = {dt:g})"
        )


@dataclass
class FockEvolution:
    times: np.ndarray
    y: np.ndarray          # <y(t)> at every sample
    states: np.ndarray     # stacked hierarchy vectors, shape (n+1, 36)
    generator: FockGenerator

    def hierarchy_at(self, k: int) -> FockHierarchy:
        return FockHierarchy.from_vec(self.states[k])


def evolve_hierarchy(p: SystemParams, pulse: PulseShape,
                     grid: TimeGrid | None = None) -> FockEvolution:
    """Integrate the one-photon hierarchy from the transmon ground state."""
    gen = FockGenerator(p, pulse)
    if grid is None:
        grid = default_grid(pulse)
    v0 = FockHierarchy.ground().to_vec()
    check = lambda k, v: _check_traces(k, v, grid.dt)
    states = _rk4_sweep(gen, v0, grid, callback=check)
    y = np.array([gen.y_expect(v) for v in states])
    return FockEvolution(times=grid.times(), y=y, states=states, generator=gen)


def expected_signal(p: SystemParams, pulse: PulseShape,
                    grid: TimeGrid | None = None) -> float:
    """Noise-free mean integrated signal E[S1] = int_0^T <y(t)> dt (trapezoid)."""
    evo = evolve_hierarchy(p, pulse, grid)
    return float(np.trapezoid(evo.y, evo.times))
