"""Test-signal generators: a Lorenz63 x-trace and deterministic synthetics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, NumericError
from .recurrence import SignalTrace

MAX_LORENZ_DT = 0.02


@dataclass(frozen=True)
class LorenzParams:
    """Fixed-step RK4 integration setup for the Lorenz63 system."""

    sigma: float = 10.0
    rho: float = 28.0
    beta: float = 8.0 / 3.0
    x0: tuple[float, float, float] = (1.0, 1.0, 1.0)
    dt: float = 0.01
    steps: int = 1000
    burn_in: int = 1000

    def __post_init__(self):
        if not (0.0 < self.dt <= MAX_LORENZ_DT):
            raise ArgumentError(f"dt must be in (0, {MAX_LORENZ_DT}], got {self.dt}")
        if self.steps <= 0:
            raise ArgumentError(f"steps must be positive, got {self.steps}")
        if self.burn_in < 0:
            raise ArgumentError(f"burn_in must be nonnegative, got {self.burn_in}")


def lorenz_rhs(state: np.ndarray, sigma: float, rho: float, beta: float) -> np.ndarray:
    x, y, z = state
    return np.array([sigma * (y - x), x * (rho - z) - y, x * y - beta * z])


def rk4_step(state: np.ndarray, dt: float, sigma: float, rho: float, beta: float) -> np.ndarray:
    """One classical fourth-order Runge-Kutta step of the Lorenz system."""
    k1 = lorenz_rhs(state, sigma, rho, beta)
    k2 = lorenz_rhs(state + 0.5 * dt * k1, sigma, rho, beta)
    k3 = lorenz_rhs(state + 0.5 * dt * k2, sigma, rho, beta)
    k4 = lorenz_rhs(state + dt * k3, sigma, rho, beta)
    return state + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def lorenz63(params: LorenzParams) -> SignalTrace:
    """x-component after burn-in, timestamped from 0 with spacing dt."""
    state = np.asarray(params.x0, dtype=float)
    out = np.empty(params.steps)
    for i in range(params.burn_in + params.steps):
        state = rk4_step(state, params.dt, params.sigma, params.rho, params.beta)
        if not np.all(np.isfinite(state)):
            raise NumericError(f"Lorenz trajectory diverged at step {i}")
        if i >= params.burn_in:
            out[i - params.burn_in] = state[0]
    return SignalTrace.from_values(out, delta=params.dt)


def sine_mixture(freqs, amps, phases, delta: float, steps: int) -> SignalTrace:
    """Samples of sum_i amps[i] * sin(2 pi freqs[i] t + phases[i])."""
    freqs = np.asarray(freqs, dtype=float)
    amps = np.asarray(amps, dtype=float)
    phases = np.asarray(phases, dtype=float)
    if not (freqs.shape == amps.shape == phases.shape):
        raise ArgumentError("freqs, amps, phases must have equal lengths")
    t = delta * np.arange(steps)
    if freqs.size == 0:
        values = np.zeros(steps)
    else:
        values = (amps[:, None] * np.sin(2.0 * np.pi * freqs[:, None] * t + phases[:, None])).sum(axis=0)
    return SignalTrace.from_values(values, delta=delta)


def zoh_function(trace: SignalTrace):
    """Piecewise-constant extension: sample k holds on [k delta, (k+1) delta).

    Returns 0 before the trace starts and after it ends; interval boundaries
    are right-continuous (a point exactly at k delta reads sample k).
    """
    t0 = float(trace.times[0])
    delta = trace.delta
    values = trace.values
    m = values.size

    def u(s):
        s_arr = np.asarray(s, dtype=float)
        idx = np.floor((s_arr - t0) / delta).astype(int)
        # Division can land an on-grid point an ulp below its boundary;
        # bump it so boundaries stay right-continuous.
        idx = np.where(s_arr >= t0 + (idx + 1) * delta, idx + 1, idx)
        inside = (s_arr >= t0) & (idx < m)
        out = np.where(inside, values[np.clip(idx, 0, m - 1)], 0.0)
        return float(out) if np.ndim(s) == 0 else out

    return u


def normalize_trace(trace: SignalTrace) -> SignalTrace:
    """Affine normalization to zero mean and unit max-abs."""
    v = trace.values - trace.values.mean()
    peak = np.abs(v).max()
    if peak == 0.0:
        return SignalTrace(times=trace.times.copy(), values=v, delta=trace.delta)
    return SignalTrace(times=trace.times.copy(), values=v / peak, delta=trace.delta)
