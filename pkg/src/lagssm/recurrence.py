"""Online memory recurrence, reconstruction, and the direct-projection oracle.

The recurrence advances a coefficient vector c by c' = a c + b u.  Note the
orientation: matrices from lagssm.matrices shift the *basis* stack, and
coefficients transform with their transposes.  In particular the transition
that tracks the measure-weighted projection of the history is the transpose
of the corrected basis transition (equivalently matrix_exp(delta * a_hippo));
project_direct is the offline oracle for exactly that quantity.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .basis import BasisSpec, phi_matrix
from .errors import ArgumentError, DomainError
from .matrices import FohVectors
from .quadrature import QuadratureConfig, panel_nodes
from .warp import WarpSpec, warp_forward, warp_inverse

_UNIFORM_TOL = 1e-12


@dataclass(frozen=True)
class MemoryState:
    """Coefficient vector plus the time it describes."""

    coeffs: np.ndarray
    t: float

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.ndim != 1:
            raise ArgumentError(f"coeffs must be a vector, got shape {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ArgumentError("coeffs must be finite")
        object.__setattr__(self, "coeffs", c)


@dataclass(frozen=True)
class SignalTrace:
    """Uniformly spaced samples (times[i], values[i]) with spacing delta."""

    times: np.ndarray
    values: np.ndarray
    delta: float

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if t.ndim != 1 or t.shape != v.shape or t.size == 0:
            raise ArgumentError("times and values must be equal-length 1-D arrays")
        if self.delta <= 0.0:
            raise ArgumentError(f"delta must be positive, got {self.delta}")
        if t.size > 1:
            gaps = np.diff(t)
            if np.any(gaps <= 0.0):
                raise ArgumentError("times must be strictly increasing")
            if np.max(np.abs(gaps - self.delta)) > _UNIFORM_TOL:
                raise ArgumentError("times must be uniformly spaced by delta")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_values(cls, values, delta: float, t0: float = 0.0) -> "SignalTrace":
        values = np.asarray(values, dtype=float)
        times = t0 + delta * np.arange(values.size)
        return cls(times=times, values=values, delta=delta)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "u"])
            for t, u in zip(self.times, self.values):
                writer.writerow([repr(float(t)), repr(float(u))])

    @classmethod
    def from_csv(cls, path) -> "SignalTrace":
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
        if rows and rows[0][:2] == ["t", "u"]:
            rows = rows[1:]
        if not rows:
            raise ArgumentError(f"no samples in {path}")
        times = np.array([float(r[0]) for r in rows])
        values = np.array([float(r[1]) for r in rows])
        if times.size == 1:
            raise ArgumentError("need at least two samples to infer delta")
        delta = float(times[1] - times[0])
        return cls(times=times, values=values, delta=delta)


def _apply_step(coeffs, a, b_model, u_next, u_prev):
    if isinstance(b_model, FohVectors):
        if u_prev is None:
            raise ArgumentError("first-order-hold input needs u_prev")
        return a @ coeffs + b_model.v_next * u_next + b_model.v_prev * u_prev
    return a @ coeffs + np.asarray(b_model) * u_next


def step(
    state: MemoryState,
    a: np.ndarray,
    b_model,
    u_next: float,
    u_prev: float | None = None,
    *,
    delta: float,
) -> MemoryState:
    """One update c' = a c + (input contribution); time advances by delta."""
    return MemoryState(
        coeffs=_apply_step(state.coeffs, a, b_model, u_next, u_prev),
        t=state.t + delta,
    )


def run(trace: SignalTrace, a: np.ndarray, b_model) -> list[MemoryState]:
    """Fold step over the trace from the zero state at t = 0.

    Sample k covers the interval [k delta, (k+1) delta), so the state after
    consuming it sits at (k+1) delta.  Times are step-count multiples of
    delta rather than a running float sum.  Returns the initial state
    followed by one state per sample.
    """
    n = a.shape[0]
    delta = trace.delta
    states = [MemoryState(coeffs=np.zeros(n), t=0.0)]
    coeffs = states[0].coeffs
    u_prev = 0.0
    for k, u in enumerate(trace.values):
        coeffs = _apply_step(coeffs, a, b_model, float(u), u_prev)
        states.append(MemoryState(coeffs=coeffs, t=(k + 1) * delta))
        u_prev = float(u)
    return states


def reconstruct(
    state: MemoryState, basis: BasisSpec, warp: WarpSpec, s_grid
) -> np.ndarray:
    """Evaluate sum_n c_n phi_n(sigma_t(s)) on the grid of history times."""
    s = np.atleast_1d(np.asarray(s_grid, dtype=float))
    if np.any(s > state.t):
        raise DomainError(f"grid points must not exceed t={state.t}")
    z = warp_forward(warp, state.t, s)
    return state.coeffs @ phi_matrix(basis, z)


def project_direct(
    u,
    basis: BasisSpec,
    warp: WarpSpec,
    t: float,
    quad: QuadratureConfig = QuadratureConfig(),
) -> MemoryState:
    """Offline oracle: measure-weighted projection of the history onto the
    warped basis, computed as c_n = integral of phi_n(z) u(sigma_t^{-1}(z))
    over the canonical interval."""
    z, w = panel_nodes(0.0, 1.0, quad)
    s = warp_inverse(warp, t, z)
    vals = np.asarray([u(si) for si in s], dtype=float)
    if not np.all(np.isfinite(vals)):
        bad = s[~np.isfinite(vals)][0]
        raise DomainError(f"signal non-finite at s={bad!r}")
    coeffs = phi_matrix(basis, z) @ (w * vals)
    return MemoryState(coeffs=coeffs, t=t)


def save_trajectory_csv(path, states: list[MemoryState]) -> None:
    """Columns t, c_0 ... c_{N-1}."""
    n = states[0].coeffs.size
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t"] + [f"c_{i}" for i in range(n)])
        for st in states:
            writer.writerow([repr(float(st.t))] + [repr(float(c)) for c in st.coeffs])


def save_reconstruction_csv(path, s_grid, u_hat, u_true=None, omega=None) -> None:
    """Columns s, u_hat, then u_true and omega when available."""
    cols = [("s", np.asarray(s_grid, float)), ("u_hat", np.asarray(u_hat, float))]
    if u_true is not None:
        cols.append(("u_true", np.asarray(u_true, float)))
    if omega is not None:
        cols.append(("omega", np.asarray(omega, float)))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([name for name, _ in cols])
        for i in range(len(cols[0][1])):
            writer.writerow([repr(float(col[i])) for _, col in cols])
