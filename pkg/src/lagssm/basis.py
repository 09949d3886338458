"""Shifted, normalized Legendre basis on the canonical interval (0, 1].

phi_n(z) = sqrt(2n+1) * P_n(2z - 1), orthonormal under the plain Lebesgue
inner product on (0, 1].  Arguments outside (0, 1] are allowed: the
polynomials extend analytically, and the discrete-transition integrands
evaluate them slightly beyond 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError

LEGENDRE_SHIFTED = "legendre_shifted"

MAX_BASIS_SIZE = 256


@dataclass(frozen=True)
class BasisSpec:
    """An orthonormal polynomial family and its truncation size."""

    n_basis: int
    family: str = LEGENDRE_SHIFTED

    def __post_init__(self):
        if self.family != LEGENDRE_SHIFTED:
            raise ArgumentError(f"unknown basis family: {self.family!r}")
        if not (1 <= self.n_basis <= MAX_BASIS_SIZE):
            raise ArgumentError(
                f"n_basis must be in [1, {MAX_BASIS_SIZE}], got {self.n_basis}"
            )


def _check_index(spec: BasisSpec, n: int) -> None:
    if not (0 <= n < spec.n_basis):
        raise ArgumentError(f"basis index {n} out of range [0, {spec.n_basis})")


def eval_phi(spec: BasisSpec, n: int, z: float) -> float:
    """Evaluate phi_n(z) by the three-term Legendre recurrence."""
    _check_index(spec, n)
    x = 2.0 * z - 1.0
    p_prev, p = 1.0, x
    if n == 0:
        return 1.0
    for k in range(1, n):
        p_prev, p = p, ((2 * k + 1) * x * p - k * p_prev) / (k + 1)
    return np.sqrt(2.0 * n + 1.0) * p


def eval_phi_deriv(spec: BasisSpec, n: int, z: float) -> float:
    """Evaluate d(phi_n)/dz.

    Uses P'_n(x) = n (x P_n - P_{n-1}) / (x^2 - 1); at x = +-1 that ratio
    is replaced by its limit (+-1)^(n-1) n(n+1)/2.
    """
    _check_index(spec, n)
    if n == 0:
        return 0.0
    x = 2.0 * z - 1.0
    scale = 2.0 * np.sqrt(2.0 * n + 1.0)
    if x == 1.0 or x == -1.0:
        sign = 1.0 if x == 1.0 else (-1.0) ** (n - 1)
        return scale * sign * n * (n + 1) / 2.0
    p_prev, p = 1.0, x
    for k in range(1, n):
        p_prev, p = p, ((2 * k + 1) * x * p - k * p_prev) / (k + 1)
    return scale * n * (x * p - p_prev) / (x * x - 1.0)


def eval_phi_all(spec: BasisSpec, z: float) -> np.ndarray:
    """All N basis values at z in one recurrence pass."""
    n = spec.n_basis
    x = 2.0 * z - 1.0
    out = np.empty(n)
    p_prev, p = 1.0, x
    out[0] = 1.0
    if n > 1:
        out[1] = np.sqrt(3.0) * p
    for k in range(1, n - 1):
        p_prev, p = p, ((2 * k + 1) * x * p - k * p_prev) / (k + 1)
        out[k + 1] = np.sqrt(2.0 * (k + 1) + 1.0) * p
    return out


def boundary_values(spec: BasisSpec) -> np.ndarray:
    """phi_n(1) = sqrt(2n+1), closed form."""
    return np.sqrt(2.0 * np.arange(spec.n_basis) + 1.0)


def phi_matrix(spec: BasisSpec, z: np.ndarray) -> np.ndarray:
    """Stack of basis values, shape (N, len(z)).  Vectorized eval_phi_all."""
    z = np.atleast_1d(np.asarray(z, dtype=float))
    n = spec.n_basis
    x = 2.0 * z - 1.0
    out = np.empty((n, z.size))
    out[0] = 1.0
    if n > 1:
        out[1] = x
    for k in range(1, n - 1):
        out[k + 1] = ((2 * k + 1) * x * out[k] - k * out[k - 1]) / (k + 1)
    return out * np.sqrt(2.0 * np.arange(n) + 1.0)[:, None]


def phi_deriv_matrix(spec: BasisSpec, z: np.ndarray) -> np.ndarray:
    """Stack of basis derivatives, shape (N, len(z)).

    Built from the derivative three-term recurrence
    P'_{k+1} = P'_{k-1} + (2k+1) P_k, which needs no endpoint special case;
    the scalar eval_phi_deriv stays on the ratio form so both are available
    for cross-checks.
    """
    z = np.atleast_1d(np.asarray(z, dtype=float))
    n = spec.n_basis
    x = 2.0 * z - 1.0
    p = np.empty((n, z.size))
    dp = np.empty((n, z.size))
    p[0] = 1.0
    dp[0] = 0.0
    if n > 1:
        p[1] = x
        dp[1] = 1.0
    for k in range(1, n - 1):
        p[k + 1] = ((2 * k + 1) * x * p[k] - k * p[k - 1]) / (k + 1)
        dp[k + 1] = dp[k - 1] + (2 * k + 1) * p[k]
    return 2.0 * dp * np.sqrt(2.0 * np.arange(n) + 1.0)[:, None]
