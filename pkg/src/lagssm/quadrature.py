"""Composite Gauss-Legendre quadrature over finite intervals.

Every inner product in the package runs through this module.  The rule is
deterministic: no adaptivity, fixed node order, fixed summation order, so
repeated builds are bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, EvaluationError

MIN_POINTS, MAX_POINTS = 2, 128
MIN_PANELS, MAX_PANELS = 1, 1024

_NEWTON_TOL = 1e-15
_NEWTON_MAX_ITER = 100

_rule_cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}


@dataclass(frozen=True)
class QuadratureConfig:
    """Points per panel and panel count for the composite rule."""

    points_per_panel: int = 64
    panels: int = 8

    def __post_init__(self):
        if not (MIN_POINTS <= self.points_per_panel <= MAX_POINTS):
            raise ArgumentError(
                f"points_per_panel must be in [{MIN_POINTS}, {MAX_POINTS}]"
            )
        if not (MIN_PANELS <= self.panels <= MAX_PANELS):
            raise ArgumentError(f"panels must be in [{MIN_PANELS}, {MAX_PANELS}]")


def _legendre_pair(k: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """P_k(x) and P'_k(x) on [-1, 1] via the three-term recurrence."""
    p_prev = np.ones_like(x)
    p = x.copy()
    for n in range(1, k):
        p_prev, p = p, ((2 * n + 1) * x * p - n * p_prev) / (n + 1)
    dp = k * (x * p - p_prev) / (x * x - 1.0)
    return p, dp


def gauss_rule(k: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the k-point Gauss-Legendre rule on (-1, 1).

    Nodes are the roots of P_k, found by Newton iteration from the
    Chebyshev initial guesses cos(pi (i - 1/4) / (k + 1/2)); weights are
    2 / ((1 - x^2) P'_k(x)^2).  Rules are cached per k and the returned
    arrays are read-only.
    """
    if not (MIN_POINTS <= k <= MAX_POINTS):
        raise ArgumentError(f"k must be in [{MIN_POINTS}, {MAX_POINTS}], got {k}")
    if k in _rule_cache:
        return _rule_cache[k]

    i = np.arange(1, k + 1)
    x = np.cos(np.pi * (i - 0.25) / (k + 0.5))
    for _ in range(_NEWTON_MAX_ITER):
        p, dp = _legendre_pair(k, x)
        dx = p / dp
        x -= dx
        if np.max(np.abs(dx)) < _NEWTON_TOL:
            break
    # Chebyshev guesses come out descending; enforce exact +- symmetry and
    # ascending order.
    x = 0.5 * (x - x[::-1])
    _, dp = _legendre_pair(k, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    w = 0.5 * (w + w[::-1])
    x = x[::-1].copy()
    w = w[::-1].copy()
    x.flags.writeable = False
    w.flags.writeable = False
    _rule_cache[k] = (x, w)
    return x, w


def panel_nodes(a: float, b: float, cfg: QuadratureConfig) -> tuple[np.ndarray, np.ndarray]:
    """Flattened nodes and weights of the composite rule on [a, b]."""
    if a > b:
        raise ArgumentError(f"need a <= b, got a={a}, b={b}")
    x, w = gauss_rule(cfg.points_per_panel)
    edges = np.linspace(a, b, cfg.panels + 1)
    mids = 0.5 * (edges[:-1] + edges[1:])
    halfs = 0.5 * (edges[1:] - edges[:-1])
    nodes = (mids[:, None] + halfs[:, None] * x[None, :]).ravel()
    weights = (halfs[:, None] * w[None, :]).ravel()
    return nodes, weights


def integrate(fn, a: float, b: float, cfg: QuadratureConfig = QuadratureConfig()) -> float:
    """Composite Gauss-Legendre estimate of the integral of fn over [a, b].

    Exact (to rounding) for polynomials of degree <= 2 * points_per_panel - 1.
    Raises EvaluationError, carrying the abscissa, if fn returns a
    non-finite value.
    """
    if a > b:
        raise ArgumentError(f"need a <= b, got a={a}, b={b}")
    if a == b:
        return 0.0
    nodes, weights = panel_nodes(a, b, cfg)
    total = 0.0
    k = cfg.points_per_panel
    for p in range(cfg.panels):
        sl = slice(p * k, (p + 1) * k)
        vals = np.array([fn(z) for z in nodes[sl]], dtype=float)
        if not np.all(np.isfinite(vals)):
            bad = nodes[sl][~np.isfinite(vals)][0]
            raise EvaluationError(f"integrand non-finite at z={bad!r}", abscissa=bad)
        total += float(np.dot(weights[sl], vals))
    return total


def integrate_values(values: np.ndarray, weights: np.ndarray) -> float:
    """Weighted sum for callers that evaluated the integrand on panel_nodes."""
    return float(np.dot(weights, values))
