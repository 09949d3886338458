"""Matrix builders for warped-basis state-space models.

Continuous generators come from inner products of the basis with its own
warped derivative; exact discrete transitions from inner products with the
lag-composed basis.  Closed-form HiPPO-LegS matrices are provided as the
reference the exponential-warp instance must reproduce.

Orientation convention: a_gen / a_delta and the shift operators act on the
stack of basis functions.  Coefficient vectors transform contravariantly,
i.e. with the transposes of these matrices (see recurrence docs and the
experiment drivers).
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .basis import BasisSpec, boundary_values, phi_matrix, phi_deriv_matrix
from .errors import ArgumentError, NumericError
from .quadrature import QuadratureConfig, panel_nodes
from .warp import WarpSpec, lag

DIRAC, ZOH, FOH = "dirac", "zoh", "foh"
INPUT_MODELS = (DIRAC, ZOH, FOH)

# Above this step the lag argument exp(delta) z pushes the integrand's
# dynamic range past what the quadrature can cancel accurately at N=64.
DELTA_CAP = 0.5

DEFAULT_MAX_CONDITION = 1e12

MATRIX_SCHEMA_VERSION = 1


class FohVectors(NamedTuple):
    """First-order-hold input pair; the update consumes
    v_next * u_next + v_prev * u_prev."""

    v_next: np.ndarray
    v_prev: np.ndarray


@dataclass(frozen=True)
class GeneratorMatrices:
    """Continuous-time generator pair for a basis/warp choice."""

    a_gen: np.ndarray
    b_gen: np.ndarray
    basis: BasisSpec
    warp: WarpSpec


@dataclass(frozen=True)
class DiscreteMatrices:
    """Step-size-dependent transition and input data."""

    delta: float
    a_delta: np.ndarray
    a_corrected: np.ndarray
    b_delta: np.ndarray | FohVectors
    input_model: str


@dataclass(frozen=True)
class HippoReference:
    """Closed-form HiPPO-LegS state and input matrices (no quadrature)."""

    a_hippo: np.ndarray
    b_hippo: np.ndarray


def build_a_gen(
    basis: BasisSpec, warp: WarpSpec, quad: QuadratureConfig = QuadratureConfig()
) -> np.ndarray:
    """Generator entries <phi_n, phi'_m / g'> over the canonical interval."""
    z, w = panel_nodes(0.0, 1.0, quad)
    gp = warp.g_prime(z)
    if not np.all(np.isfinite(gp)) or np.any(gp == 0.0):
        raise NumericError("g' vanishes or is non-finite on a quadrature node")
    phi = phi_matrix(basis, z)
    dphi = phi_deriv_matrix(basis, z)
    return (phi * (w / gp)) @ dphi.T


def build_b_gen(basis: BasisSpec, warp: WarpSpec) -> np.ndarray:
    """Input generator phi_n(1) * f'(0); closed form, no quadrature."""
    return boundary_values(basis) * warp.f_prime(0.0)


def build_generator(
    basis: BasisSpec, warp: WarpSpec, quad: QuadratureConfig = QuadratureConfig()
) -> GeneratorMatrices:
    """Bundle the continuous-time pair with the specs that produced it."""
    return GeneratorMatrices(
        a_gen=build_a_gen(basis, warp, quad),
        b_gen=build_b_gen(basis, warp),
        basis=basis,
        warp=warp,
    )


def hippo_legs_reference(n_basis: int) -> HippoReference:
    """Closed-form HiPPO-LegS matrices of size n_basis.

    a_hippo is lower triangular with diagonal -(n+1) and subdiagonal
    entries -sqrt((2n+1)(2m+1)); b_hippo has entries sqrt(2n+1).
    """
    if not (1 <= n_basis <= 256):
        raise ArgumentError(f"n_basis must be in [1, 256], got {n_basis}")
    n = np.arange(n_basis)
    root = np.sqrt(2.0 * n + 1.0)
    a0 = np.tril(np.outer(root, root), -1) + np.diag(n.astype(float))
    return HippoReference(a_hippo=-(a0 + np.eye(n_basis)), b_hippo=root.copy())


def build_a_delta(
    basis: BasisSpec,
    warp: WarpSpec,
    delta: float,
    quad: QuadratureConfig = QuadratureConfig(),
    allow_large_delta: bool = False,
) -> np.ndarray:
    """Exact discrete transition of the basis stack over one step.

    Entry (n, m) integrates phi_n(z) * phi_m(lag(delta, z)) over (0, 1].
    For the exponential warp this is upper triangular with diagonal
    exp(n * delta / tau).
    """
    if delta < 0.0:
        raise ArgumentError(f"delta must be nonnegative, got {delta}")
    if delta > DELTA_CAP and not allow_large_delta:
        raise ArgumentError(
            f"delta={delta} exceeds the cap {DELTA_CAP}; "
            "pass allow_large_delta=True to override"
        )
    z, w = panel_nodes(0.0, 1.0, quad)
    phi = phi_matrix(basis, z)
    phi_lagged = phi_matrix(basis, lag(warp, delta, z))
    return (phi * w) @ phi_lagged.T


def condition_estimate(m: np.ndarray) -> float:
    """2-norm condition number (SVD based; matrices here are desk-sized)."""
    return float(np.linalg.cond(m))


def correct_a_delta(
    a_delta: np.ndarray,
    delta: float,
    max_condition: float | None = DEFAULT_MAX_CONDITION,
) -> np.ndarray:
    """Stability-corrected transition inverse(a_delta) * exp(-delta).

    Equals exp(delta * a_stable) with a_stable = -(a_gen + I), so its
    diagonal decays like exp(-(n+1) delta).  The inverse goes through an
    LU solve with partial pivoting; a condition estimate above
    max_condition raises NumericError (pass max_condition=None to force
    the solve anyway, e.g. for large-step sweeps that report conditioning).
    """
    if max_condition is not None:
        cond = condition_estimate(a_delta)
        if not np.isfinite(cond) or cond > max_condition:
            raise NumericError(
                f"a_delta condition estimate {cond:.3e} exceeds {max_condition:.3e}"
            )
    try:
        inv = np.linalg.solve(a_delta, np.eye(a_delta.shape[0]))
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"a_delta is singular: {exc}") from exc
    return inv * np.exp(-delta)


def backward_shift(a_delta: np.ndarray, delta: float) -> np.ndarray:
    """Backward shift operator a_delta * exp(delta) acting on the basis stack."""
    return a_delta * np.exp(delta)


def build_b_delta(
    basis: BasisSpec,
    warp: WarpSpec,
    delta: float,
    model: str = ZOH,
    quad: QuadratureConfig = QuadratureConfig(),
) -> np.ndarray | FohVectors:
    """Discrete input vector(s) for one hold model.

    dirac: phi_n(1) |f'(0)|, independent of delta.
    zoh:   integral of phi_n over [f(-delta), 1].
    foh:   FohVectors(v_next, v_prev) with v_next = I1 + Ig/delta and
           v_prev = -Ig/delta, where I1 integrates phi_n and Ig integrates
           phi_n * g over [f(-delta), 1].
    """
    if model not in INPUT_MODELS:
        raise ArgumentError(f"unknown input model {model!r}; pick from {INPUT_MODELS}")
    if model == DIRAC:
        return boundary_values(basis) * abs(warp.f_prime(0.0))
    if delta <= 0.0:
        raise ArgumentError(f"delta must be positive for {model}, got {delta}")
    lower = warp.f(-delta)
    z, w = panel_nodes(lower, 1.0, quad)
    phi = phi_matrix(basis, z)
    i1 = phi @ w
    if model == ZOH:
        return i1
    ig = phi @ (w * warp.g(z))
    return FohVectors(v_next=i1 + ig / delta, v_prev=-ig / delta)


def build_discrete(
    basis: BasisSpec,
    warp: WarpSpec,
    delta: float,
    model: str = ZOH,
    quad: QuadratureConfig = QuadratureConfig(),
    max_condition: float | None = DEFAULT_MAX_CONDITION,
) -> DiscreteMatrices:
    """Convenience bundle: a_delta, its correction, and the input vector(s)."""
    a_d = build_a_delta(basis, warp, delta, quad)
    return DiscreteMatrices(
        delta=delta,
        a_delta=a_d,
        a_corrected=correct_a_delta(a_d, delta, max_condition=max_condition),
        b_delta=build_b_delta(basis, warp, delta, model, quad),
        input_model=model,
    )


_PADE13_B = (
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
)

# Squaring count is chosen so the scaled 1-norm is at most this; fixed for
# reproducible output.
_EXPM_SCALE_TARGET = 0.5


def matrix_exp(m: np.ndarray) -> np.ndarray:
    """Matrix exponential by scaling-and-squaring with a degree-13 diagonal
    Pade approximant."""
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ArgumentError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ArgumentError("matrix has non-finite entries")
    norm = np.linalg.norm(m, 1)
    squarings = 0
    if norm > _EXPM_SCALE_TARGET:
        squarings = int(np.ceil(np.log2(norm / _EXPM_SCALE_TARGET)))
    a = m / (2.0**squarings)

    b = _PADE13_B
    ident = np.eye(a.shape[0])
    a2 = a @ a
    a4 = a2 @ a2
    a6 = a4 @ a2
    u = a @ (
        a6 @ (b[13] * a6 + b[11] * a4 + b[9] * a2)
        + b[7] * a6
        + b[5] * a4
        + b[3] * a2
        + b[1] * ident
    )
    v = (
        a6 @ (b[12] * a6 + b[10] * a4 + b[8] * a2)
        + b[6] * a6
        + b[4] * a4
        + b[2] * a2
        + b[0] * ident
    )
    try:
        r = np.linalg.solve(v - u, v + u)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"Pade denominator is singular: {exc}") from exc
    for _ in range(squarings):
        r = r @ r
    return r


def bilinear_discretize(
    a: np.ndarray, b: np.ndarray, delta: float
) -> tuple[np.ndarray, np.ndarray]:
    """Tustin transform: ((I - d/2 a)^-1 (I + d/2 a), (I - d/2 a)^-1 d b)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    n = a.shape[0]
    lhs = np.eye(n) - 0.5 * delta * a
    rhs = np.hstack([np.eye(n) + 0.5 * delta * a, (delta * b)[:, None]])
    try:
        sol = np.linalg.solve(lhs, rhs)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"bilinear resolvent is singular: {exc}") from exc
    return sol[:, :n], sol[:, n]


def frobenius_rel_diff(m1: np.ndarray, m2: np.ndarray) -> float:
    """||m1 - m2||_F / ||m1||_F."""
    m1 = np.asarray(m1, dtype=float)
    m2 = np.asarray(m2, dtype=float)
    if m1.shape != m2.shape:
        raise ArgumentError(f"shape mismatch: {m1.shape} vs {m2.shape}")
    denom = np.linalg.norm(m1)
    if denom == 0.0:
        raise ArgumentError("reference matrix has zero Frobenius norm")
    return float(np.linalg.norm(m1 - m2) / denom)


def compose_block_diagonal(
    blocks: list[tuple[np.ndarray, np.ndarray]],
) -> tuple[np.ndarray, np.ndarray]:
    """Stack (transition, input) pairs into one independent-blocks system."""
    if not blocks:
        raise ArgumentError("blocks must be nonempty")
    sizes = []
    for a, b in blocks:
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ArgumentError(f"block transition must be square, got {a.shape}")
        if b.shape != (a.shape[0],):
            raise ArgumentError(
                f"block input length {b.shape} does not match transition {a.shape}"
            )
        sizes.append(a.shape[0])
    total = sum(sizes)
    a_out = np.zeros((total, total))
    b_out = np.zeros(total)
    off = 0
    for (a, b), size in zip(blocks, sizes):
        a_out[off : off + size, off : off + size] = a
        b_out[off : off + size] = b
        off += size
    return a_out, b_out


# --- serialization -----------------------------------------------------------


def save_matrices_json(path, arrays: dict, meta: dict) -> None:
    """Write named arrays with a schema-versioned metadata header.

    Floats go through Python's shortest-round-trip repr, so a load returns
    bit-identical values.
    """
    payload = {
        "schema_version": MATRIX_SCHEMA_VERSION,
        "meta": meta,
        "matrices": {k: np.asarray(v).tolist() for k, v in arrays.items()},
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")


def load_matrices_json(path) -> tuple[dict, dict]:
    """Inverse of save_matrices_json: (arrays, meta)."""
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("schema_version") != MATRIX_SCHEMA_VERSION:
        raise ArgumentError(
            f"unsupported schema version {payload.get('schema_version')!r}"
        )
    arrays = {k: np.asarray(v, dtype=float) for k, v in payload["matrices"].items()}
    return arrays, payload["meta"]


def save_matrix_csv(path, m: np.ndarray, meta: dict) -> None:
    """One CSV row per matrix row, preceded by a '#' metadata record."""
    m = np.atleast_2d(np.asarray(m, dtype=float))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write("# " + ", ".join(f"{k}={v}" for k, v in meta.items()) + "\n")
        writer = csv.writer(fh)
        for row in m:
            writer.writerow([repr(float(x)) for x in row])
