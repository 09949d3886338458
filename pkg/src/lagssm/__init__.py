"""Structured state-space models built directly from a time warp and an
orthonormal basis.

The discrete transition comes from a single inner product between today's
basis and yesterday's (the backward lag of the warp); the exponential-warp
instance reproduces the closed-form HiPPO-LegS system, and the package
ships the harness that checks this numerically.
"""

from .basis import BasisSpec, boundary_values, eval_phi, eval_phi_all, eval_phi_deriv
from .errors import (
    ArgumentError,
    DomainError,
    EvaluationError,
    LagssmError,
    NumericError,
)
from .experiments import ExperimentConfig, SignalConfig
from .matrices import (
    DiscreteMatrices,
    FohVectors,
    GeneratorMatrices,
    HippoReference,
    backward_shift,
    bilinear_discretize,
    build_a_delta,
    build_a_gen,
    build_b_delta,
    build_b_gen,
    build_discrete,
    build_generator,
    compose_block_diagonal,
    correct_a_delta,
    frobenius_rel_diff,
    hippo_legs_reference,
    matrix_exp,
)
from .quadrature import QuadratureConfig, gauss_rule, integrate
from .recurrence import (
    MemoryState,
    SignalTrace,
    project_direct,
    reconstruct,
    run,
    step,
)
from .signals import LorenzParams, lorenz63, normalize_trace, sine_mixture, zoh_function
from .warp import WarpSpec, lag, measure, warp_forward, warp_inverse

__version__ = "0.1.0"

__all__ = [
    "ArgumentError",
    "BasisSpec",
    "DiscreteMatrices",
    "DomainError",
    "EvaluationError",
    "ExperimentConfig",
    "FohVectors",
    "GeneratorMatrices",
    "HippoReference",
    "LagssmError",
    "LorenzParams",
    "MemoryState",
    "NumericError",
    "QuadratureConfig",
    "SignalConfig",
    "SignalTrace",
    "WarpSpec",
    "backward_shift",
    "bilinear_discretize",
    "boundary_values",
    "build_a_delta",
    "build_a_gen",
    "build_b_delta",
    "build_b_gen",
    "build_discrete",
    "build_generator",
    "compose_block_diagonal",
    "correct_a_delta",
    "eval_phi",
    "eval_phi_all",
    "eval_phi_deriv",
    "frobenius_rel_diff",
    "gauss_rule",
    "hippo_legs_reference",
    "integrate",
    "lag",
    "lorenz63",
    "matrix_exp",
    "measure",
    "normalize_trace",
    "project_direct",
    "reconstruct",
    "run",
    "sine_mixture",
    "step",
    "warp_forward",
    "warp_inverse",
    "zoh_function",
]
