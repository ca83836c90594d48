"""Accelerated first-order methods with adaptive local Lipschitz estimation.

Convex solver on prox-friendly sets, a smoothing layer for bilinear
saddle-point problems, and a maximum-eigenvalue minimization application
with a computable duality-gap certificate. The heavy lifting lives in the
C++ extension module; this package re-exports its surface.
"""

from ._core import (
    EigInstance,
    SolveResult,
    bregman_distance,
    density_maximizer,
    dgf_center,
    entropy_value,
    exact_lambda_max,
    generate_instance,
    lipschitz_of_smoothed,
    load_instance,
    mu_aggressive,
    mu_for_accuracy,
    mu_hybrid,
    power_method_norm,
    prox_map,
    smoothed_lambda_max,
    solve,
    theoretical_bound,
    worst_case_iterations,
)

__all__ = [
    "EigInstance",
    "SolveResult",
    "bregman_distance",
    "density_maximizer",
    "dgf_center",
    "entropy_value",
    "exact_lambda_max",
    "generate_instance",
    "lipschitz_of_smoothed",
    "load_instance",
    "mu_aggressive",
    "mu_for_accuracy",
    "mu_hybrid",
    "power_method_norm",
    "prox_map",
    "smoothed_lambda_max",
    "solve",
    "theoretical_bound",
    "worst_case_iterations",
]

__version__ = "0.1.0"
