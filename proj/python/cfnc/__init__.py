"""Compute-and-forward network coding."""

from ._core import (
    CapacityError,
    CholeskyError,
    NumericError,
    __version__,
    beta_mmse,
    candidate_set,
    computation_rate,
    construct_system_matrix,
    determinant,
    enumerate_ellipsoid,
    evaluate_strategy,
    gram_matrix,
    initial_radius,
    run_experiment,
)

__all__ = [
    "CapacityError",
    "CholeskyError",
    "NumericError",
    "__version__",
    "beta_mmse",
    "candidate_set",
    "computation_rate",
    "construct_system_matrix",
    "determinant",
    "enumerate_ellipsoid",
    "evaluate_strategy",
    "gram_matrix",
    "initial_radius",
    "run_experiment",
]
