"""Latent MDP toolkit: planning, optimistic learning and hard instances."""

from ._core import (
    CapExceeded,
    LmdpModel,
    ValidationError,
    box_simplex_argmax,
    hard_instance,
    iota,
    load_model,
    model_from_json,
    mvp_bonus,
    optimal_value,
    policy_variance_of_optimal,
    random_lmdp,
    run_learning,
    trigger_bound,
    unroll_with_absorbing,
    var_star,
)

__all__ = [
    "CapExceeded",
    "LmdpModel",
    "ValidationError",
    "box_simplex_argmax",
    "hard_instance",
    "iota",
    "load_model",
    "model_from_json",
    "mvp_bonus",
    "optimal_value",
    "policy_variance_of_optimal",
    "random_lmdp",
    "run_learning",
    "trigger_bound",
    "unroll_with_absorbing",
    "var_star",
]
