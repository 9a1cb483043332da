# Copyright (c) 2024-2025 Datalayer, Inc.
#
# BSD 3-Clause License

"""Proximal approximation schemes and the constants of their estimates."""

from hyperbolic_barycenters.schemes.bounds import (
    empirical_lln_bound,
    giant_step_tau,
    lln_bound,
    nodice_distance_bound,
    nodice_threshold,
    projection_bound,
    theta,
    theta_omega,
    wasserstein_contraction_bound,
)
from hyperbolic_barycenters.schemes.proximal import (
    AugmentedPoint,
    dist_to_A,
    in_A,
    product_metric,
    proximal_sqdist,
)
from hyperbolic_barycenters.schemes.runs import (
    SchemeConfig,
    run_empirical_lln,
    run_lln,
    run_nodice,
)


__all__ = [
    "AugmentedPoint",
    "SchemeConfig",
    "dist_to_A",
    "empirical_lln_bound",
    "giant_step_tau",
    "in_A",
    "lln_bound",
    "nodice_distance_bound",
    "nodice_threshold",
    "product_metric",
    "projection_bound",
    "proximal_sqdist",
    "run_empirical_lln",
    "run_lln",
    "run_nodice",
    "theta",
    "theta_omega",
    "wasserstein_contraction_bound",
]
