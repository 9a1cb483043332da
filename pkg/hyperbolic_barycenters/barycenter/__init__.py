# Copyright (c) 2024-2025 Datalayer, Inc.
#
# BSD 3-Clause License

"""Barycenters and barycentric sets."""

from hyperbolic_barycenters.barycenter.functional import (
    barycentric_diameter_bound,
    barycentric_membership,
    midpoint_v_bound,
    sample_barycentric_set,
    v_functional,
)
from hyperbolic_barycenters.barycenter.solvers import (
    compute_barycenter,
    disk_barycenter,
    euclidean_barycenter,
    grid_barycenter,
    tree_barycenter,
)


__all__ = [
    "barycentric_diameter_bound",
    "barycentric_membership",
    "compute_barycenter",
    "disk_barycenter",
    "euclidean_barycenter",
    "grid_barycenter",
    "midpoint_v_bound",
    "sample_barycentric_set",
    "tree_barycenter",
    "v_functional",
]
