# Copyright (c) 2024-2025 Datalayer, Inc.
#
# BSD 3-Clause License

"""Gromov products, the four-point condition, delta estimation and tripods."""

from hyperbolic_barycenters.hyperbolicity.gromov import (
    DEFAULT_SAFETY_FACTOR,
    estimate_delta,
    four_point_defect,
    gromov_product,
    resolve_delta,
)
from hyperbolic_barycenters.hyperbolicity.tripod import (
    TripodCoordinates,
    TripodImage,
    tripod_distance,
    tripod_image,
    tripod_map,
)


__all__ = [
    "DEFAULT_SAFETY_FACTOR",
    "TripodCoordinates",
    "TripodImage",
    "estimate_delta",
    "four_point_defect",
    "gromov_product",
    "resolve_delta",
    "tripod_distance",
    "tripod_image",
    "tripod_map",
]
