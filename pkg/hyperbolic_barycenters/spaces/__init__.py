# Copyright (c) 2024-2025 Datalayer, Inc.
#
# BSD 3-Clause License

"""Concrete geodesic spaces: metric trees, the Poincare disk and the Euclidean plane."""

from __future__ import annotations

from typing import Sequence

from hyperbolic_barycenters.spaces.base import (
    DiskPoint,
    GeodesicSpace,
    PlanePoint,
    PointRef,
    TreePoint,
)
from hyperbolic_barycenters.spaces.disk import PoincareDisk
from hyperbolic_barycenters.spaces.io import load_space, load_tree, parse_tree
from hyperbolic_barycenters.spaces.plane import EuclideanPlane
from hyperbolic_barycenters.spaces.tree import MetricTree, random_tree


def distance(space: GeodesicSpace, p: PointRef, q: PointRef) -> float:
    return space.distance(p, q)


def geodesic_point(space: GeodesicSpace, p: PointRef, q: PointRef, t: float) -> PointRef:
    return space.geodesic_point(p, q, t)


def diameter_of_finite_set(space: GeodesicSpace, points: Sequence[PointRef]) -> float:
    return space.diameter(points)


__all__ = [
    "DiskPoint",
    "EuclideanPlane",
    "GeodesicSpace",
    "MetricTree",
    "PlanePoint",
    "PoincareDisk",
    "PointRef",
    "TreePoint",
    "diameter_of_finite_set",
    "distance",
    "geodesic_point",
    "load_space",
    "load_tree",
    "parse_tree",
    "random_tree",
]
