# Copyright (c) 2024-2025 Datalayer, Inc.
#
# BSD 3-Clause License

"""Proximal map of squared distances and the augmented space ``X x X x R``."""

from __future__ import annotations

import math

from dataclasses import dataclass

from hyperbolic_barycenters.errors import InvalidInputError
from hyperbolic_barycenters.spaces.base import GeodesicSpace, PointRef


def proximal_sqdist(space: GeodesicSpace, z: PointRef, x: PointRef, tau: float) -> PointRef:
    """Minimizer of ``y -> d(z, y)**2 + d(x, y)**2 / (2 tau)``.

    It is the point at parameter ``1 / (2 tau + 1)`` on the geodesic from ``z`` to ``x``.
    """
    if not tau > 0:
        raise InvalidInputError(f"tau must be > 0, got {tau}")
    return space.geodesic_point(z, x, 1.0 / (2.0 * tau + 1.0))


@dataclass(frozen=True)
class AugmentedPoint:
    """A triple ``(x, y, r)``; it belongs to ``A`` when ``d(x, y) <= r``."""

    x: PointRef
    y: PointRef
    r: float

    def __post_init__(self) -> None:
        if type(self.x) is not type(self.y):
            raise InvalidInputError("augmented point coordinates must share one space")
        if not self.r >= 0:
            raise InvalidInputError(f"augmented point radius must be >= 0, got {self.r}")


def product_metric(space: GeodesicSpace, a: AugmentedPoint, b: AugmentedPoint) -> float:
    """``sqrt(d(a.x, b.x)**2 + d(a.y, b.y)**2 + (a.r - b.r)**2)``."""
    return math.sqrt(
        space.distance(a.x, b.x) ** 2 + space.distance(a.y, b.y) ** 2 + (a.r - b.r) ** 2
    )


def in_A(space: GeodesicSpace, a: AugmentedPoint) -> bool:
    return space.distance(a.x, a.y) <= a.r


def dist_to_A(space: GeodesicSpace, a: AugmentedPoint) -> tuple[float, AugmentedPoint]:
    """Distance from ``a`` to ``A`` and the nearest point built on the geodesic ``[x, y]``.

    Outside ``A`` the distance is ``(d(x, y) - r) / sqrt(3)``; the projection
    moves each endpoint inward by ``lam = (d(x, y) - r) / 3`` and sets the
    radius to ``r + lam``, which is then exactly their distance.
    """
    d = space.distance(a.x, a.y)
    if d <= a.r:
        return 0.0, a
    lam = (d - a.r) / 3.0
    p = space.geodesic_point(a.x, a.y, lam / d)
    q = space.geodesic_point(a.x, a.y, 1.0 - lam / d)
    # s is the realized distance, so the projection is in A exactly
    projection = AugmentedPoint(p, q, space.distance(p, q))
    return (d - a.r) / math.sqrt(3.0), projection
