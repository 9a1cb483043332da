# Copyright (c) 2024-2025 Datalayer, Inc.
#
# BSD 3-Clause License

"""Comparison tripods of geodesic triangles."""

from __future__ import annotations

from dataclasses import dataclass

from hyperbolic_barycenters.errors import InvalidInputError
from hyperbolic_barycenters.hyperbolicity.gromov import gromov_product
from hyperbolic_barycenters.spaces.base import GeodesicSpace, PointRef


# Triangle sides by their endpoints, oriented from the first letter.
SIDES = ("xp", "xq", "pq")


@dataclass(frozen=True)
class TripodImage:
    """A point of the tripod: a leg name and the distance from the branch point."""

    leg: str
    radius: float


@dataclass(frozen=True)
class TripodCoordinates:
    """The tripod of the triangle ``(x, p, q)``.

    Leg ``x`` has length ``(p|q)_x``, leg ``p`` has ``(x|q)_p`` and leg ``q``
    has ``(x|p)_q``. Each side is mapped isometrically onto the two legs of
    its endpoints through the branch point.
    """

    x: PointRef
    p: PointRef
    q: PointRef
    leg_x: float
    leg_p: float
    leg_q: float

    def leg(self, name: str) -> float:
        return {"x": self.leg_x, "p": self.leg_p, "q": self.leg_q}[name]

    def side_length(self, side: str) -> float:
        return self.leg(side[0]) + self.leg(side[1])

    def endpoints(self, side: str) -> tuple[PointRef, PointRef]:
        points = {"x": self.x, "p": self.p, "q": self.q}
        return points[side[0]], points[side[1]]

    def image(self, side: str, arc: float) -> TripodImage:
        """Image of the point at arc length ``arc`` from the first endpoint of ``side``."""
        if side not in SIDES:
            raise InvalidInputError(f"unknown triangle side {side!r}, expected one of {SIDES}")
        first = self.leg(side[0])
        if arc <= first:
            return TripodImage(side[0], first - arc)
        return TripodImage(side[1], min(arc - first, self.leg(side[1])))


def tripod_map(space: GeodesicSpace, x: PointRef, p: PointRef, q: PointRef) -> TripodCoordinates:
    # legs are Gromov products, clipped at 0 against rounding
    return TripodCoordinates(
        x=x,
        p=p,
        q=q,
        leg_x=max(0.0, gromov_product(space, p, q, x)),
        leg_p=max(0.0, gromov_product(space, x, q, p)),
        leg_q=max(0.0, gromov_product(space, x, p, q)),
    )


def tripod_image(coords: TripodCoordinates, side: str, arc: float) -> TripodImage:
    return coords.image(side, arc)


def tripod_distance(a: TripodImage, b: TripodImage) -> float:
    """Path distance in the tripod."""
    if a.leg == b.leg:
        return abs(a.radius - b.radius)
    return a.radius + b.radius
