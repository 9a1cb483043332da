# Copyright (c) 2024-2025 Datalayer, Inc.
#
# BSD 3-Clause License

"""Euclidean plane, the non-hyperbolic control space."""

from __future__ import annotations

import math

from typing import Sequence

import numpy as np

from hyperbolic_barycenters.errors import InvalidInputError
from hyperbolic_barycenters.spaces.base import GeodesicSpace, PlanePoint, PointRef
from hyperbolic_barycenters.spaces.disk import parse_pair


class EuclideanPlane(GeodesicSpace):
    """R^2 with straight-line geodesics.

    Only bounded regions are delta-hyperbolic (with delta up to their diameter).
    """

    tag = "plane"

    point_type = PlanePoint

    def check_point(self, p: PointRef) -> None:
        super().check_point(p)
        assert isinstance(p, PlanePoint)
        if not (math.isfinite(p.x) and math.isfinite(p.y)):
            raise InvalidInputError(f"plane point ({p.x}, {p.y}) must be finite")

    def center(self) -> PlanePoint:
        return PlanePoint(0.0, 0.0)

    def distance(self, p: PointRef, q: PointRef) -> float:
        self.check_point(p)
        self.check_point(q)
        assert isinstance(p, PlanePoint) and isinstance(q, PlanePoint)
        return math.hypot(p.x - q.x, p.y - q.y)

    def geodesic_point(self, p: PointRef, q: PointRef, t: float) -> PlanePoint:
        self.check_parameter(t)
        self.check_point(p)
        self.check_point(q)
        assert isinstance(p, PlanePoint) and isinstance(q, PlanePoint)
        if t == 0.0 or p == q:
            return p
        if t == 1.0:
            return q
        return PlanePoint(p.x + t * (q.x - p.x), p.y + t * (q.y - p.y))

    def pairwise_distances(
        self, ps: Sequence[PointRef], qs: Sequence[PointRef] | None = None
    ) -> np.ndarray:
        qs = ps if qs is None else qs
        for point in (*ps, *qs):
            self.check_point(point)
        a = np.array([p.z for p in ps], dtype=complex)  # type: ignore[attr-defined]
        b = np.array([q.z for q in qs], dtype=complex)  # type: ignore[attr-defined]
        return np.abs(a[:, None] - b[None, :]).reshape(len(ps), len(qs))

    def sample(self, rng: np.random.Generator, n: int, radius: float = 3.0) -> list[PointRef]:
        """Uniform in the Euclidean disk of ``radius`` about the origin."""
        if radius <= 0:
            raise InvalidInputError(f"sampling radius must be positive, got {radius}")
        r = radius * np.sqrt(rng.random(size=n))
        angle = rng.uniform(0.0, 2.0 * math.pi, size=n)
        return [PlanePoint(float(a * math.cos(b)), float(a * math.sin(b))) for a, b in zip(r, angle)]

    def parse_point(self, text: str | Sequence[str]) -> PlanePoint:
        return PlanePoint(*parse_pair(text, self.name))
