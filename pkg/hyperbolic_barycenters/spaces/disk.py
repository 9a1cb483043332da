# Copyright (c) 2024-2025 Datalayer, Inc.
#
# BSD 3-Clause License

"""The Poincare disk model of the hyperbolic plane."""

from __future__ import annotations

import logging
import math

from typing import Sequence

import numpy as np

from hyperbolic_barycenters.errors import InvalidInputError
from hyperbolic_barycenters.spaces.base import DiskPoint, GeodesicSpace, PointRef


logger = logging.getLogger(__name__)


def mobius_to_origin(a: complex, z: complex) -> complex:
    """Disk isometry sending ``a`` to the origin."""
    return (z - a) / (1.0 - a.conjugate() * z)


def mobius_from_origin(a: complex, u: complex) -> complex:
    """Inverse of :func:`mobius_to_origin`."""
    return (u + a) / (1.0 + a.conjugate() * u)


def disk_distance(z: complex | np.ndarray, w: complex | np.ndarray) -> float | np.ndarray:
    """Hyperbolic distance, ``2 asinh(|z-w| / sqrt((1-|z|^2)(1-|w|^2)))``.

    Equal to ``arccosh(1 + 2|z-w|^2 / ((1-|z|^2)(1-|w|^2)))`` without its
    cancellation near coincident points.
    """
    num = np.abs(z - w)
    den = np.sqrt((1.0 - np.abs(z) ** 2) * (1.0 - np.abs(w) ** 2))
    return 2.0 * np.arcsinh(num / den)


class PoincareDisk(GeodesicSpace):
    """Open unit disk with curvature -1 metric. Points are ``DiskPoint(x, y)``."""

    tag = "disk"

    point_type = DiskPoint

    def check_point(self, p: PointRef) -> None:
        super().check_point(p)
        assert isinstance(p, DiskPoint)
        if not (math.isfinite(p.x) and math.isfinite(p.y)) or p.x * p.x + p.y * p.y >= 1.0:
            emsg = f"disk point ({p.x}, {p.y}) must have Euclidean norm < 1"
            raise InvalidInputError(emsg)

    def center(self) -> DiskPoint:
        return DiskPoint(0.0, 0.0)

    def from_complex(self, z: complex) -> DiskPoint:
        return DiskPoint(float(z.real), float(z.imag))

    def distance(self, p: PointRef, q: PointRef) -> float:
        self.check_point(p)
        self.check_point(q)
        assert isinstance(p, DiskPoint) and isinstance(q, DiskPoint)
        if p == q:
            return 0.0
        return float(disk_distance(p.z, q.z))

    def geodesic_point(self, p: PointRef, q: PointRef, t: float) -> DiskPoint:
        self.check_parameter(t)
        self.check_point(p)
        self.check_point(q)
        assert isinstance(p, DiskPoint) and isinstance(q, DiskPoint)
        if t == 0.0 or p == q:
            return p
        if t == 1.0:
            return q
        w = mobius_to_origin(p.z, q.z)
        r = abs(w)
        u = w / r * math.tanh(t * math.atanh(r))
        return self.from_complex(mobius_from_origin(p.z, u))

    # Tangent vectors at x are expressed in the chart moving x to the origin,
    # scaled so that their Euclidean length equals the hyperbolic length.

    def log_map(self, x: DiskPoint, z: DiskPoint) -> complex:
        w = mobius_to_origin(x.z, z.z)
        r = abs(w)
        if r == 0.0:
            return 0j
        return w / r * 2.0 * math.atanh(r)

    def exp_map(self, x: DiskPoint, v: complex) -> DiskPoint:
        length = abs(v)
        if length == 0.0:
            return x
        u = v / length * math.tanh(length / 2.0)
        return self.from_complex(mobius_from_origin(x.z, u))

    def pairwise_distances(
        self, ps: Sequence[PointRef], qs: Sequence[PointRef] | None = None
    ) -> np.ndarray:
        qs = ps if qs is None else qs
        for point in (*ps, *qs):
            self.check_point(point)
        a = np.array([p.z for p in ps], dtype=complex)  # type: ignore[attr-defined]
        b = np.array([q.z for q in qs], dtype=complex)  # type: ignore[attr-defined]
        return np.asarray(disk_distance(a[:, None], b[None, :]), dtype=float).reshape(
            len(ps), len(qs)
        )

    def sample(self, rng: np.random.Generator, n: int, radius: float = 3.0) -> list[PointRef]:
        """Uniform in hyperbolic area on the ball of hyperbolic ``radius`` about the origin."""
        if radius <= 0:
            raise InvalidInputError(f"sampling radius must be positive, got {radius}")
        u = rng.random(size=n)
        angle = rng.uniform(0.0, 2.0 * math.pi, size=n)
        rho = np.arccosh(1.0 + u * (math.cosh(radius) - 1.0))
        euclid = np.tanh(rho / 2.0)
        return [
            DiskPoint(float(e * math.cos(a)), float(e * math.sin(a)))
            for e, a in zip(euclid, angle)
        ]

    def parse_point(self, text: str | Sequence[str]) -> DiskPoint:
        x, y = parse_pair(text, self.name)
        point = DiskPoint(x, y)
        self.check_point(point)
        return point


def parse_pair(text: str | Sequence[str], space: str) -> tuple[float, float]:
    tokens = text.split() if isinstance(text, str) else list(text)
    if len(tokens) != 2:
        emsg = f"{space} points are two decimal coordinates, got {' '.join(tokens)!r}"
        raise InvalidInputError(emsg)
    try:
        x, y = float(tokens[0]), float(tokens[1])
    except ValueError as e:
        raise InvalidInputError(f"malformed {space} point {' '.join(tokens)!r}") from e
    if not (math.isfinite(x) and math.isfinite(y)):
        raise InvalidInputError(f"{space} point coordinates must be finite")
    return x, y
