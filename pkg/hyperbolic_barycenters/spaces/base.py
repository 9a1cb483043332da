# Copyright (c) 2024-2025 Datalayer, Inc.
#
# BSD 3-Clause License

"""Points and the geodesic space interface."""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import ClassVar, Sequence

import numpy as np

from hyperbolic_barycenters.errors import InvalidInputError
from hyperbolic_barycenters.utils import format_float


@dataclass(frozen=True)
class PointRef:
    """A point of a concrete geodesic space, tagged with the space kind."""

    tag: ClassVar[str] = ""


@dataclass(frozen=True)
class TreePoint(PointRef):
    """A point of a metric tree.

    Canonical form: either ``vertex`` is set, or ``edge`` is set with
    ``0 < offset < length``. Offsets at an edge end are stored as that vertex.
    """

    tag: ClassVar[str] = "tree"

    vertex: str | None = None
    edge: int | None = None
    offset: float = 0.0


@dataclass(frozen=True)
class DiskPoint(PointRef):
    """A point of the open unit disk."""

    tag: ClassVar[str] = "disk"

    x: float
    y: float

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)


@dataclass(frozen=True)
class PlanePoint(PointRef):
    """A point of the Euclidean plane."""

    tag: ClassVar[str] = "plane"

    x: float
    y: float

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)


def point_text(p: PointRef) -> str:
    """Text syntax of a point: `vertex <id>`, `edge <id> <offset>` or `<x> <y>`."""
    if isinstance(p, TreePoint):
        if p.vertex is not None:
            return f"vertex {p.vertex}"
        return f"edge {p.edge} {format_float(p.offset)}"
    if isinstance(p, (DiskPoint, PlanePoint)):
        return f"{format_float(p.x)} {format_float(p.y)}"
    raise InvalidInputError(f"cannot format {p!r} as a point")


# Exact diameters are computed pairwise up to this many points.
PAIRWISE_DIAMETER_LIMIT = 4096


class GeodesicSpace(ABC):
    """A geodesic metric space with unique geodesics and exact evaluation."""

    tag: ClassVar[str] = ""

    point_type: ClassVar[type] = PointRef

    @property
    def name(self) -> str:
        return self.tag

    def check_point(self, p: PointRef) -> None:
        """Raise ``InvalidInputError`` if ``p`` does not belong to this space."""
        if type(p) is not self.point_type:
            emsg = f"point {p!r} does not belong to the {self.name} space"
            raise InvalidInputError(emsg)

    @abstractmethod
    def distance(self, p: PointRef, q: PointRef) -> float:
        """Exact distance between two points."""

    @abstractmethod
    def geodesic_point(self, p: PointRef, q: PointRef, t: float) -> PointRef:
        """Point at parameter ``t`` on the unique minimal geodesic from ``p`` to ``q``."""

    @abstractmethod
    def sample(self, rng: np.random.Generator, n: int, radius: float = 3.0) -> list[PointRef]:
        """Draw ``n`` points from the documented instance distribution of the space."""

    @abstractmethod
    def center(self) -> PointRef:
        """A reference point (origin or first vertex)."""

    @abstractmethod
    def parse_point(self, text: str | Sequence[str]) -> PointRef:
        """Parse the text point syntax of this space."""

    def format_point(self, p: PointRef) -> str:
        """Format a point in the text syntax, exact to the last bit."""
        self.check_point(p)
        return point_text(p)

    def pairwise_distances(
        self, ps: Sequence[PointRef], qs: Sequence[PointRef] | None = None
    ) -> np.ndarray:
        """Distance matrix between ``ps`` and ``qs`` (``ps`` with itself by default)."""
        qs = ps if qs is None else qs
        matrix = np.empty((len(ps), len(qs)))
        for i, p in enumerate(ps):
            for j, q in enumerate(qs):
                matrix[i, j] = self.distance(p, q)
        return matrix

    def diameter(self, points: Sequence[PointRef]) -> float:
        """Maximum pairwise distance of a nonempty finite set."""
        if len(points) == 0:
            raise InvalidInputError("diameter of an empty set is undefined")
        if len(points) == 1:
            return 0.0
        best = 0.0
        for start in range(0, len(points), 1024):
            block = self.pairwise_distances(points[start:start + 1024], points)
            best = max(best, float(block.max()))
        return best

    def diameter_bound(self, points: Sequence[PointRef], anchor: PointRef) -> tuple[float, bool]:
        """Diameter of ``points`` exactly when affordable, else ``2 max d(anchor, .)``.

        Returns ``(value, exact)``. The bound is never smaller than the diameter.
        """
        if len(points) <= PAIRWISE_DIAMETER_LIMIT:
            return self.diameter(points), True
        radius = max(self.distance(anchor, p) for p in points)
        return 2.0 * radius, False

    def check_parameter(self, t: float) -> None:
        if not 0.0 <= t <= 1.0:
            emsg = f"geodesic parameter t must lie in [0, 1], got {t}"
            raise InvalidInputError(emsg)

