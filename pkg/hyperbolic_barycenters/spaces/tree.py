# Copyright (c) 2024-2025 Datalayer, Inc.
#
# BSD 3-Clause License

"""Metric trees: exact distances and geodesics on weighted trees (0-hyperbolic)."""

from __future__ import annotations

import logging
import math

from typing import Iterable, Sequence

import networkx as nx
import numpy as np

from hyperbolic_barycenters.errors import InvalidInputError
from hyperbolic_barycenters.spaces.base import GeodesicSpace, PointRef, TreePoint


logger = logging.getLogger(__name__)


# A walk along one edge, in edge coordinates: (edge index, from offset, to offset).
Segment = tuple[int, float, float]


class MetricTree(GeodesicSpace):
    """A finite weighted tree seen as a geodesic metric space.

    Points live on vertices or in the interior of edges. Vertex-to-vertex
    distances and paths are precomputed once with networkx.
    """

    tag = "tree"

    point_type = TreePoint

    def __init__(
        self,
        vertices: Iterable[str],
        edges: Iterable[tuple[str, str, float]],
    ) -> None:
        self.vertices: tuple[str, ...] = tuple(str(v) for v in vertices)
        self.edges: tuple[tuple[str, str, float], ...] = tuple(
            (str(u), str(v), float(length)) for u, v, length in edges
        )
        if not self.vertices:
            raise InvalidInputError("a metric tree needs at least one vertex")
        if len(set(self.vertices)) != len(self.vertices):
            raise InvalidInputError("tree vertex ids must be unique")

        graph = nx.Graph()
        graph.add_nodes_from(self.vertices)
        for index, (u, v, length) in enumerate(self.edges):
            if u not in graph or v not in graph:
                emsg = f"edge {index} ({u}, {v}) references an unknown vertex"
                raise InvalidInputError(emsg)
            if not (length > 0 and math.isfinite(length)):
                emsg = f"edge {index} ({u}, {v}) must have a positive finite length, got {length}"
                raise InvalidInputError(emsg)
            if u == v or graph.has_edge(u, v):
                emsg = f"edge {index} ({u}, {v}) closes a cycle"
                raise InvalidInputError(emsg)
            graph.add_edge(u, v, length=length, index=index)
        if not nx.is_tree(graph):
            raise InvalidInputError("the edge list must describe a connected acyclic graph")
        self.graph = graph

        self._index = {v: i for i, v in enumerate(self.vertices)}
        self._edge_of: dict[tuple[str, str], int] = {}
        for index, (u, v, _) in enumerate(self.edges):
            self._edge_of[(u, v)] = index
            self._edge_of[(v, u)] = index

        n = len(self.vertices)
        self._vdist = np.zeros((n, n))
        self._paths: dict[str, dict[str, list[str]]] = {}
        for source, (lengths, paths) in nx.all_pairs_dijkstra(graph, weight="length"):
            row = self._index[source]
            for target, value in lengths.items():
                self._vdist[row, self._index[target]] = value
            self._paths[source] = paths

        self.edge_u = np.array([self._index[u] for u, _, _ in self.edges], dtype=int)
        self.edge_v = np.array([self._index[v] for _, v, _ in self.edges], dtype=int)
        self.edge_lengths = np.array([length for _, _, length in self.edges], dtype=float)

        logger.debug(f"Built metric tree with {n} vertices and {len(self.edges)} edges")

    # -- points ----------------------------------------------------------------

    def vertex_point(self, vertex: str) -> TreePoint:
        if vertex not in self._index:
            raise InvalidInputError(f"unknown tree vertex {vertex!r}")
        return TreePoint(vertex=vertex)

    def edge_point(self, edge: int, offset: float) -> TreePoint:
        """Canonical point at ``offset`` along ``edge`` (measured from its first vertex)."""
        if not 0 <= edge < len(self.edges):
            raise InvalidInputError(f"unknown tree edge {edge}")
        u, v, length = self.edges[edge]
        if not 0.0 <= offset <= length:
            emsg = f"offset {offset} outside [0, {length}] on edge {edge}"
            raise InvalidInputError(emsg)
        return self.canonical_point(edge, offset)

    def canonical_point(self, edge: int, offset: float) -> TreePoint:
        u, v, length = self.edges[edge]
        if offset <= 0.0:
            return TreePoint(vertex=u)
        if offset >= length:
            return TreePoint(vertex=v)
        return TreePoint(edge=edge, offset=float(offset))

    def check_point(self, p: PointRef) -> None:
        super().check_point(p)
        assert isinstance(p, TreePoint)
        if p.vertex is not None:
            if p.vertex not in self._index:
                raise InvalidInputError(f"unknown tree vertex {p.vertex!r}")
        elif p.edge is None or not 0 <= p.edge < len(self.edges):
            raise InvalidInputError(f"tree point {p!r} has no valid edge")
        elif not 0.0 < p.offset < self.edges[p.edge][2]:
            emsg = f"tree point {p!r} is not in canonical form (offset inside the edge)"
            raise InvalidInputError(emsg)

    def center(self) -> TreePoint:
        return TreePoint(vertex=self.vertices[0])

    # -- metric ----------------------------------------------------------------

    def _anchors(self, p: TreePoint) -> list[tuple[int, float, Segment | None]]:
        """Vertices through which a geodesic may leave ``p``, with the distance to them."""
        if p.vertex is not None:
            return [(self._index[p.vertex], 0.0, None)]
        assert p.edge is not None
        u, v, length = self.edges[p.edge]
        return [
            (self._index[u], p.offset, (p.edge, p.offset, 0.0)),
            (self._index[v], length - p.offset, (p.edge, p.offset, length)),
        ]

    def vertex_distances(self, p: TreePoint) -> np.ndarray:
        """Distances from ``p`` to every vertex."""
        if p.vertex is not None:
            return self._vdist[self._index[p.vertex]]
        assert p.edge is not None
        length = self.edges[p.edge][2]
        return np.minimum(
            p.offset + self._vdist[self.edge_u[p.edge]],
            length - p.offset + self._vdist[self.edge_v[p.edge]],
        )

    def distance(self, p: PointRef, q: PointRef) -> float:
        self.check_point(p)
        self.check_point(q)
        assert isinstance(p, TreePoint) and isinstance(q, TreePoint)
        if p == q:
            return 0.0
        if p.edge is not None and p.edge == q.edge:
            return abs(p.offset - q.offset)
        return min(
            da + float(self._vdist[a, b]) + db
            for a, da, _ in self._anchors(p)
            for b, db, _ in self._anchors(q)
        )

    def _segments(self, p: TreePoint, q: TreePoint) -> list[Segment]:
        if p.edge is not None and p.edge == q.edge:
            return [(p.edge, p.offset, q.offset)]
        best = None
        for a, da, seg_a in self._anchors(p):
            for b, db, seg_b in self._anchors(q):
                total = da + float(self._vdist[a, b]) + db
                if best is None or total < best[0]:
                    best = (total, a, seg_a, b, seg_b)
        assert best is not None
        _, a, seg_a, b, seg_b = best
        segments: list[Segment] = []
        if seg_a is not None:
            segments.append(seg_a)
        path = self._paths[self.vertices[a]][self.vertices[b]]
        for x, y in zip(path, path[1:]):
            index = self._edge_of[(x, y)]
            length = self.edges[index][2]
            if self.edges[index][0] == x:
                segments.append((index, 0.0, length))
            else:
                segments.append((index, length, 0.0))
        if seg_b is not None:
            edge, offset, end = seg_b
            segments.append((edge, end, offset))
        return segments

    def geodesic_point(self, p: PointRef, q: PointRef, t: float) -> TreePoint:
        self.check_parameter(t)
        self.check_point(p)
        self.check_point(q)
        assert isinstance(p, TreePoint) and isinstance(q, TreePoint)
        if t == 0.0 or p == q:
            return p
        if t == 1.0:
            return q
        segments = self._segments(p, q)
        total = sum(abs(end - start) for _, start, end in segments)
        target = t * total
        walked = 0.0
        for edge, start, end in segments:
            span = abs(end - start)
            if span > 0.0 and target <= walked + span:
                step = target - walked
                offset = start + step if end > start else start - step
                return self.canonical_point(edge, offset)
            walked += span
        return q

    def pairwise_distances(
        self, ps: Sequence[PointRef], qs: Sequence[PointRef] | None = None
    ) -> np.ndarray:
        qs = ps if qs is None else qs
        for point in (*ps, *qs):
            self.check_point(point)
        rows = np.array([self.vertex_distances(p) for p in ps]).reshape(len(ps), -1)
        matrix = np.empty((len(ps), len(qs)))
        for j, q in enumerate(qs):
            assert isinstance(q, TreePoint)
            if q.vertex is not None:
                matrix[:, j] = rows[:, self._index[q.vertex]]
                continue
            assert q.edge is not None
            length = self.edges[q.edge][2]
            matrix[:, j] = np.minimum(
                q.offset + rows[:, self.edge_u[q.edge]],
                length - q.offset + rows[:, self.edge_v[q.edge]],
            )
            for i, p in enumerate(ps):
                if isinstance(p, TreePoint) and p.edge == q.edge:
                    matrix[i, j] = abs(p.offset - q.offset)
        return matrix

    def diameter(self, points: Sequence[PointRef]) -> float:
        """Exact diameter by double sweep (valid on trees)."""
        if len(points) == 0:
            raise InvalidInputError("diameter of an empty set is undefined")
        start = points[0]
        far = max(points, key=lambda point: self.distance(start, point))
        return max(self.distance(far, point) for point in points)

    def diameter_bound(self, points: Sequence[PointRef], anchor: PointRef) -> tuple[float, bool]:
        return self.diameter(points), True

    # -- sampling and text syntax ----------------------------------------------

    def sample(self, rng: np.random.Generator, n: int, radius: float = 3.0) -> list[PointRef]:
        """Uniform edge, then uniform offset along it (``radius`` is unused)."""
        if not self.edges:
            return [self.center() for _ in range(n)]
        edges = rng.integers(0, len(self.edges), size=n)
        fractions = rng.random(size=n)
        return [
            self.canonical_point(int(e), float(f) * self.edges[int(e)][2])
            for e, f in zip(edges, fractions)
        ]

    def parse_point(self, text: str | Sequence[str]) -> TreePoint:
        tokens = text.split() if isinstance(text, str) else list(text)
        if len(tokens) == 2 and tokens[0] == "vertex":
            return self.vertex_point(tokens[1])
        if len(tokens) == 3 and tokens[0] == "edge":
            try:
                edge, offset = int(tokens[1]), float(tokens[2])
            except ValueError as e:
                raise InvalidInputError(f"malformed tree point {' '.join(tokens)!r}") from e
            return self.edge_point(edge, offset)
        emsg = f"tree points are 'vertex <id>' or 'edge <id> <offset>', got {' '.join(tokens)!r}"
        raise InvalidInputError(emsg)


def random_tree(
    n_vertices: int,
    rng: np.random.Generator,
    min_length: float = 0.1,
    max_length: float = 1.0,
) -> MetricTree:
    """Random recursive tree: vertex ``i`` hangs off a uniform earlier vertex."""
    if n_vertices < 1:
        raise InvalidInputError(f"n_vertices must be >= 1, got {n_vertices}")
    vertices = [f"v{i}" for i in range(n_vertices)]
    edges = []
    for i in range(1, n_vertices):
        parent = int(rng.integers(0, i))
        length = float(rng.uniform(min_length, max_length))
        edges.append((vertices[parent], vertices[i], length))
    return MetricTree(vertices, edges)
