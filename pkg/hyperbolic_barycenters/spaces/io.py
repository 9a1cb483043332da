# Copyright (c) 2024-2025 Datalayer, Inc.
#
# BSD 3-Clause License

"""Text formats for spaces and resolution of space descriptors."""

from __future__ import annotations

import logging

from pathlib import Path

from hyperbolic_barycenters.errors import InvalidInputError
from hyperbolic_barycenters.spaces.base import GeodesicSpace
from hyperbolic_barycenters.spaces.disk import PoincareDisk
from hyperbolic_barycenters.spaces.plane import EuclideanPlane
from hyperbolic_barycenters.spaces.tree import MetricTree, random_tree
from hyperbolic_barycenters.utils import STREAM_SPACE, rng_stream


logger = logging.getLogger(__name__)


# Builtin space names accepted by :func:`load_space`.
BUILTIN_SPACES = ("disk", "plane", "random-tree:<n>")


def parse_tree(text: str) -> MetricTree:
    """Parse ``edge <u> <v> <length>`` lines (and optional ``vertex <id>`` lines).

    Vertices are numbered in order of first appearance; edges in file order.
    """
    vertices: dict[str, None] = {}
    edges: list[tuple[str, str, float]] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "vertex" and len(tokens) == 2:
            vertices.setdefault(tokens[1])
        elif tokens[0] == "edge" and len(tokens) == 4:
            try:
                length = float(tokens[3])
            except ValueError as e:
                emsg = f"line {number}: edge length {tokens[3]!r} is not a number"
                raise InvalidInputError(emsg) from e
            vertices.setdefault(tokens[1])
            vertices.setdefault(tokens[2])
            edges.append((tokens[1], tokens[2], length))
        else:
            emsg = f"line {number}: expected 'edge <u> <v> <length>' or 'vertex <id>', got {line!r}"
            raise InvalidInputError(emsg)
    return MetricTree(list(vertices), edges)


def load_tree(path: str | Path) -> MetricTree:
    path = Path(path)
    if not path.is_file():
        raise InvalidInputError(f"space: tree file {str(path)!r} does not exist")
    logger.info(f"Loading metric tree from {path}")
    return parse_tree(path.read_text())


def load_space(source: str, seed: int | None = None) -> GeodesicSpace:
    """Resolve ``disk``, ``plane``, ``random-tree:<n>`` or a tree file path."""
    if source == "disk":
        return PoincareDisk()
    if source == "plane":
        return EuclideanPlane()
    if source.startswith("random-tree:"):
        try:
            n_vertices = int(source.split(":", 1)[1])
        except ValueError as e:
            raise InvalidInputError(f"space: malformed random tree descriptor {source!r}") from e
        return random_tree(n_vertices, rng_stream(seed, STREAM_SPACE))
    return load_tree(source)
