# Copyright (c) 2024-2025 Datalayer, Inc.
#
# BSD 3-Clause License

"""Finitely supported probability measures."""

from __future__ import annotations

import logging
import math

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from hyperbolic_barycenters.errors import InvalidInputError
from hyperbolic_barycenters.spaces.base import GeodesicSpace, PointRef, point_text
from hyperbolic_barycenters.utils import format_float


logger = logging.getLogger(__name__)


# Allowed deviation of the weight total from 1 before exact renormalization.
WEIGHT_TOLERANCE = 1e-12


@dataclass(frozen=True)
class DiscreteMeasure:
    """A probability measure with finite support.

    Build it with :meth:`create` (or ``dirac``, ``uniform``, ``empirical``),
    which merges duplicate atoms and renormalizes the weights exactly.
    """

    support: tuple[PointRef, ...]
    weights: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.support:
            raise InvalidInputError("a measure needs at least one support point")
        if len(self.support) != len(self.weights):
            raise InvalidInputError("support and weights must have the same length")
        if len({type(p) for p in self.support}) != 1:
            raise InvalidInputError("support points must share one space")

    @classmethod
    def create(
        cls, support: Iterable[PointRef], weights: Iterable[float]
    ) -> DiscreteMeasure:
        merged: dict[PointRef, float] = {}
        for point, weight in zip(support, weights):
            weight = float(weight)
            if not (weight > 0.0 and math.isfinite(weight)):
                raise InvalidInputError(f"weights must be positive and finite, got {weight}")
            merged[point] = merged.get(point, 0.0) + weight
        if not merged:
            raise InvalidInputError("a measure needs at least one support point")
        total = math.fsum(merged.values())
        if abs(total - 1.0) > WEIGHT_TOLERANCE:
            emsg = f"weights must sum to 1 within {WEIGHT_TOLERANCE}, got {total!r}"
            raise InvalidInputError(emsg)
        return cls(tuple(merged), tuple(w / total for w in merged.values()))

    @classmethod
    def dirac(cls, point: PointRef) -> DiscreteMeasure:
        return cls((point,), (1.0,))

    @classmethod
    def uniform(cls, points: Sequence[PointRef]) -> DiscreteMeasure:
        if not points:
            raise InvalidInputError("a uniform measure needs at least one point")
        return cls.empirical(points)

    @classmethod
    def empirical(cls, samples: Sequence[PointRef]) -> DiscreteMeasure:
        """Measure putting mass ``1/n`` on each sample (repeats accumulate)."""
        counts: dict[PointRef, int] = {}
        for point in samples:
            counts[point] = counts.get(point, 0) + 1
        if not counts:
            raise InvalidInputError("an empirical measure needs at least one sample")
        n = len(samples)
        return cls(tuple(counts), tuple(c / n for c in counts.values()))

    def __len__(self) -> int:
        return len(self.support)

    @property
    def weight_array(self) -> np.ndarray:
        return np.asarray(self.weights, dtype=float)

    def check_space(self, space: GeodesicSpace) -> None:
        for point in self.support:
            space.check_point(point)

    def draw(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """Indices of ``n`` i.i.d. atoms."""
        if len(self.support) == 1:
            return np.zeros(n, dtype=int)
        cumulative = np.cumsum(self.weight_array)
        cumulative[-1] = 1.0
        return np.searchsorted(cumulative, rng.random(size=n), side="right")


@dataclass(frozen=True)
class Coupling:
    """Transport plan between two measures (rows follow the first)."""

    matrix: np.ndarray

    def marginal_errors(self, mu: DiscreteMeasure, nu: DiscreteMeasure) -> tuple[float, float]:
        rows = float(np.abs(self.matrix.sum(axis=1) - mu.weight_array).max())
        cols = float(np.abs(self.matrix.sum(axis=0) - nu.weight_array).max())
        return rows, cols


def parse_measure(space: GeodesicSpace, text: str) -> DiscreteMeasure:
    """Parse ``<weight> <point>`` lines; weights may be decimals or fractions like ``1/3``."""
    support: list[PointRef] = []
    weights: list[float] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) < 2:
            raise InvalidInputError(f"measure line {number}: expected '<weight> <point>'")
        try:
            weight = float(Fraction(tokens[0]))
        except (ValueError, ZeroDivisionError) as e:
            raise InvalidInputError(f"measure line {number}: bad weight {tokens[0]!r}") from e
        try:
            point = space.parse_point(tokens[1:])
        except InvalidInputError as e:
            raise InvalidInputError(f"measure line {number}: {e}") from e
        support.append(point)
        weights.append(weight)
    return DiscreteMeasure.create(support, weights)


def load_measure(space: GeodesicSpace, path: str | Path) -> DiscreteMeasure:
    path = Path(path)
    if not path.is_file():
        raise InvalidInputError(f"measure: file {str(path)!r} does not exist")
    measure = parse_measure(space, path.read_text())
    logger.info(f"Loaded measure with {len(measure)} atoms from {path}")
    return measure


def format_measure(measure: DiscreteMeasure) -> str:
    return "".join(
        f"{format_float(w)} {point_text(p)}\n" for p, w in zip(measure.support, measure.weights)
    )
