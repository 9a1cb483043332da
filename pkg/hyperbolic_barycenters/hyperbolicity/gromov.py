# Copyright (c) 2024-2025 Datalayer, Inc.
#
# BSD 3-Clause License

"""Gromov products, the four-point condition and estimation of delta."""

from __future__ import annotations

import logging

from typing import Callable, Sequence, Union

import numpy as np

from hyperbolic_barycenters.errors import InvalidInputError
from hyperbolic_barycenters.models import DeltaEstimate
from hyperbolic_barycenters.spaces.base import GeodesicSpace, PointRef
from hyperbolic_barycenters.utils import (
    DEFAULT_CHUNK_SIZE,
    STREAM_POOL,
    STREAM_QUADRUPLES,
    chunk_bounds,
    map_chunks,
    rng_stream,
)


logger = logging.getLogger(__name__)


Sampler = Callable[[np.random.Generator, int], Sequence[PointRef]]

Region = Union[Sequence[PointRef], Sampler]


# Size of the point pool drawn from a sampler region before quadruples are picked.
DEFAULT_POOL_SIZE = 2048

# Default multiplier applied to an estimated delta before it is used in bounds.
DEFAULT_SAFETY_FACTOR = 1.05

# Defects within this relative distance of zero are rounding noise and reported as 0.
ROUNDING_NOISE = 1e-12


def gromov_product(space: GeodesicSpace, y: PointRef, z: PointRef, x: PointRef) -> float:
    """``(y|z)_x = (d(x,y) + d(x,z) - d(y,z)) / 2``."""
    return 0.5 * (space.distance(x, y) + space.distance(x, z) - space.distance(y, z))


def four_point_defect(
    space: GeodesicSpace, p: PointRef, x: PointRef, y: PointRef, z: PointRef
) -> float:
    """``min((x|y)_p, (y|z)_p) - (x|z)_p``; every valid delta is at least this."""
    return min(gromov_product(space, x, y, p), gromov_product(space, y, z, p)) - gromov_product(
        space, x, z, p
    )


def _defects(D: np.ndarray, quads: np.ndarray) -> np.ndarray:
    """Four-point defects of index quadruples ``(p, x, y, z)`` over a distance matrix."""
    p, x, y, z = quads.T
    xy = 0.5 * (D[p, x] + D[p, y] - D[x, y])
    yz = 0.5 * (D[p, y] + D[p, z] - D[y, z])
    xz = 0.5 * (D[p, x] + D[p, z] - D[x, z])
    return np.minimum(xy, yz) - xz


def _exhaustive(D: np.ndarray) -> tuple[float, tuple[int, int, int, int]]:
    G = 0.5 * (D[:, :, None] + D[:, None, :] - D[None, :, :])
    best, index = -np.inf, (0, 0, 0, 0)
    for p in range(len(D)):
        Gp = G[p]
        # defect[x, y, z] = min(Gp[x,y], Gp[y,z]) - Gp[x,z]
        defect = np.minimum(Gp[:, :, None], Gp[None, :, :]) - Gp[:, None, :]
        flat = int(np.argmax(defect))
        if defect.flat[flat] > best:
            best = float(defect.flat[flat])
            x, y, z = np.unravel_index(flat, defect.shape)
            index = (p, int(x), int(y), int(z))
    return best, index


def estimate_delta(
    space: GeodesicSpace,
    region: Region,
    quadruple_budget: int,
    seed: int | None,
    threads: int = 1,
    pool_size: int = DEFAULT_POOL_SIZE,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
) -> DeltaEstimate:
    """Maximize the four-point defect over a region.

    A finite region with ``n**4 <= quadruple_budget`` is searched exhaustively.
    Otherwise quadruples are drawn with replacement from the region (or from a
    seeded pool of ``pool_size`` sampler points), chunk by chunk, each chunk on
    its own stream. The result is a lower bound on the delta of the region.

    Args:
        space: Space the region lives in.
        region: Finite point list, or a sampler ``(rng, n) -> points``.
        quadruple_budget: Number of quadruples to evaluate (>= 1).
        seed: Stream seed.
        threads: Worker threads for chunk evaluation.

    Returns:
        The estimate with a witness quadruple ``(p, x, y, z)`` attaining it.
    """
    if quadruple_budget < 1:
        raise InvalidInputError(f"quadruple_budget must be >= 1, got {quadruple_budget}")
    if callable(region):
        points = list(region(rng_stream(seed, STREAM_POOL), pool_size))
    else:
        points = list(region)
    if not points:
        raise InvalidInputError("estimate_delta needs a nonempty region")
    exhaustive = not callable(region) and len(points) ** 4 <= quadruple_budget
    if not exhaustive and len(points) > pool_size:
        chosen = rng_stream(seed, STREAM_POOL).choice(len(points), size=pool_size, replace=False)
        points = [points[int(i)] for i in np.sort(chosen)]
    n = len(points)
    D = space.pairwise_distances(points)

    if exhaustive:
        best, index = _exhaustive(D)
        mode = "exhaustive-on-sample"
        checked = n**4
    else:
        bounds = chunk_bounds(quadruple_budget, chunk_size)

        def _chunk(i: int) -> tuple[float, tuple[int, int, int, int]]:
            rng = rng_stream(seed, STREAM_QUADRUPLES, i)
            quads = rng.integers(0, n, size=(bounds[i][1], 4))
            defects = _defects(D, quads)
            j = int(np.argmax(defects))
            return float(defects[j]), tuple(int(k) for k in quads[j])  # type: ignore[return-value]

        results = map_chunks(_chunk, len(bounds), threads=threads)
        best, index = results[0]
        for value, quad in results[1:]:
            if value > best:
                best, index = value, quad
        mode = "randomized"
        checked = quadruple_budget

    if best < 0.0:
        # (w, w, w, w) has defect exactly 0
        best, index = 0.0, (0, 0, 0, 0)
    if best <= ROUNDING_NOISE * max(1.0, float(D.max())):
        best = 0.0
    logger.info(f"Estimated delta_hat={best:.6g} on {space.name} ({mode}, {checked} quadruples)")
    return DeltaEstimate(
        space=space.name,
        delta_hat=best,
        quadruples_checked=checked,
        witness=[points[i] for i in index],
        mode=mode,
        budget=quadruple_budget,
        seed=seed,
    )


def resolve_delta(
    policy: str | float,
    space: GeodesicSpace,
    region: Region,
    seed: int | None,
    safety_factor: float = DEFAULT_SAFETY_FACTOR,
    threads: int = 1,
) -> tuple[float, DeltaEstimate | None]:
    """Turn a delta policy into the delta used by bounds.

    ``policy`` is a fixed non-negative number or ``"estimate:<budget>"``; an
    estimate is multiplied by ``safety_factor``.
    """
    text = str(policy).strip()
    if text.startswith("estimate"):
        _, _, budget_text = text.partition(":")
        try:
            budget = int(float(budget_text)) if budget_text else 1_000_000
        except ValueError as e:
            raise InvalidInputError(f"delta: malformed estimate budget {budget_text!r}") from e
        if safety_factor < 1.0:
            raise InvalidInputError(f"delta: safety factor must be >= 1, got {safety_factor}")
        estimate = estimate_delta(space, region, budget, seed, threads=threads)
        return estimate.delta_hat * safety_factor, estimate
    try:
        value = float(text)
    except ValueError as e:
        emsg = f"delta: expected a number or 'estimate:<budget>', got {text!r}"
        raise InvalidInputError(emsg) from e
    if not value >= 0.0:
        raise InvalidInputError(f"delta: must be non-negative, got {value}")
    return value, None
