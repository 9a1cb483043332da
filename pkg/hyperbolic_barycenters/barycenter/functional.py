# Copyright (c) 2024-2025 Datalayer, Inc.
#
# BSD 3-Clause License

"""The variance functional, barycentric sets and the variance inequality."""

from __future__ import annotations

import logging
import math

import numpy as np

from hyperbolic_barycenters.errors import InvalidInputError
from hyperbolic_barycenters.spaces.base import GeodesicSpace, PointRef
from hyperbolic_barycenters.transport.measure import DiscreteMeasure
from hyperbolic_barycenters.transport.wasserstein import moment


logger = logging.getLogger(__name__)


def v_functional(
    space: GeodesicSpace, mu: DiscreteMeasure, x: PointRef, x0: PointRef | None = None
) -> float:
    """``sum_i w_i (d(x, z_i)**2 - d(x0, z_i)**2)``; ``x0`` defaults to the first atom."""
    x0 = mu.support[0] if x0 is None else x0
    D = space.pairwise_distances([x, x0], list(mu.support))
    return float(np.dot(mu.weight_array, D[0] ** 2 - D[1] ** 2))


def barycentric_membership(
    space: GeodesicSpace,
    mu: DiscreteMeasure,
    x: PointRef,
    epsilon: float,
    v_inf: float,
    x0: PointRef | None = None,
) -> bool:
    """Whether ``x`` lies in the barycentric set of ``mu`` at level ``epsilon``.

    ``v_inf`` must be a certified lower estimate of the infimum of the
    functional based at ``x0`` (as returned in ``BarycenterResult.v_inf_estimate``).
    """
    if epsilon < 0:
        raise InvalidInputError(f"epsilon must be >= 0, got {epsilon}")
    return v_functional(space, mu, x, x0) <= v_inf + epsilon


def barycentric_diameter_bound(
    W1_x: float, W1_y: float, delta: float, epsilon1: float, epsilon2: float
) -> float:
    """``sqrt(8 delta (W1_x + W1_y) + 16 delta**2 + 2 (epsilon1 + epsilon2))``.

    Bounds ``d(x, y)`` for ``x`` and ``y`` in the barycentric sets at levels
    ``epsilon1`` and ``epsilon2``, where ``W1_x = W_1(delta_x, mu)``.
    """
    for name, value in (
        ("W1_x", W1_x),
        ("W1_y", W1_y),
        ("delta", delta),
        ("epsilon1", epsilon1),
        ("epsilon2", epsilon2),
    ):
        if value < 0:
            raise InvalidInputError(f"{name} must be >= 0, got {value}")
    return math.sqrt(8.0 * delta * (W1_x + W1_y) + 16.0 * delta**2 + 2.0 * (epsilon1 + epsilon2))


def midpoint_v_bound(
    space: GeodesicSpace,
    mu: DiscreteMeasure,
    x: PointRef,
    y: PointRef,
    delta: float,
    x0: PointRef | None = None,
) -> float:
    """Upper bound on the functional at the midpoint of ``[x, y]``.

    Integrating the midpoint comparison inequality against ``mu`` gives
    ``(v(x) + v(y)) / 2 - d(x,y)**2 / 4 + 2 delta (W1_x + W1_y) + 4 delta**2``.
    """
    v_x = v_functional(space, mu, x, x0)
    v_y = v_functional(space, mu, y, x0)
    w1 = moment(space, mu, x, 1) + moment(space, mu, y, 1)
    return 0.5 * (v_x + v_y) - 0.25 * space.distance(x, y) ** 2 + 2.0 * delta * w1 + 4.0 * delta**2


def sample_barycentric_set(
    space: GeodesicSpace,
    mu: DiscreteMeasure,
    center: PointRef,
    epsilon: float,
    v_inf: float,
    rng: np.random.Generator,
    n: int,
    delta: float = 0.0,
    radius: float | None = None,
    max_tries: int = 1000,
    x0: PointRef | None = None,
) -> list[PointRef]:
    """Rejection-sample up to ``n`` members of the barycentric set at level ``epsilon``.

    Proposals are spread along geodesics leaving ``center`` (a near minimizer)
    up to ``radius``, which defaults to the diameter bound of the set.
    Fewer than ``n`` points come back when ``max_tries`` proposals run out.
    """
    if radius is None:
        w1 = moment(space, mu, center, 1)
        radius = barycentric_diameter_bound(w1, w1, delta, 0.0, epsilon) + 8.0 * delta
    accepted: list[PointRef] = []
    for _ in range(max_tries):
        if len(accepted) >= n:
            break
        target = space.sample(rng, 1)[0]
        span = space.distance(center, target)
        scale = 1.0 if span <= radius else radius / span
        candidate = space.geodesic_point(center, target, float(rng.random()) * scale)
        if barycentric_membership(space, mu, candidate, epsilon, v_inf, x0):
            accepted.append(candidate)
    if len(accepted) < n:
        logger.debug(f"Rejection sampling accepted {len(accepted)}/{n} in {max_tries} tries")
    return accepted
