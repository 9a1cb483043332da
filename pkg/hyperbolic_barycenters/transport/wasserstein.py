# Copyright (c) 2024-2025 Datalayer, Inc.
#
# BSD 3-Clause License

"""Moments and exact Wasserstein distances of discrete measures."""

from __future__ import annotations

import logging
import math

import numpy as np
import ot

from hyperbolic_barycenters.errors import InvalidInputError, TransportError
from hyperbolic_barycenters.spaces.base import GeodesicSpace, PointRef
from hyperbolic_barycenters.transport.measure import Coupling, DiscreteMeasure


logger = logging.getLogger(__name__)


# Network simplex iteration cap handed to ``ot.emd``.
EMD_MAX_ITER = 1_000_000

# Marginal error tolerated on a returned coupling.
MARGINAL_TOLERANCE = 1e-10


def check_order(p: int) -> None:
    if p not in (1, 2):
        raise InvalidInputError(f"order must be 1 or 2, got {p}")


def moment(space: GeodesicSpace, mu: DiscreteMeasure, x: PointRef, p: int = 2) -> float:
    """``(sum_i w_i d(x, z_i)**p) ** (1/p)``, i.e. ``W_p(delta_x, mu)``."""
    check_order(p)
    distances = space.pairwise_distances([x], list(mu.support))[0]
    total = float(np.dot(mu.weight_array, distances**p))
    return total if p == 1 else math.sqrt(total)


def w2_variance(space: GeodesicSpace, mu: DiscreteMeasure, x: PointRef) -> float:
    """``W_2(delta_x, mu) ** 2``, the variance of ``mu`` about ``x``."""
    distances = space.pairwise_distances([x], list(mu.support))[0]
    return float(np.dot(mu.weight_array, distances**2))


def cost_matrix(
    space: GeodesicSpace, mu: DiscreteMeasure, nu: DiscreteMeasure, p: int
) -> np.ndarray:
    return space.pairwise_distances(list(mu.support), list(nu.support)) ** p


def wasserstein(
    space: GeodesicSpace, p: int, mu: DiscreteMeasure, nu: DiscreteMeasure
) -> tuple[float, Coupling]:
    """Exact ``W_p(mu, nu)`` with an optimal coupling.

    The transportation problem is solved by the network simplex of ``ot.emd``;
    no regularization is involved.

    Raises:
        InvalidInputError: order outside {1, 2} or measures from another space.
        TransportError: the solver stopped before reaching an optimal basis.
    """
    check_order(p)
    mu.check_space(space)
    nu.check_space(space)
    M = cost_matrix(space, mu, nu, p)
    a, b = mu.weight_array, nu.weight_array
    if len(a) == 1 or len(b) == 1:
        plan = np.outer(a, b)
    else:
        plan, log = ot.emd(a, b, M, numItermax=EMD_MAX_ITER, log=True)
        if log.get("result_code", 1) != 1:
            emsg = f"exact transport did not converge: {log.get('warning')}"
            raise TransportError(emsg)
        plan = np.asarray(plan, dtype=float)
    coupling = Coupling(plan)
    rows, cols = coupling.marginal_errors(mu, nu)
    if max(rows, cols) > MARGINAL_TOLERANCE:
        emsg = f"coupling marginals off by {max(rows, cols):.3g}"
        raise TransportError(emsg)
    total = max(0.0, float(np.sum(plan * M)))
    value = total if p == 1 else math.sqrt(total)
    logger.debug(f"W{p} between {len(a)} and {len(b)} atoms = {value:.6g}")
    return value, coupling
