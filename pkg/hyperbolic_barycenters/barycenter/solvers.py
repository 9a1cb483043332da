# Copyright (c) 2024-2025 Datalayer, Inc.
#
# BSD 3-Clause License

"""Barycenters of discrete measures: exact on trees and the plane, descent on the disk."""

from __future__ import annotations

import logging

from typing import Sequence

import numpy as np

from hyperbolic_barycenters.barycenter.functional import v_functional
from hyperbolic_barycenters.errors import ConvergenceError, InvalidInputError
from hyperbolic_barycenters.models import BarycenterResult
from hyperbolic_barycenters.spaces.base import (
    DiskPoint,
    GeodesicSpace,
    PlanePoint,
    PointRef,
    TreePoint,
)
from hyperbolic_barycenters.spaces.disk import PoincareDisk
from hyperbolic_barycenters.spaces.plane import EuclideanPlane
from hyperbolic_barycenters.spaces.tree import MetricTree
from hyperbolic_barycenters.transport.measure import DiscreteMeasure
from hyperbolic_barycenters.transport.wasserstein import w2_variance


logger = logging.getLogger(__name__)


DEFAULT_TOLERANCE = 1e-10

DEFAULT_MAX_ITER = 1000

# Objective increase still counted as no change, relative to max(1, objective).
ULP_SLACK = 8.0 * float(np.finfo(float).eps)

MIN_STEP = 1e-12

# A descent with no acceptable step left is optimal to float resolution below this.
STALL_GRADIENT = 1e-6

# Relative rounding slack of closed-form minima.
EXACT_SLACK = 1e-12


def _result(
    space: GeodesicSpace,
    mu: DiscreteMeasure,
    point: PointRef,
    method: str,
    tolerance: float,
    v_gap: float,
    iterations: int = 0,
) -> BarycenterResult:
    """Package a minimizer; ``v_gap`` bounds how far its value may sit above the infimum."""
    base = mu.support[0]
    value = v_functional(space, mu, point, base)
    return BarycenterResult(
        point=point,
        value=value,
        method=method,
        v_inf_estimate=value - v_gap,
        tolerance=tolerance,
        objective=w2_variance(space, mu, point),
        base_point=base,
        iterations=iterations,
    )


def tree_barycenter(tree: MetricTree, mu: DiscreteMeasure) -> BarycenterResult:
    """Exact barycenter on a metric tree.

    Along an edge of length ``L`` parametrized by ``s`` in ``[0, L]`` each atom
    sits at a signed coordinate ``c`` (behind the first vertex, on the edge, or
    beyond the second vertex), so the objective there is ``sum_i w_i (s - c_i)**2``
    and its minimizer is ``clip(sum_i w_i c_i, 0, L)``. The global minimum is
    the best edge.
    """
    mu.check_space(tree)
    w = mu.weight_array
    if not tree.edges:
        return _result(tree, mu, tree.center(), "exact-tree", 0.0, 0.0)

    atoms: list[TreePoint] = list(mu.support)  # type: ignore[arg-type]
    VD = np.array([tree.vertex_distances(z) for z in atoms])
    Du = VD[:, tree.edge_u]
    Dv = VD[:, tree.edge_v]
    L = tree.edge_lengths
    C = np.where(Du <= Dv, -Du, L[None, :] + Dv)
    for i, z in enumerate(atoms):
        if z.edge is not None:
            C[i, z.edge] = z.offset
    s = np.clip(w @ C, 0.0, L)
    objective = w @ (s[None, :] - C) ** 2
    best = int(np.argmin(objective))
    point = tree.canonical_point(best, float(s[best]))
    slack = EXACT_SLACK * max(1.0, float(objective[best]))
    logger.debug(f"Tree barycenter on edge {best} at offset {s[best]:.6g}")
    return _result(tree, mu, point, "exact-tree", slack, slack)


def euclidean_barycenter(plane: EuclideanPlane, mu: DiscreteMeasure) -> BarycenterResult:
    """Weighted mean of the support."""
    mu.check_space(plane)
    w = mu.weight_array
    x = float(np.dot(w, [p.x for p in mu.support]))  # type: ignore[attr-defined]
    y = float(np.dot(w, [p.y for p in mu.support]))  # type: ignore[attr-defined]
    point = PlanePoint(x, y)
    slack = EXACT_SLACK * max(1.0, w2_variance(plane, mu, point))
    return _result(plane, mu, point, "euclidean", slack, slack)


def _disk_newton(
    disk: PoincareDisk, x: DiskPoint, atoms: Sequence[DiskPoint], w: np.ndarray
) -> tuple[complex, complex]:
    """Descent direction ``g = sum_i w_i log_x(z_i)`` and the Newton step ``H^-1 g``.

    ``H`` is the Hessian of half the objective in the chart at ``x``: each
    atom at distance ``r`` contributes 1 along ``log_x(z)`` and ``r coth r``
    across it (curvature -1), so ``H >= I``.
    """
    logs = np.array([disk.log_map(x, z) for z in atoms], dtype=complex)
    g = complex(np.dot(w, logs))
    r = np.abs(logs)
    moved = r > 0.0
    ratio = np.ones_like(r)
    ratio[moved] = r[moved] / np.tanh(r[moved])
    u = logs / np.where(moved, r, 1.0)
    radial = w * (1.0 - ratio)
    hessian = np.array(
        [
            [np.dot(w, ratio) + np.dot(radial, u.real**2), np.dot(radial, u.real * u.imag)],
            [np.dot(radial, u.real * u.imag), np.dot(w, ratio) + np.dot(radial, u.imag**2)],
        ]
    )
    v = np.linalg.solve(hessian, np.array([g.real, g.imag]))
    return g, complex(v[0], v[1])


def _descent_gap(gradient_norm: float, objective: float) -> float:
    # the objective is 2-strongly geodesically convex, so F(x) - F* <= |grad F|**2 / 4
    return max(0.25 * gradient_norm**2, EXACT_SLACK * max(1.0, objective))


def disk_barycenter(
    disk: PoincareDisk,
    mu: DiscreteMeasure,
    tol: float = DEFAULT_TOLERANCE,
    max_iter: int = DEFAULT_MAX_ITER,
) -> BarycenterResult:
    """Karcher mean on the Poincare disk by damped Riemannian Newton steps.

    Starts from the weighted Euclidean mean and stops once the gradient norm
    ``2|g|`` is at most ``tol``; the objective then sits within ``tol**2 / 4``
    of its minimum, which is the reported gap. A step is accepted when the
    objective does not grow by more than a few ulps, otherwise it is halved.
    When no step is accepted the iterate is optimal to float resolution: the
    gradient norm reached is returned as ``tolerance`` and enters the gap.

    Raises:
        ConvergenceError: the iteration cap is hit, or the descent stalls with
            a gradient norm above ``STALL_GRADIENT``.
    """
    if not tol > 0:
        raise InvalidInputError(f"tol must be > 0, got {tol}")
    mu.check_space(disk)
    w = mu.weight_array
    atoms: list[DiskPoint] = list(mu.support)  # type: ignore[arg-type]
    x = disk.from_complex(complex(np.dot(w, [z.z for z in atoms])))
    value = w2_variance(disk, mu, x)

    for iteration in range(max_iter + 1):
        g, newton = _disk_newton(disk, x, atoms, w)
        gradient_norm = 2.0 * abs(g)
        if gradient_norm <= tol:
            logger.debug(f"Disk barycenter converged after {iteration} steps")
            return _result(disk, mu, x, "disk-descent", tol, _descent_gap(tol, value), iteration)
        if iteration == max_iter:
            break
        allowed = value + ULP_SLACK * max(1.0, value)
        accepted: DiskPoint | None = None
        step = 1.0
        while step >= MIN_STEP:
            candidate = disk.exp_map(x, step * newton)
            candidate_value = w2_variance(disk, mu, candidate)
            if candidate_value <= allowed:
                accepted = candidate
                break
            step /= 2.0
        if accepted is None or accepted == x:
            if gradient_norm > STALL_GRADIENT:
                emsg = f"disk descent stalled at gradient norm {gradient_norm:.3g} (tol {tol})"
                raise ConvergenceError(emsg, last_iterate=x, iterations=iteration)
            logger.debug(f"Disk barycenter at float resolution, gradient norm {gradient_norm:.3g}")
            gap = _descent_gap(gradient_norm, value)
            return _result(disk, mu, x, "disk-descent", gradient_norm, gap, iteration)
        x, value = accepted, candidate_value
    emsg = f"disk descent did not reach tol {tol} within {max_iter} iterations"
    raise ConvergenceError(emsg, last_iterate=x, iterations=max_iter)


def grid_barycenter(
    space: GeodesicSpace, mu: DiscreteMeasure, candidates: Sequence[PointRef]
) -> BarycenterResult:
    """Best candidate point; exact only over the candidate set."""
    if not candidates:
        raise InvalidInputError("grid_barycenter needs at least one candidate")
    D = space.pairwise_distances(list(candidates), list(mu.support))
    objective = (D**2) @ mu.weight_array
    best = int(np.argmin(objective))
    return _result(space, mu, candidates[best], "grid", 0.0, 0.0)


def compute_barycenter(
    space: GeodesicSpace,
    mu: DiscreteMeasure,
    tol: float = DEFAULT_TOLERANCE,
    max_iter: int = DEFAULT_MAX_ITER,
) -> BarycenterResult:
    """Certified barycenter with the solver suited to ``space``."""
    if isinstance(space, MetricTree):
        return tree_barycenter(space, mu)
    if isinstance(space, PoincareDisk):
        return disk_barycenter(space, mu, tol=tol, max_iter=max_iter)
    if isinstance(space, EuclideanPlane):
        return euclidean_barycenter(space, mu)
    raise InvalidInputError(f"no barycenter solver for the {space.name} space")
