# Copyright (c) 2024-2025 Datalayer, Inc.
#
# BSD 3-Clause License

"""Cyclic, stochastic and empirical approximation schemes for barycenters."""

from __future__ import annotations

import logging
import math

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from hyperbolic_barycenters.barycenter.solvers import compute_barycenter
from hyperbolic_barycenters.errors import InvalidInputError, TheoremViolationError
from hyperbolic_barycenters.models import (
    BarycenterResult,
    EmpiricalLLNResult,
    LLNSummary,
    TrajectoryRecord,
)
from hyperbolic_barycenters.schemes.bounds import (
    empirical_lln_bound,
    giant_step_tau,
    lln_bound,
    lln_step_bound,
    nodice_distance_bound,
    nodice_threshold,
    theta_omega,
    wasserstein_contraction_bound,
)
from hyperbolic_barycenters.schemes.proximal import proximal_sqdist
from hyperbolic_barycenters.spaces.base import GeodesicSpace, PointRef
from hyperbolic_barycenters.transport.measure import DiscreteMeasure
from hyperbolic_barycenters.transport.wasserstein import wasserstein
from hyperbolic_barycenters.utils import (
    STREAM_EMPIRICAL,
    STREAM_REPLICATION,
    map_chunks,
    rng_stream,
)


logger = logging.getLogger(__name__)


# Absolute slack, scaled by the size of the compared quantities, for recorded inequalities.
CHECK_TOLERANCE = 1e-9


@dataclass(frozen=True)
class SchemeConfig:
    """Parameters shared by the scheme runs."""

    tau: float
    epsilon: float
    delta: float = 0.0
    seed: int | None = None
    max_cycles: int = 10_000
    max_steps: int = 100_000
    threads: int = 1

    def __post_init__(self) -> None:
        if not self.tau > 0:
            raise InvalidInputError(f"tau must be > 0, got {self.tau}")
        if not self.epsilon > 0:
            raise InvalidInputError(f"epsilon must be > 0, got {self.epsilon}")
        if not self.delta >= 0:
            raise InvalidInputError(f"delta must be >= 0, got {self.delta}")
        if self.max_cycles < 1 or self.max_steps < 1:
            raise InvalidInputError("max_cycles and max_steps must be >= 1")
        if self.threads < 1:
            raise InvalidInputError(f"threads must be >= 1, got {self.threads}")


def _certification_gap(reference: BarycenterResult) -> float:
    return max(0.0, reference.value - reference.v_inf_estimate)


def _slack(*values: float) -> float:
    return CHECK_TOLERANCE * max(1.0, *(abs(v) for v in values))


def run_nodice(
    space: GeodesicSpace,
    z_list: Sequence[PointRef],
    y0: PointRef,
    cfg: SchemeConfig,
    reference: BarycenterResult,
) -> TrajectoryRecord:
    """Cyclic proximal scheme ``y_{kn+i} = prox_{tau d(z_i, .)**2}(y_{kn+i-1})``.

    Runs ``min(max_cycles, ceil(d(p, y0)**2 / (2 tau eps)))`` cycles (at least
    one), then evaluates the cycle bound with the diameter of everything
    observed. ``k0`` is the first cycle whose objective meets it.

    Raises:
        TheoremViolationError: no such cycle although every cycle the estimate
            allows was run, or ``k0`` exceeds its bound. The record is attached.
    """
    n = len(z_list)
    if n < 1:
        raise InvalidInputError("run_nodice needs at least one point z_i")
    for z in z_list:
        space.check_point(z)
    space.check_point(y0)
    p = reference.point
    tau, epsilon, delta = cfg.tau, cfg.epsilon, cfg.delta

    def f(y: PointRef) -> float:
        return float(np.sum(space.pairwise_distances([y], list(z_list))[0] ** 2))

    d2_start = space.distance(p, y0) ** 2
    k0_bound = d2_start / (2.0 * tau * epsilon)
    required = math.ceil(k0_bound)
    cycles = max(1, min(cfg.max_cycles, required))
    logger.info(f"No-dice run: n={n}, tau={tau}, epsilon={epsilon}, {cycles} cycles")

    cycle_points: list[PointRef] = [y0]
    observed: list[PointRef] = [p, *z_list, y0]
    y = y0
    for _ in range(cycles):
        for z in z_list:
            y = proximal_sqdist(space, z, y, tau)
            observed.append(y)
        cycle_points.append(y)

    D, exact = space.diameter_bound(observed, p)
    if not exact:
        logger.warning(f"D_Omega={D:.6g} is an upper bound (set too large for an exact diameter)")
    Theta = theta_omega(D, tau, delta)
    f_p = f(p)
    threshold = nodice_threshold(f_p, n, D, tau, delta, epsilon)
    objectives = [f(y) for y in cycle_points]
    d2 = [v**2 for v in space.pairwise_distances([p], cycle_points)[0]]

    k0 = next((k for k, value in enumerate(objectives) if value <= threshold), None)

    drop = 0.5 * n * Theta * delta + 2.0 * n * (n + 1) * D * D * tau
    lyapunov_violations = 0
    for k in range(len(cycle_points) - 1):
        rhs = d2[k] - 2.0 * tau * (objectives[k] - f_p - drop)
        if d2[k + 1] - rhs > _slack(d2[k], rhs):
            lyapunov_violations += 1

    record = TrajectoryRecord(
        scheme="nodice",
        seed=cfg.seed,
        tau=tau,
        epsilon=epsilon,
        delta=delta,
        n=n,
        iterates=cycle_points,
        objective_values=objectives,
        d2_to_reference=d2,
        k0=k0,
        k0_bound=k0_bound,
        bound_rhs=threshold,
        d_omega=D,
        d_omega_exact=exact,
        theta_omega=Theta,
        lyapunov_violations=lyapunov_violations,
        giant_step_tau=giant_step_tau(D, delta),
    )

    if k0 is None:
        if cycles >= required:
            record.violation = True
            emsg = f"no cycle met the objective bound within {cycles} cycles (bound {k0_bound:.6g})"
            raise TheoremViolationError(emsg, record=record)
        logger.warning(f"k0 not reached within max_cycles={cfg.max_cycles} (< {required} required)")
        return record

    # an approximate reference sits in the barycentric set at its certification gap
    gap = _certification_gap(reference)
    record.distance_at_k0 = math.sqrt(d2[k0])
    record.distance_bound = math.sqrt(nodice_distance_bound(n, D, tau, delta, epsilon) ** 2 + 4.0 * gap)
    if record.distance_at_k0 > record.distance_bound + _slack(record.distance_bound):
        record.violation = True
    if k0 > 0 and not k0 < k0_bound:
        record.violation = True
    if lyapunov_violations:
        record.violation = True
    if record.violation:
        emsg = f"no-dice run at k0={k0} contradicts the cycle estimates"
        raise TheoremViolationError(emsg, record=record)
    logger.info(f"No-dice k0={k0} (bound {k0_bound:.6g}), D_Omega={D:.6g}")
    return record


def run_lln(
    space: GeodesicSpace,
    mu: DiscreteMeasure,
    S0: PointRef,
    cfg: SchemeConfig,
    reference: BarycenterResult,
    replications: int,
) -> tuple[LLNSummary, list[TrajectoryRecord]]:
    """Stochastic scheme ``S_{k+1} = prox_{tau d(Z_{k+1}, .)**2}(S_k)`` with ``Z_k ~ mu`` i.i.d.

    Replication ``r`` draws from the stream ``(seed, replication tag, r)`` so
    the summary does not depend on ``cfg.threads``. The mean of
    ``d(p, S_k)**2`` is estimated for ``k < ceil(d(p, S0)**2 / (tau eps))``.
    """
    if replications < 1:
        raise InvalidInputError(f"replications must be >= 1, got {replications}")
    mu.check_space(space)
    space.check_point(S0)
    p = reference.point
    tau, epsilon, delta = cfg.tau, cfg.epsilon, cfg.delta
    horizon = math.ceil(space.distance(p, S0) ** 2 / (tau * epsilon))
    steps = max(1, min(horizon, cfg.max_steps))
    if steps < horizon:
        logger.warning(f"LLN horizon {horizon} capped at max_steps={cfg.max_steps}")
    logger.info(f"LLN run: {replications} replications of {steps} steps, tau={tau}")
    atoms = list(mu.support)

    def _replication(r: int) -> TrajectoryRecord:
        rng = rng_stream(cfg.seed, STREAM_REPLICATION, r)
        draws = mu.draw(rng, steps - 1)
        path = [S0]
        S = S0
        for index in draws:
            S = proximal_sqdist(space, atoms[int(index)], S, tau)
            path.append(S)
        d2 = list(space.pairwise_distances([p], path)[0] ** 2)
        return TrajectoryRecord(
            scheme="lln",
            seed=cfg.seed,
            tau=tau,
            epsilon=epsilon,
            delta=delta,
            iterates=path,
            d2_to_reference=d2,
        )

    records = map_chunks(_replication, replications, threads=cfg.threads)
    matrix = np.array([record.d2_to_reference for record in records])
    estimates = matrix.mean(axis=0)
    if replications > 1:
        errors = matrix.std(axis=0, ddof=1) / math.sqrt(replications)
    else:
        errors = np.zeros(steps)

    observed: list[PointRef] = [p, *atoms]
    for record in records:
        observed.extend(record.iterates)
    D, exact = space.diameter_bound(observed, p)
    Theta = theta_omega(D, tau, delta)
    rhs = lln_bound(D, tau, delta, epsilon) + 2.0 * _certification_gap(reference)

    min_index = int(np.argmin(estimates))
    recursion_violations = 0
    for k in range(steps - 1):
        allowed = lln_step_bound(float(estimates[k]), D, tau, delta) + 3.0 * float(errors[k + 1])
        if estimates[k + 1] - allowed > _slack(allowed):
            recursion_violations += 1

    for record in records:
        record.d_omega, record.d_omega_exact, record.theta_omega = D, exact, Theta
        record.bound_rhs = rhs

    satisfied = bool(estimates[min_index] <= rhs + 3.0 * errors[min_index] + _slack(rhs))
    summary = LLNSummary(
        seed=int(cfg.seed) if cfg.seed is not None else 0,
        replications=replications,
        steps=steps,
        tau=tau,
        epsilon=epsilon,
        delta=delta,
        estimates=[float(v) for v in estimates],
        standard_errors=[float(v) for v in errors],
        min_index=min_index,
        min_estimate=float(estimates[min_index]),
        min_standard_error=float(errors[min_index]),
        bound_rhs=rhs,
        d_omega=D,
        d_omega_exact=exact,
        theta_omega=Theta,
        recursion_violations=recursion_violations,
        satisfied=satisfied,
    )
    logger.info(
        f"LLN min estimate {summary.min_estimate:.6g} at k={min_index} vs bound {rhs:.6g}"
    )
    return summary, records


def run_empirical_lln(
    space: GeodesicSpace,
    mu: DiscreteMeasure,
    k_max: int,
    seed: int,
    reference: BarycenterResult,
    delta: float = 0.0,
) -> EmpiricalLLNResult:
    """Barycenters ``sigma_k`` of the empirical measures of ``k`` i.i.d. draws from ``mu``.

    Each ``d(p, sigma_k)`` is compared with the contraction bound against
    ``W_1(mu, nu_k)``; the limit bound uses ``D = 3 diam(supp mu)``.
    """
    if k_max < 1:
        raise InvalidInputError(f"k_max must be >= 1, got {k_max}")
    mu.check_space(space)
    p = reference.point
    atoms = list(mu.support)
    draws = mu.draw(rng_stream(seed, STREAM_EMPIRICAL), k_max)
    support_diameter = space.diameter(atoms)
    gap_p = _certification_gap(reference)

    counts = np.zeros(len(atoms), dtype=int)
    barycenters: list[PointRef] = []
    distances: list[float] = []
    w1_distances: list[float] = []
    violations = 0
    for k, index in enumerate(draws, start=1):
        counts[int(index)] += 1
        present = np.nonzero(counts)[0]
        nu = DiscreteMeasure(
            tuple(atoms[int(i)] for i in present), tuple(float(counts[i]) / k for i in present)
        )
        sigma = compute_barycenter(space, nu)
        distance = space.distance(p, sigma.point)
        w1, _ = wasserstein(space, 1, mu, nu)
        D2 = space.diameter([p, sigma.point, *atoms])
        allowed = wasserstein_contraction_bound(
            w1, D2, delta, gap_p, _certification_gap(sigma)
        )
        if distance - allowed > _slack(allowed):
            violations += 1
        barycenters.append(sigma.point)
        distances.append(distance)
        w1_distances.append(w1)

    bound = empirical_lln_bound(support_diameter, delta)
    logger.info(f"Empirical LLN: d(p, sigma_{k_max})={distances[-1]:.6g}, limit bound {bound:.6g}")
    return EmpiricalLLNResult(
        seed=seed,
        k_max=k_max,
        barycenters=barycenters,
        distances=distances,
        w1_distances=w1_distances,
        bound=bound,
        support_diameter=support_diameter,
        contraction_violations=violations,
    )
