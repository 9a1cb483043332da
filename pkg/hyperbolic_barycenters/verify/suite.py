# Copyright (c) 2024-2025 Datalayer, Inc.
#
# BSD 3-Clause License

"""Chunked execution of the inequality checks, the suite runner and witness replay."""

from __future__ import annotations

import logging

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from hyperbolic_barycenters.errors import InvalidInputError
from hyperbolic_barycenters.hyperbolicity.gromov import DEFAULT_SAFETY_FACTOR, resolve_delta
from hyperbolic_barycenters.models import InequalityReport
from hyperbolic_barycenters.spaces.base import GeodesicSpace, PointRef
from hyperbolic_barycenters.spaces.io import load_space
from hyperbolic_barycenters.utils import (
    DEFAULT_CHUNK_SIZE,
    STREAM_CHECK,
    chunk_bounds,
    format_float,
    map_chunks,
    rng_stream,
)
from hyperbolic_barycenters.verify.checks import CHECKS, Check, Instance, SamplingOptions


logger = logging.getLogger(__name__)


# A trial counts as a violation when ``LHS - RHS`` exceeds this.
CHECK_TOLERANCE = 1e-9

# How many times a violated suite re-estimates delta with a larger budget.
MAX_REESTIMATES = 2


@dataclass
class _ChunkStats:
    trials: int = 0
    skipped: int = 0
    violations: int = 0
    gap_sum: float = 0.0
    max_gap: float = float("-inf")
    witness: dict | None = None


def _run_chunk(
    check: Check,
    space: GeodesicSpace,
    delta: float,
    seed: int,
    index: int,
    count: int,
    options: SamplingOptions,
    tolerance: float,
) -> _ChunkStats:
    rng = rng_stream(seed, STREAM_CHECK + check.stream, index)
    stats = _ChunkStats()
    for _ in range(count):
        instance = check.sample(space, rng, options, delta)
        values = check.evaluate(space, instance, delta)
        stats.trials += 1
        if values is None:
            stats.skipped += 1
            continue
        lhs, rhs = values
        gap = lhs - rhs
        stats.gap_sum += gap
        if gap > tolerance:
            stats.violations += 1
        if gap > stats.max_gap:
            stats.max_gap = gap
            stats.witness = {
                **instance.to_json(),
                "lhs": lhs,
                "rhs": rhs,
                "gap": gap,
            }
    return stats


def run_check(
    name: str,
    space: GeodesicSpace,
    trials: int,
    delta: float,
    seed: int,
    threads: int = 1,
    options: SamplingOptions | None = None,
    tolerance: float = CHECK_TOLERANCE,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
) -> InequalityReport:
    """Run ``trials`` random instances of one inequality.

    Chunk ``i`` draws from its own stream, so the report does not depend on
    ``threads``. Chunks are merged in order; the first maximal gap wins.
    """
    if name not in CHECKS:
        raise InvalidInputError(f"unknown inequality {name!r}; expected one of {sorted(CHECKS)}")
    if trials < 0:
        raise InvalidInputError(f"trials must be >= 0, got {trials}")
    if not delta >= 0:
        raise InvalidInputError(f"delta must be >= 0, got {delta}")
    check = CHECKS[name]
    options = options or SamplingOptions()
    chunks = chunk_bounds(trials, chunk_size)

    def _chunk(i: int) -> _ChunkStats:
        return _run_chunk(check, space, delta, seed, i, chunks[i][1], options, tolerance)

    total = _ChunkStats()
    for stats in map_chunks(_chunk, len(chunks), threads):
        total.trials += stats.trials
        total.skipped += stats.skipped
        total.violations += stats.violations
        total.gap_sum += stats.gap_sum
        if stats.max_gap > total.max_gap:
            total.max_gap = stats.max_gap
            total.witness = stats.witness

    evaluated = total.trials - total.skipped
    report = InequalityReport(
        inequality=name,
        space=space.name,
        trials=total.trials,
        violations=total.violations,
        skipped=total.skipped,
        max_violation=total.max_gap if evaluated else 0.0,
        mean_gap=total.gap_sum / evaluated if evaluated else 0.0,
        witness=total.witness,
        delta_used=delta,
        seed=seed,
        tolerance=tolerance,
    )
    if report.violations:
        logger.warning(
            f"{name} on {space.name}: {report.violations} violations, "
            f"max LHS-RHS {format_float(report.max_violation)}"
        )
    else:
        logger.info(f"{name} on {space.name}: {report.trials} trials, no violation")
    return report


def check_cat0_midpoint(
    space: GeodesicSpace,
    trials: int,
    delta: float,
    seed: int,
    threads: int = 1,
    options: SamplingOptions | None = None,
    tolerance: float = CHECK_TOLERANCE,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
) -> InequalityReport:
    return run_check("cat0_midpoint", space, trials, delta, seed, threads, options, tolerance, chunk_size)


def check_cat0_general(
    space: GeodesicSpace,
    trials: int,
    delta: float,
    seed: int,
    threads: int = 1,
    options: SamplingOptions | None = None,
    tolerance: float = CHECK_TOLERANCE,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
) -> InequalityReport:
    return run_check("cat0_general", space, trials, delta, seed, threads, options, tolerance, chunk_size)


def check_busemann(
    space: GeodesicSpace,
    trials: int,
    delta: float,
    seed: int,
    threads: int = 1,
    options: SamplingOptions | None = None,
    tolerance: float = CHECK_TOLERANCE,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
) -> InequalityReport:
    return run_check("busemann", space, trials, delta, seed, threads, options, tolerance, chunk_size)


def check_key_estimate(
    space: GeodesicSpace,
    trials: int,
    delta: float,
    seed: int,
    threads: int = 1,
    options: SamplingOptions | None = None,
    tolerance: float = CHECK_TOLERANCE,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
) -> InequalityReport:
    return run_check("key_estimate", space, trials, delta, seed, threads, options, tolerance, chunk_size)


def check_projection_lemma(
    space: GeodesicSpace,
    trials: int,
    delta: float,
    seed: int,
    threads: int = 1,
    options: SamplingOptions | None = None,
    tolerance: float = CHECK_TOLERANCE,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
) -> InequalityReport:
    return run_check("projection_lemma", space, trials, delta, seed, threads, options, tolerance, chunk_size)


def check_wasserstein_contraction(
    space: GeodesicSpace,
    trials: int,
    delta: float,
    seed: int,
    threads: int = 1,
    options: SamplingOptions | None = None,
    tolerance: float = CHECK_TOLERANCE,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
) -> InequalityReport:
    return run_check("wasserstein_contraction", space, trials, delta, seed, threads, options, tolerance, chunk_size)


def check_variance_inequality(
    space: GeodesicSpace,
    trials: int,
    delta: float,
    seed: int,
    threads: int = 1,
    options: SamplingOptions | None = None,
    tolerance: float = CHECK_TOLERANCE,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
) -> InequalityReport:
    return run_check("variance_inequality", space, trials, delta, seed, threads, options, tolerance, chunk_size)


def replay(space: GeodesicSpace, report: InequalityReport) -> tuple[float, float]:
    """Re-evaluate the witness of ``report``; returns its ``(lhs, rhs)``."""
    if report.witness is None:
        raise InvalidInputError(f"report for {report.inequality} carries no witness")
    check = CHECKS.get(report.inequality)
    if check is None:
        raise InvalidInputError(f"unknown inequality {report.inequality!r}")
    instance = Instance.from_json(space, report.witness)
    values = check.evaluate(space, instance, report.delta_used)
    if values is None:
        raise InvalidInputError(f"witness for {report.inequality} misses the hypotheses")
    return values


@dataclass
class SuiteConfig:
    """What the ``verify`` command runs."""

    spaces: Sequence[str] = ("random-tree:64",)
    trials: int = 10_000
    seed: int = 0
    delta: str = "0"
    checks: Sequence[str] = field(default_factory=lambda: tuple(CHECKS))
    threads: int = 1
    safety_factor: float = DEFAULT_SAFETY_FACTOR
    tolerance: float = CHECK_TOLERANCE
    options: SamplingOptions = field(default_factory=SamplingOptions)


def _grown_policy(policy: str) -> str:
    _, _, budget = policy.partition(":")
    return f"estimate:{int(float(budget or 1_000_000)) * 4}"


def run_suite(config: SuiteConfig) -> list[InequalityReport]:
    """Run every configured check on every configured space.

    With an estimated delta, a space whose checks report violations is
    re-run with a 4x larger estimation budget, at most twice; the reports of
    the last attempt are kept.
    """
    unknown = [name for name in config.checks if name not in CHECKS]
    if unknown:
        raise InvalidInputError(f"unknown inequalities {unknown}; expected a subset of {sorted(CHECKS)}")
    reports: list[InequalityReport] = []
    for source in config.spaces:
        space = load_space(source, config.seed)
        policy = str(config.delta)

        def _region(rng: np.random.Generator, n: int, space: GeodesicSpace = space) -> list[PointRef]:
            return space.sample(rng, n, config.options.radius)

        for attempt in range(MAX_REESTIMATES + 1):
            delta, estimate = resolve_delta(
                policy, space, _region, config.seed, config.safety_factor, config.threads
            )
            if estimate is not None:
                logger.info(
                    f"{space.name}: delta_hat {format_float(estimate.delta_hat)} "
                    f"from {estimate.quadruples_checked} quadruples, using {format_float(delta)}"
                )
            attempt_reports = [
                run_check(
                    name,
                    space,
                    config.trials,
                    delta,
                    config.seed,
                    threads=config.threads,
                    options=config.options,
                    tolerance=config.tolerance,
                )
                for name in config.checks
            ]
            violated = any(r.violations for r in attempt_reports)
            if not (violated and estimate is not None and attempt < MAX_REESTIMATES):
                break
            policy = _grown_policy(policy)
            logger.warning(f"{space.name}: violations under an estimated delta, re-estimating with {policy}")
        reports.extend(attempt_reports)
    return reports


def format_table(reports: Sequence[InequalityReport]) -> str:
    """Plain-text table, one row per report."""
    header = f"{'inequality':<26}{'space':<12}{'trials':>9}{'skipped':>9}{'viol':>7}{'max LHS-RHS':>24}{'delta':>24}"
    rows = [header, "-" * len(header)]
    for r in reports:
        rows.append(
            f"{r.inequality:<26}{r.space:<12}{r.trials:>9}{r.skipped:>9}{r.violations:>7}"
            f"{format_float(r.max_violation):>24}{format_float(r.delta_used):>24}"
        )
    return "\n".join(rows)
