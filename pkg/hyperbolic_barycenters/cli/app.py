# Copyright (c) 2024-2025 Datalayer, Inc.
#
# BSD 3-Clause License

"""Hyperbolic Barycenters CLI - barycenters, transport and inequality checks on hyperbolic spaces."""

from __future__ import annotations

import logging
import sys

from typing import Annotated, List, Optional

import numpy as np
import typer

try:  # newer typer releases vendor click and raise their own exception classes
    from typer._click import exceptions as click_exceptions
except ImportError:
    from click import exceptions as click_exceptions

from hyperbolic_barycenters.barycenter.solvers import compute_barycenter
from hyperbolic_barycenters.cli.config import RunConfig, resolve_config
from hyperbolic_barycenters.cli.output import document, emit, write_trace
from hyperbolic_barycenters.errors import HyperbolicBarycentersError, TheoremViolationError
from hyperbolic_barycenters.hyperbolicity.gromov import estimate_delta, resolve_delta
from hyperbolic_barycenters.models import WassersteinResult
from hyperbolic_barycenters.schemes.bounds import empirical_lln_bound
from hyperbolic_barycenters.schemes.runs import (
    SchemeConfig,
    run_empirical_lln,
    run_lln,
    run_nodice,
)
from hyperbolic_barycenters.spaces.base import GeodesicSpace, PointRef
from hyperbolic_barycenters.spaces.io import load_space
from hyperbolic_barycenters.transport.measure import DiscreteMeasure, load_measure
from hyperbolic_barycenters.transport.wasserstein import wasserstein
from hyperbolic_barycenters.verify.checks import SamplingOptions
from hyperbolic_barycenters.verify.suite import SuiteConfig, format_table, run_suite


# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)


logging.getLogger("ot").setLevel(logging.ERROR)


def enable_verbose_logging():
    """Enable debug logging for the library (per-iteration detail)."""
    logging.getLogger("hyperbolic_barycenters").setLevel(logging.DEBUG)
    logger.debug("Verbose logging enabled")


app = typer.Typer(
    help="Hyperbolic Barycenters - barycenters, optimal transport and proximal schemes on Gromov hyperbolic spaces.",
    pretty_exceptions_enable=False,
    no_args_is_help=True,
)


ConfigOption = Annotated[Optional[str], typer.Option("--config", help="Key-value config file; flags override it.")]
SpaceOption = Annotated[Optional[str], typer.Option(help="'disk', 'plane', 'random-tree:<n>' or a tree file.")]
MeasureOption = Annotated[Optional[str], typer.Option(help="Measure file ('<weight> <point>' lines).")]
SeedOption = Annotated[Optional[int], typer.Option(help="Random seed (required, here or in --config).")]
DeltaOption = Annotated[Optional[str], typer.Option(help="Delta: a number or 'estimate:<budget>'.")]
SafetyOption = Annotated[Optional[float], typer.Option(help="Multiplier for an estimated delta.")]
RadiusOption = Annotated[Optional[float], typer.Option(help="Radius of the sampled ball.")]
TauOption = Annotated[Optional[float], typer.Option(help="Proximal step size.")]
EpsilonOption = Annotated[Optional[float], typer.Option(help="Accuracy target.")]
Y0Option = Annotated[Optional[str], typer.Option("--y0", help="Starting point; the center of the space by default.")]
ThreadsOption = Annotated[Optional[int], typer.Option(help="Worker threads (results do not depend on it).")]
PrefixOption = Annotated[Optional[str], typer.Option(help="Prefix of the output files.")]
VerboseOption = Annotated[bool, typer.Option(help="Enable verbose logging.")]


def _setup(verbose: bool, config_path: str | None, **overrides) -> tuple[RunConfig, int, GeodesicSpace]:
    if verbose:
        enable_verbose_logging()
    config = resolve_config(config_path, **overrides)
    seed = config.require_seed()
    space = load_space(config.space, seed)
    logger.info(f"Space {config.space} ({space.name}), seed {seed}")
    return config, seed, space


def _measure(space: GeodesicSpace, path: str, field: str, command: str) -> DiscreteMeasure:
    if not path:
        typer.echo(f"error: {field}: required for {command}", err=True)
        raise typer.Exit(code=1)
    return load_measure(space, path)


def _sampler(space: GeodesicSpace, radius: float):
    def _region(rng: np.random.Generator, n: int) -> list[PointRef]:
        return space.sample(rng, n, radius)

    return _region


def _delta(config: RunConfig, space: GeodesicSpace, seed: int) -> float:
    delta, _ = resolve_delta(
        config.delta, space, _sampler(space, config.radius), seed, config.safety_factor, config.threads
    )
    return delta


def _start(config: RunConfig, space: GeodesicSpace) -> PointRef:
    return space.parse_point(config.y0) if config.y0 else space.center()


def _mean_objective(space: GeodesicSpace, mu: DiscreteMeasure, path: list[PointRef]) -> np.ndarray:
    return (space.pairwise_distances(path, list(mu.support)) ** 2) @ mu.weight_array


@app.command("estimate-delta")
def estimate_delta_command(
    config_path: ConfigOption = None,
    space: SpaceOption = None,
    seed: SeedOption = None,
    budget: Annotated[Optional[int], typer.Option(help="Quadruples to examine.")] = None,
    radius: RadiusOption = None,
    safety_factor: SafetyOption = None,
    threads: ThreadsOption = None,
    output_prefix: PrefixOption = None,
    verbose: VerboseOption = False,
):
    """
    Estimate the four-point hyperbolicity constant of a sampled ball.

    The estimate is a lower bound; 'delta_used' applies the safety factor.
    """
    config, seed, geodesic_space = _setup(
        verbose, config_path, space=space, seed=seed, budget=budget, radius=radius,
        safety_factor=safety_factor, threads=threads, output_prefix=output_prefix,
    )
    estimate = estimate_delta(
        geodesic_space, _sampler(geodesic_space, config.radius), config.budget, seed, threads=config.threads
    )
    delta = estimate.delta_hat * config.safety_factor
    emit(document("estimate-delta", config, delta, estimate), config)


@app.command()
def barycenter(
    config_path: ConfigOption = None,
    space: SpaceOption = None,
    measure: MeasureOption = None,
    seed: SeedOption = None,
    output_prefix: PrefixOption = None,
    verbose: VerboseOption = False,
):
    """
    Compute the barycenter of a measure with the solver suited to the space.

    Examples:
        hyb barycenter --space tree.txt --measure mu.txt --seed 7
    """
    config, _, geodesic_space = _setup(
        verbose, config_path, space=space, measure=measure, seed=seed, output_prefix=output_prefix
    )
    mu = _measure(geodesic_space, config.measure, "measure", "barycenter")
    result = compute_barycenter(geodesic_space, mu)
    emit(document("barycenter", config, None, result), config)


@app.command("wasserstein")
def wasserstein_command(
    config_path: ConfigOption = None,
    space: SpaceOption = None,
    measure: MeasureOption = None,
    measure2: Annotated[Optional[str], typer.Option(help="Second measure file.")] = None,
    order: Annotated[Optional[int], typer.Option(help="Order p of W_p (1 or 2).")] = None,
    seed: SeedOption = None,
    output_prefix: PrefixOption = None,
    verbose: VerboseOption = False,
):
    """
    Exact Wasserstein distance between two measures, with the optimal coupling.
    """
    config, _, geodesic_space = _setup(
        verbose, config_path, space=space, measure=measure, measure2=measure2, order=order,
        seed=seed, output_prefix=output_prefix,
    )
    mu = _measure(geodesic_space, config.measure, "measure", "wasserstein")
    nu = _measure(geodesic_space, config.measure2, "measure2", "wasserstein")
    value, coupling = wasserstein(geodesic_space, config.order, mu, nu)
    result = WassersteinResult(
        space=geodesic_space.name, order=config.order, value=value, coupling=coupling.matrix.tolist()
    )
    emit(document("wasserstein", config, None, result), config)


@app.command()
def nodice(
    config_path: ConfigOption = None,
    space: SpaceOption = None,
    measure: MeasureOption = None,
    y0: Y0Option = None,
    tau: TauOption = None,
    epsilon: EpsilonOption = None,
    delta: DeltaOption = None,
    safety_factor: SafetyOption = None,
    radius: RadiusOption = None,
    max_cycles: Annotated[Optional[int], typer.Option(help="Cap on the number of cycles.")] = None,
    seed: SeedOption = None,
    threads: ThreadsOption = None,
    output_prefix: PrefixOption = None,
    verbose: VerboseOption = False,
):
    """
    Run the cyclic proximal scheme over the support points of a measure.

    Exits with code 2 when a run contradicts the cycle estimates; the
    offending record is written as the summary.
    """
    config, seed, geodesic_space = _setup(
        verbose, config_path, space=space, measure=measure, y0=y0, tau=tau, epsilon=epsilon,
        delta=delta, safety_factor=safety_factor, radius=radius, max_cycles=max_cycles, seed=seed,
        threads=threads, output_prefix=output_prefix,
    )
    mu = _measure(geodesic_space, config.measure, "measure", "nodice")
    z_list = list(mu.support)
    # the cyclic scheme minimizes the unweighted sum of squared distances
    reference = compute_barycenter(geodesic_space, DiscreteMeasure.uniform(z_list))
    delta_used = _delta(config, geodesic_space, seed)
    cfg = SchemeConfig(
        tau=config.tau, epsilon=config.epsilon, delta=delta_used, seed=seed,
        max_cycles=config.max_cycles, threads=config.threads,
    )
    exit_code = 0
    try:
        record = run_nodice(geodesic_space, z_list, _start(config, geodesic_space), cfg, reference)
    except TheoremViolationError as e:
        logger.error(f"Theorem violation: {e}")
        record, exit_code = e.record, 2
    rows = [
        (k, objective, d2, record.bound_rhs)
        for k, (objective, d2) in enumerate(zip(record.objective_values, record.d2_to_reference))
    ]
    write_trace(config, delta_used, rows)
    emit(document("nodice", config, delta_used, record), config)
    if exit_code:
        raise typer.Exit(code=exit_code)


@app.command()
def lln(
    config_path: ConfigOption = None,
    space: SpaceOption = None,
    measure: MeasureOption = None,
    y0: Y0Option = None,
    tau: TauOption = None,
    epsilon: EpsilonOption = None,
    delta: DeltaOption = None,
    safety_factor: SafetyOption = None,
    radius: RadiusOption = None,
    replications: Annotated[Optional[int], typer.Option(help="Independent replications.")] = None,
    max_steps: Annotated[Optional[int], typer.Option(help="Cap on the number of steps.")] = None,
    seed: SeedOption = None,
    threads: ThreadsOption = None,
    output_prefix: PrefixOption = None,
    verbose: VerboseOption = False,
):
    """
    Monte Carlo run of the stochastic proximal scheme driven by i.i.d. draws from a measure.

    Exits with code 2 when the smallest estimated mean squared distance
    exceeds its bound by more than three standard errors.
    """
    config, seed, geodesic_space = _setup(
        verbose, config_path, space=space, measure=measure, y0=y0, tau=tau, epsilon=epsilon,
        delta=delta, safety_factor=safety_factor, radius=radius, replications=replications,
        max_steps=max_steps, seed=seed, threads=threads, output_prefix=output_prefix,
    )
    mu = _measure(geodesic_space, config.measure, "measure", "lln")
    reference = compute_barycenter(geodesic_space, mu)
    delta_used = _delta(config, geodesic_space, seed)
    cfg = SchemeConfig(
        tau=config.tau, epsilon=config.epsilon, delta=delta_used, seed=seed,
        max_steps=config.max_steps, threads=config.threads,
    )
    summary, records = run_lln(
        geodesic_space, mu, _start(config, geodesic_space), cfg, reference, config.replications
    )
    objectives = np.mean([_mean_objective(geodesic_space, mu, r.iterates) for r in records], axis=0)
    rows = [
        (k, objectives[k], summary.estimates[k], summary.bound_rhs, summary.standard_errors[k])
        for k in range(summary.steps)
    ]
    write_trace(config, delta_used, rows, extra_columns=("standard_error",))
    emit(document("lln", config, delta_used, summary), config)
    if not summary.satisfied:
        logger.error("Estimated mean squared distance exceeds its bound")
        raise typer.Exit(code=2)


@app.command("empirical-lln")
def empirical_lln(
    config_path: ConfigOption = None,
    space: SpaceOption = None,
    measure: MeasureOption = None,
    k_max: Annotated[Optional[int], typer.Option(help="Largest empirical sample size.")] = None,
    delta: DeltaOption = None,
    safety_factor: SafetyOption = None,
    radius: RadiusOption = None,
    seed: SeedOption = None,
    threads: ThreadsOption = None,
    output_prefix: PrefixOption = None,
    verbose: VerboseOption = False,
):
    """
    Barycenters of growing empirical measures against the barycenter of the measure.

    Exits with code 2 when some d(p, sigma_k) breaks the Wasserstein contraction bound.
    """
    config, seed, geodesic_space = _setup(
        verbose, config_path, space=space, measure=measure, k_max=k_max, delta=delta,
        safety_factor=safety_factor, radius=radius, seed=seed, threads=threads,
        output_prefix=output_prefix,
    )
    mu = _measure(geodesic_space, config.measure, "measure", "empirical-lln")
    reference = compute_barycenter(geodesic_space, mu)
    delta_used = _delta(config, geodesic_space, seed)
    result = run_empirical_lln(geodesic_space, mu, config.k_max, seed, reference, delta=delta_used)
    objectives = _mean_objective(geodesic_space, mu, result.barycenters)
    limit = empirical_lln_bound(result.support_diameter, delta_used)
    rows = [
        (k + 1, objectives[k], result.distances[k] ** 2, (w1 + limit) ** 2, w1)
        for k, w1 in enumerate(result.w1_distances)
    ]
    write_trace(config, delta_used, rows, extra_columns=("w1",))
    emit(document("empirical-lln", config, delta_used, result), config)
    if result.contraction_violations:
        logger.error(f"{result.contraction_violations} contraction bound violations")
        raise typer.Exit(code=2)


@app.command()
def verify(
    config_path: ConfigOption = None,
    space: SpaceOption = None,
    delta: DeltaOption = None,
    safety_factor: SafetyOption = None,
    trials: Annotated[Optional[int], typer.Option(help="Random instances per inequality.")] = None,
    checks: Annotated[Optional[str], typer.Option(help="Comma-separated inequalities; all by default.")] = None,
    radius: RadiusOption = None,
    seed: SeedOption = None,
    threads: ThreadsOption = None,
    output_prefix: PrefixOption = None,
    verbose: VerboseOption = False,
):
    """
    Check the inequalities on random instances; prints a JSON report and a summary table.

    Exits with code 2 when any inequality is violated; the report carries a
    replayable witness for each.

    Examples:
        hyb verify --space disk --delta estimate:1000000 --trials 100000 --seed 7
    """
    config, seed, _ = _setup(
        verbose, config_path, space=space, delta=delta, safety_factor=safety_factor, trials=trials,
        checks=checks, radius=radius, seed=seed, threads=threads, output_prefix=output_prefix,
    )
    suite = SuiteConfig(
        spaces=[config.space],
        trials=config.trials,
        seed=seed,
        delta=config.delta,
        threads=config.threads,
        safety_factor=config.safety_factor,
        options=SamplingOptions(radius=config.radius),
    )
    if config.check_names():
        suite.checks = config.check_names()
    reports = run_suite(suite)
    delta_used = reports[0].delta_used if reports else None
    emit(document("verify", config, delta_used, reports), config, suffix="report")
    typer.echo(format_table(reports), err=True)
    if any(r.violations for r in reports):
        raise typer.Exit(code=2)


def main(argv: Optional[List[str]] = None) -> int:
    """Run the CLI and return its exit code: 0 success, 1 input error, 2 theorem violation."""
    try:
        result = app(args=argv, prog_name="hyb", standalone_mode=False)
    except click_exceptions.ClickException as e:
        e.show()
        return 1
    except click_exceptions.Abort:
        return 1
    except HyperbolicBarycentersError as e:
        typer.echo(f"error: {e}", err=True)
        return 1
    return result if isinstance(result, int) else 0


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
