# Copyright (c) 2024-2025 Datalayer, Inc.
#
# BSD 3-Clause License

import json

import pytest

from hyperbolic_barycenters.models import InequalityReport
from hyperbolic_barycenters.spaces import PoincareDisk, random_tree
from hyperbolic_barycenters.utils import rng_stream
from hyperbolic_barycenters.verify import (
    CHECKS,
    Instance,
    SamplingOptions,
    SuiteConfig,
    check_busemann,
    check_cat0_general,
    check_cat0_midpoint,
    check_key_estimate,
    check_projection_lemma,
    check_variance_inequality,
    check_wasserstein_contraction,
    format_table,
    replay,
    run_check,
    run_suite,
)


@pytest.fixture(scope="module")
def tree():
    return random_tree(30, rng_stream(17, 0))


@pytest.mark.parametrize(
    "check, trials",
    [
        (check_cat0_midpoint, 2_000),
        (check_cat0_general, 2_000),
        (check_busemann, 2_000),
        (check_key_estimate, 2_000),
        (check_projection_lemma, 2_000),
        (check_wasserstein_contraction, 150),
        (check_variance_inequality, 150),
    ],
)
def test_checks_hold_exactly_on_trees(tree, check, trials):
    report = check(tree, trials, 0.0, 5)
    assert report.violations == 0
    assert report.trials == trials
    assert report.max_violation <= 1e-9
    assert report.witness is not None


@pytest.mark.parametrize("name", ["cat0_midpoint", "busemann", "key_estimate", "midpoint_variance"])
def test_comparison_checks_hold_on_the_disk_with_zero_delta(name):
    # the hyperbolic plane is CAT(-1), so CAT(0) forms hold with delta = 0
    report = run_check(name, PoincareDisk(), 1_000, 0.0, 3)
    assert report.violations == 0


@pytest.mark.parametrize("name", ["variance_inequality", "wasserstein_contraction"])
@pytest.mark.parametrize("delta", [0.0, 0.5])
def test_barycentric_checks_run_on_the_disk(name, delta):
    report = run_check(name, PoincareDisk(), 40, delta, 7)
    assert report.trials == 40
    assert report.skipped == 0
    assert report.violations == 0


def test_tripod_check_needs_a_positive_delta():
    disk = PoincareDisk()
    strict = run_check("tripod", disk, 2_000, 0.0, 9)
    assert strict.violations > 0
    relaxed = run_check("tripod", disk, 2_000, 2.0, 9)
    assert relaxed.violations == 0


def test_report_is_thread_and_chunk_order_independent(tree):
    one = run_check("key_estimate", tree, 1_000, 0.0, 21, threads=1, chunk_size=64)
    four = run_check("key_estimate", tree, 1_000, 0.0, 21, threads=4, chunk_size=64)
    assert one.model_dump() == four.model_dump()
    assert one.model_dump_json() == four.model_dump_json()


def test_witness_replays_exactly(tree):
    disk = PoincareDisk()
    report = run_check("tripod", disk, 500, 0.0, 13)
    # through JSON and back, as a report file would be read
    again = InequalityReport.model_validate(json.loads(report.model_dump_json()))
    lhs, rhs = replay(disk, again)
    assert lhs == report.witness["lhs"]
    assert rhs == report.witness["rhs"]
    assert lhs - rhs == pytest.approx(report.max_violation, abs=1e-12)

    contraction = run_check("wasserstein_contraction", tree, 40, 0.0, 13)
    lhs, rhs = replay(tree, contraction)
    assert lhs - rhs == contraction.max_violation


def test_projection_check_skips_points_of_A(tree):
    x = tree.sample(rng_stream(0, 0), 1)[0]
    instance = Instance(points={"x": x, "y": x, "p": x, "q": x}, params={"r": 0.0})
    assert CHECKS["projection_lemma"].evaluate(tree, instance, 0.0) is None
    # with a large delta every instance misses the separation hypothesis
    report = run_check("projection_lemma", tree, 200, 100.0, 1)
    assert report.skipped == 200
    assert report.max_violation == 0.0


def test_exact_barycentric_sets_collapse(tree):
    options = SamplingOptions(eps_max=0.0)
    report = run_check("variance_inequality", tree, 100, 0.0, 2, options=options)
    assert report.violations == 0
    assert report.witness["lhs"] <= 1e-5


def test_run_suite_on_no_spaces():
    assert run_suite(SuiteConfig(spaces=[], seed=1)) == []


def test_run_suite_on_a_random_tree():
    config = SuiteConfig(
        spaces=["random-tree:20"],
        trials=100,
        seed=4,
        checks=["cat0_midpoint", "cat0_general", "busemann", "key_estimate", "projection_lemma"],
    )
    reports = run_suite(config)
    assert [r.inequality for r in reports] == list(config.checks)
    assert all(r.violations == 0 and r.delta_used == 0.0 for r in reports)
    table = format_table(reports)
    assert "busemann" in table and "tree" in table


def test_run_suite_rejects_unknown_checks():
    with pytest.raises(ValueError, match="unknown"):
        run_suite(SuiteConfig(spaces=["disk"], seed=0, checks=["triangle"]))


@pytest.mark.slow
def test_tree_suite_at_scale():
    for n_vertices in (10, 30, 50):
        config = SuiteConfig(
            spaces=[f"random-tree:{n_vertices}"],
            trials=100_000,
            seed=n_vertices,
            threads=4,
            checks=["cat0_midpoint", "busemann", "projection_lemma", "key_estimate", "wasserstein_contraction"],
        )
        assert all(r.violations == 0 for r in run_suite(config))


@pytest.mark.slow
def test_disk_suite_with_estimated_delta():
    config = SuiteConfig(spaces=["disk"], trials=100_000, seed=7, delta="estimate:1000000", threads=4)
    reports = run_suite(config)
    assert len(reports) == len(CHECKS)
    assert all(r.violations == 0 for r in reports)
