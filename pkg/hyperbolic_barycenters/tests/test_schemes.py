# Copyright (c) 2024-2025 Datalayer, Inc.
#
# BSD 3-Clause License

import math

import numpy as np
import pytest

from hyperbolic_barycenters.barycenter import compute_barycenter
from hyperbolic_barycenters.errors import InvalidInputError, TheoremViolationError
from hyperbolic_barycenters.schemes import (
    AugmentedPoint,
    SchemeConfig,
    dist_to_A,
    empirical_lln_bound,
    giant_step_tau,
    in_A,
    lln_bound,
    nodice_distance_bound,
    nodice_threshold,
    product_metric,
    projection_bound,
    proximal_sqdist,
    run_empirical_lln,
    run_lln,
    run_nodice,
    theta,
    theta_omega,
    wasserstein_contraction_bound,
)
from hyperbolic_barycenters.schemes import runs
from hyperbolic_barycenters.spaces import PoincareDisk, parse_tree, random_tree
from hyperbolic_barycenters.transport import DiscreteMeasure
from hyperbolic_barycenters.utils import rng_stream


@pytest.fixture
def segment():
    return parse_tree("edge c0 c1 1\nedge c1 c2 1\nedge c2 c3 1\nedge c3 c4 1\n")


def at(tree, k):
    return tree.vertex_point(f"c{k}")


def test_proximal_examples(segment):
    z, x = at(segment, 0), at(segment, 4)
    assert proximal_sqdist(segment, z, x, 0.5) == at(segment, 2)
    assert segment.distance(proximal_sqdist(segment, z, x, 1e9), z) < 1e-8
    y = proximal_sqdist(segment, z, at(segment, 3), 1.0)
    assert y == at(segment, 1)

    def objective(point):
        return segment.distance(z, point) ** 2 + segment.distance(at(segment, 3), point) ** 2 / 2.0

    assert objective(y) == pytest.approx(3.0)
    grid = [segment.geodesic_point(z, at(segment, 3), t) for t in np.linspace(0.0, 1.0, 201)]
    assert all(objective(y) <= objective(g) + 1e-12 for g in grid)
    with pytest.raises(InvalidInputError):
        proximal_sqdist(segment, z, x, 0.0)


def test_theta_examples():
    assert theta(1.0, 2.0, 1.0, 1.0, 0.0) == pytest.approx(16.0)
    assert theta(0.0, 0.0, 0.0, 1.0, 0.0) == 0.0
    assert theta(1.0, 2.0, 1.0, 1.0, 0.1) == pytest.approx(16.0)
    assert theta_omega(0.0, 1.0, 0.3) == pytest.approx(8 * 0.3)
    assert theta_omega(1.0, 1.0, 0.0) == pytest.approx(12.0)


@pytest.mark.parametrize("D", [0.5, 1.0, 3.0])
@pytest.mark.parametrize("tau", [0.01, 0.1, 1.0])
@pytest.mark.parametrize("delta", [0.0, 0.1, 0.25, 0.5, 1.0, 2.0])
def test_theta_omega_matches_direct_evaluation(D, tau, delta):
    factor = 1.0 / tau if delta == 0 else min(1.0 / tau, 2.0 * D / delta)
    expected = max(8.0 * D + 8.0 * delta, (4.0 * D + 8.0 * tau * D) * factor)
    assert theta_omega(D, tau, delta) == pytest.approx(expected)


def test_giant_step_tau():
    assert giant_step_tau(4.0, 1.0) == pytest.approx(0.5)
    assert giant_step_tau(4.0, 0.0) is None
    assert giant_step_tau(4.0, 3.0) is None


def test_closed_form_bounds():
    assert projection_bound(1.0, 0.0) == 0.0
    assert projection_bound(3.0, 1.0) == pytest.approx(18.0 * 3.0 * 2.0)
    assert wasserstein_contraction_bound(1.5, 2.0, 0.0) == pytest.approx(1.5)
    assert wasserstein_contraction_bound(1.5, 2.0, 0.0, 1.0, 2.0) == pytest.approx(4.5)
    assert empirical_lln_bound(1.0, 0.0) == 0.0
    assert lln_bound(1.0, 0.1, 0.0, 0.05) == pytest.approx(0.85)
    # with delta = 0 the cycle bound is f(p) + 2 n (n + 1) D**2 tau + eps
    assert nodice_threshold(2.0, 3, 1.0, 0.1, 0.0, 0.01) == pytest.approx(2.0 + 2.4 + 0.01)
    assert nodice_distance_bound(2, 1.0, 0.1, 0.0, 0.02) == pytest.approx(math.sqrt(1.2 + 0.02))


def test_product_metric_examples(segment):
    a = AugmentedPoint(at(segment, 0), at(segment, 1), 1.0)
    assert product_metric(segment, a, a) == 0.0
    assert product_metric(segment, a, AugmentedPoint(at(segment, 0), at(segment, 1), 4.0)) == 3.0
    b = AugmentedPoint(at(segment, 1), at(segment, 3), 3.0)
    c = AugmentedPoint(at(segment, 0), at(segment, 1), 1.0)
    assert product_metric(segment, b, c) == pytest.approx(3.0)
    with pytest.raises(InvalidInputError):
        AugmentedPoint(at(segment, 0), at(segment, 1), -1.0)


def test_dist_to_A_examples(segment):
    inside = AugmentedPoint(at(segment, 0), at(segment, 2), 2.5)
    assert in_A(segment, inside)
    assert dist_to_A(segment, inside) == (0.0, inside)
    outside = AugmentedPoint(at(segment, 0), at(segment, 3), 0.0)
    distance, projection = dist_to_A(segment, outside)
    assert distance == pytest.approx(math.sqrt(3.0))
    assert segment.distance(projection.x, at(segment, 1)) < 1e-12
    assert segment.distance(projection.y, at(segment, 2)) < 1e-12
    assert projection.r == pytest.approx(1.0)
    assert in_A(segment, projection)


@pytest.mark.parametrize("space_name", ["tree", "disk"])
def test_projection_is_nearest_point_of_A(space_name):
    space = random_tree(12, rng_stream(31, 0)) if space_name == "tree" else PoincareDisk()
    rng = rng_stream(31, 1)
    for _ in range(100):
        x, y = space.sample(rng, 2)
        a = AugmentedPoint(x, y, float(rng.uniform(0.0, space.distance(x, y))))
        distance, projection = dist_to_A(space, a)
        assert space.distance(projection.x, projection.y) == pytest.approx(projection.r, abs=1e-10)
        assert product_metric(space, a, projection) == pytest.approx(distance, abs=1e-10)
        for _ in range(200):
            p, q = space.sample(rng, 2)
            s = space.distance(p, q) + float(rng.exponential(0.5))
            assert product_metric(space, a, AugmentedPoint(p, q, s)) >= distance - 1e-9


def test_scheme_config_validation():
    with pytest.raises(InvalidInputError):
        SchemeConfig(tau=0.0, epsilon=0.1)
    with pytest.raises(InvalidInputError):
        SchemeConfig(tau=0.1, epsilon=0.0)
    with pytest.raises(InvalidInputError):
        SchemeConfig(tau=0.1, epsilon=0.1, delta=-1.0)
    with pytest.raises(InvalidInputError):
        SchemeConfig(tau=0.1, epsilon=0.1, threads=0)


def test_nodice_fixed_point(segment):
    z = at(segment, 2)
    reference = compute_barycenter(segment, DiscreteMeasure.dirac(z))
    record = run_nodice(segment, [z], z, SchemeConfig(tau=0.1, epsilon=0.01, seed=0), reference)
    assert record.k0 == 0
    assert all(y == z for y in record.iterates)
    assert not record.violation


def test_nodice_on_segment(segment):
    z_list = [at(segment, 0), at(segment, 4)]
    reference = compute_barycenter(segment, DiscreteMeasure.uniform(z_list))
    assert reference.point == at(segment, 2)
    cfg = SchemeConfig(tau=0.1, epsilon=0.01, seed=0)
    record = run_nodice(segment, z_list, at(segment, 0), cfg, reference)
    assert record.k0 is not None
    assert record.k0 < record.k0_bound == pytest.approx(2000.0)
    assert record.distance_at_k0 <= record.distance_bound
    assert record.lyapunov_violations == 0
    assert record.d_omega_exact
    assert len(record.objective_values) == len(record.d2_to_reference)


@pytest.mark.slow
def test_nodice_ten_points_on_random_tree():
    tree = random_tree(30, rng_stream(41, 0))
    z_list = tree.sample(rng_stream(41, 1), 10)
    reference = compute_barycenter(tree, DiscreteMeasure.uniform(z_list))
    cfg = SchemeConfig(tau=0.1, epsilon=0.01, seed=41)
    record = run_nodice(tree, z_list, z_list[0], cfg, reference)
    assert record.k0 is not None and record.k0 < record.k0_bound
    assert record.distance_at_k0 <= record.distance_bound


def test_lln_fixed_point(segment):
    z = at(segment, 1)
    mu = DiscreteMeasure.dirac(z)
    reference = compute_barycenter(segment, mu)
    summary, records = run_lln(segment, mu, z, SchemeConfig(tau=0.1, epsilon=0.05, seed=3), reference, 4)
    assert summary.estimates == [0.0] * summary.steps
    assert summary.satisfied
    assert len(records) == 4


def test_lln_is_thread_independent(segment):
    mu = DiscreteMeasure.uniform([at(segment, 0), at(segment, 4)])
    reference = compute_barycenter(segment, mu)
    common = dict(tau=0.1, epsilon=0.5, seed=5, max_steps=60)
    one, _ = run_lln(segment, mu, at(segment, 0), SchemeConfig(threads=1, **common), reference, 12)
    four, _ = run_lln(segment, mu, at(segment, 0), SchemeConfig(threads=4, **common), reference, 12)
    assert one.model_dump() == four.model_dump()


def test_lln_bound_on_segment(segment):
    mu = DiscreteMeasure.uniform([at(segment, 0), at(segment, 4)])
    reference = compute_barycenter(segment, mu)
    cfg = SchemeConfig(tau=0.1, epsilon=0.05, seed=8)
    summary, _ = run_lln(segment, mu, at(segment, 0), cfg, reference, 60)
    assert 799 <= summary.steps <= 801
    assert summary.satisfied
    assert summary.bound_rhs == pytest.approx(8.0 * summary.d_omega**2 * 0.1 + 0.05, rel=1e-9)


@pytest.mark.slow
def test_lln_acceptance_run():
    tree = random_tree(20, rng_stream(51, 0))
    mu = DiscreteMeasure.uniform(tree.sample(rng_stream(51, 1), 4))
    reference = compute_barycenter(tree, mu)
    cfg = SchemeConfig(tau=0.1, epsilon=0.05, seed=51, threads=4)
    summary, _ = run_lln(tree, mu, mu.support[0], cfg, reference, 500)
    assert summary.satisfied


def test_empirical_lln_dirac(segment):
    mu = DiscreteMeasure.dirac(at(segment, 3))
    reference = compute_barycenter(segment, mu)
    result = run_empirical_lln(segment, mu, 20, 1, reference)
    assert result.distances == [0.0] * 20
    assert all(b == at(segment, 3) for b in result.barycenters)


def test_empirical_lln_contracts_on_trees():
    tree = random_tree(25, rng_stream(61, 0))
    mu = DiscreteMeasure.uniform(tree.sample(rng_stream(61, 1), 5))
    reference = compute_barycenter(tree, mu)
    result = run_empirical_lln(tree, mu, 200, 61, reference)
    assert result.contraction_violations == 0
    assert result.bound == 0.0
    for d, w1 in zip(result.distances, result.w1_distances):
        assert d <= w1 + 1e-9


@pytest.mark.slow
def test_empirical_lln_distances_shrink():
    improved = 0
    for seed in range(50):
        tree = random_tree(25, rng_stream(seed, 0))
        mu = DiscreteMeasure.uniform(tree.sample(rng_stream(seed, 1), 5))
        reference = compute_barycenter(tree, mu)
        result = run_empirical_lln(tree, mu, 2000, seed, reference)
        assert result.contraction_violations == 0
        improved += result.distances[1999] < result.distances[19]
    assert improved >= 48


def test_lln_recursion_holds_on_trees(segment):
    mu = DiscreteMeasure.uniform([at(segment, 0), at(segment, 4)])
    reference = compute_barycenter(segment, mu)
    cfg = SchemeConfig(tau=0.1, epsilon=0.5, seed=12)
    summary, records = run_lln(segment, mu, at(segment, 0), cfg, reference, 40)
    assert summary.recursion_violations == 0
    assert all(r.bound_rhs == summary.bound_rhs for r in records)

    tree = random_tree(20, rng_stream(13, 0))
    mu = DiscreteMeasure.uniform(tree.sample(rng_stream(13, 1), 4))
    reference = compute_barycenter(tree, mu)
    summary, _ = run_lln(tree, mu, mu.support[0], SchemeConfig(tau=0.1, epsilon=0.5, seed=13), reference, 40)
    assert summary.recursion_violations == 0


def test_lln_standard_errors_shrink_with_replications(segment):
    mu = DiscreteMeasure.uniform([at(segment, 0), at(segment, 4)])
    reference = compute_barycenter(segment, mu)
    cfg = SchemeConfig(tau=0.1, epsilon=0.5, seed=21)
    small, _ = run_lln(segment, mu, at(segment, 0), cfg, reference, 200)
    large, _ = run_lln(segment, mu, at(segment, 0), cfg, reference, 400)
    assert small.standard_errors[0] == large.standard_errors[0] == 0.0
    ratios = [
        a / b for a, b in zip(small.standard_errors[1:], large.standard_errors[1:]) if a > 0 and b > 0
    ]
    assert ratios
    assert float(np.mean(ratios)) == pytest.approx(math.sqrt(2.0), rel=0.15)


def test_nodice_raises_when_no_cycle_meets_the_bound(segment, monkeypatch):
    monkeypatch.setattr(runs, "nodice_threshold", lambda *args: -1.0)
    z_list = [at(segment, 0), at(segment, 4)]
    reference = compute_barycenter(segment, DiscreteMeasure.uniform(z_list))
    cfg = SchemeConfig(tau=0.1, epsilon=0.5, seed=0)
    with pytest.raises(TheoremViolationError) as info:
        run_nodice(segment, z_list, at(segment, 0), cfg, reference)
    record = info.value.record
    assert record.violation
    assert record.k0 is None
    assert len(record.iterates) == math.ceil(record.k0_bound) + 1
