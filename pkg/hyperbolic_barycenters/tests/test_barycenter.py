# Copyright (c) 2024-2025 Datalayer, Inc.
#
# BSD 3-Clause License

import math

import numpy as np
import pytest

from hyperbolic_barycenters.barycenter import (
    barycentric_diameter_bound,
    barycentric_membership,
    compute_barycenter,
    disk_barycenter,
    grid_barycenter,
    midpoint_v_bound,
    sample_barycentric_set,
    tree_barycenter,
    v_functional,
)
from hyperbolic_barycenters.errors import ConvergenceError, InvalidInputError
from hyperbolic_barycenters.spaces import (
    DiskPoint,
    EuclideanPlane,
    PlanePoint,
    PoincareDisk,
    TreePoint,
    parse_tree,
    random_tree,
)
from hyperbolic_barycenters.transport import DiscreteMeasure, w2_variance
from hyperbolic_barycenters.utils import rng_stream


@pytest.fixture
def segment():
    return parse_tree("edge c0 c1 1\nedge c1 c2 1\nedge c2 c3 1\nedge c3 c4 1\n")


def at(tree, k):
    return tree.vertex_point(f"c{k}")


def test_v_functional_examples(segment):
    mu = DiscreteMeasure.uniform([at(segment, 0), at(segment, 4)])
    assert v_functional(segment, mu, at(segment, 0)) == 0.0
    z = at(segment, 3)
    x = segment.edge_point(1, 0.5)
    dirac = DiscreteMeasure.dirac(z)
    expected = segment.distance(x, z) ** 2 - segment.distance(at(segment, 0), z) ** 2
    assert v_functional(segment, dirac, x, at(segment, 0)) == pytest.approx(expected)


def test_v_functional_base_change_is_constant():
    tree = random_tree(15, rng_stream(3, 0))
    rng = rng_stream(3, 1)
    mu = DiscreteMeasure.uniform(tree.sample(rng, 5))
    a, b = tree.sample(rng, 2)
    shifts = [
        v_functional(tree, mu, x, a) - v_functional(tree, mu, x, b) for x in tree.sample(rng, 200)
    ]
    assert max(shifts) - min(shifts) < 1e-9


def test_tree_barycenter_examples(segment):
    z = segment.edge_point(2, 0.3)
    assert tree_barycenter(segment, DiscreteMeasure.dirac(z)).point == z
    mu = DiscreteMeasure.uniform([at(segment, 0), at(segment, 4)])
    result = tree_barycenter(segment, mu)
    assert result.point == at(segment, 2)
    assert result.objective == pytest.approx(4.0)
    assert result.value == pytest.approx(-4.0)
    assert result.v_inf_estimate <= result.value


def test_star_barycenter_is_branch_vertex():
    star = parse_tree("edge o a 1\nedge o b 1\nedge o c 1\n")
    mu = DiscreteMeasure.uniform([star.vertex_point(v) for v in ("a", "b", "c")])
    result = tree_barycenter(star, mu)
    assert result.point == TreePoint(vertex="o")
    grid = [star.edge_point(e, s) for e in range(3) for s in np.linspace(0.0, 1.0, 10_001)]
    assert result.objective <= min(w2_variance(star, mu, g) for g in grid[::50]) + 1e-12


def dense_grid(tree, step=1e-3):
    points = [tree.vertex_point(v) for v in tree.vertices]
    for edge, (_, _, length) in enumerate(tree.edges):
        count = max(1, math.ceil(length / step))
        points.extend(tree.canonical_point(edge, s) for s in np.linspace(0.0, length, count + 1)[1:-1])
    return points


@pytest.mark.parametrize("seed", range(10))
def test_tree_barycenter_matches_grid_search(seed):
    tree = random_tree(10, rng_stream(seed, 0))
    rng = rng_stream(seed, 1)
    n = int(rng.integers(1, 7))
    mu = DiscreteMeasure.create(tree.sample(rng, n), rng.dirichlet(np.ones(n)))
    exact = tree_barycenter(tree, mu)
    grid = grid_barycenter(tree, mu, dense_grid(tree))
    assert exact.objective <= grid.objective + 1e-12
    assert grid.objective - exact.objective <= 1e-6
    assert tree.distance(exact.point, grid.point) <= 1e-3


@pytest.mark.slow
def test_tree_barycenter_matches_grid_search_at_scale():
    for seed in range(100):
        tree = random_tree(10, rng_stream(seed, 0))
        rng = rng_stream(seed, 1)
        n = int(rng.integers(1, 7))
        mu = DiscreteMeasure.create(tree.sample(rng, n), rng.dirichlet(np.ones(n)))
        exact = tree_barycenter(tree, mu)
        grid = grid_barycenter(tree, mu, dense_grid(tree))
        assert grid.objective - exact.objective <= 1e-6
        assert tree.distance(exact.point, grid.point) <= 1e-3


def test_disk_barycenter_examples():
    disk = PoincareDisk()
    z = DiskPoint(0.3, 0.4)
    result = disk_barycenter(disk, DiscreteMeasure.dirac(z))
    assert disk.distance(result.point, z) <= 1e-9
    z2 = DiskPoint(-0.6, 0.1)
    result = disk_barycenter(disk, DiscreteMeasure.uniform([z, z2]))
    assert disk.distance(result.point, disk.geodesic_point(z, z2, 0.5)) <= 1e-8


def test_disk_barycenter_respects_symmetry():
    disk = PoincareDisk()
    mu = DiscreteMeasure.uniform([DiskPoint(0.2, 0.5), DiskPoint(0.2, -0.5), DiskPoint(-0.7, 0.0)])
    result = compute_barycenter(disk, mu)
    assert result.method == "disk-descent"
    assert abs(result.point.y) <= 1e-9
    # reflecting the support across the axis fixes the barycenter
    mirrored = DiscreteMeasure.uniform([DiskPoint(p.x, -p.y) for p in mu.support])
    assert disk.distance(compute_barycenter(disk, mirrored).point, result.point) <= 1e-9


def test_disk_barycenter_beats_random_points():
    disk = PoincareDisk()
    rng = rng_stream(12, 0)
    mu = DiscreteMeasure.create(disk.sample(rng, 6), rng.dirichlet(np.ones(6)))
    result = disk_barycenter(disk, mu)
    others = [w2_variance(disk, mu, x) for x in disk.sample(rng, 500, radius=4.0)]
    assert result.objective <= min(others) + 1e-12


def test_disk_barycenter_iteration_cap():
    disk = PoincareDisk()
    mu = DiscreteMeasure.uniform([DiskPoint(0.9, 0.0), DiskPoint(-0.2, 0.8), DiskPoint(-0.5, -0.6)])
    with pytest.raises(ConvergenceError) as info:
        disk_barycenter(disk, mu, tol=1e-14, max_iter=0)
    assert info.value.last_iterate is not None


def test_euclidean_barycenter_is_weighted_mean():
    plane = EuclideanPlane()
    mu = DiscreteMeasure.create([PlanePoint(0.0, 0.0), PlanePoint(4.0, 2.0)], [0.25, 0.75])
    result = compute_barycenter(plane, mu)
    assert result.point == PlanePoint(3.0, 1.5)


def test_membership_gap_on_segment(segment):
    mu = DiscreteMeasure.uniform([at(segment, 0), at(segment, 4)])
    x = at(segment, 1)
    assert v_functional(segment, mu, x) == -3.0
    # the infimum -4 is attained at the midpoint
    assert not barycentric_membership(segment, mu, x, 0.9, -4.0)
    assert barycentric_membership(segment, mu, x, 1.0, -4.0)
    result = compute_barycenter(segment, mu)
    assert barycentric_membership(segment, mu, result.point, 0.0, result.v_inf_estimate + 1e-9)
    assert barycentric_membership(segment, mu, at(segment, 4), 1e6, result.v_inf_estimate)
    with pytest.raises(InvalidInputError):
        barycentric_membership(segment, mu, x, -1.0, -4.0)


def test_barycentric_diameter_bound_examples():
    assert barycentric_diameter_bound(3.0, 2.0, 0.0, 0.0, 0.0) == 0.0
    assert barycentric_diameter_bound(3.0, 2.0, 0.0, 1.0, 1.0) == pytest.approx(2.0)
    assert barycentric_diameter_bound(1.0, 1.0, 1.0, 0.0, 0.0) == pytest.approx(math.sqrt(32.0))
    with pytest.raises(InvalidInputError):
        barycentric_diameter_bound(1.0, 1.0, -0.1, 0.0, 0.0)


def test_midpoint_bound_holds_on_trees():
    tree = random_tree(20, rng_stream(14, 0))
    rng = rng_stream(14, 1)
    for _ in range(200):
        mu = DiscreteMeasure.uniform(tree.sample(rng, 4))
        x, y = tree.sample(rng, 2)
        w = tree.geodesic_point(x, y, 0.5)
        assert v_functional(tree, mu, w) <= midpoint_v_bound(tree, mu, x, y, 0.0) + 1e-9


def test_sampled_members_are_members():
    tree = random_tree(20, rng_stream(15, 0))
    rng = rng_stream(15, 1)
    mu = DiscreteMeasure.uniform(tree.sample(rng, 5))
    result = tree_barycenter(tree, mu)
    members = sample_barycentric_set(tree, mu, result.point, 0.5, result.v_inf_estimate, rng, 20)
    assert members
    for x in members:
        assert barycentric_membership(tree, mu, x, 0.5, result.v_inf_estimate)
        assert tree.distance(x, result.point) <= 1.0 + 1e-9


def test_disk_barycenter_on_random_measures():
    disk = PoincareDisk()
    for seed in range(120):
        rng = rng_stream(seed, 0)
        n = int(rng.integers(2, 9))
        mu = DiscreteMeasure.create(disk.sample(rng, n, 3.0), rng.dirichlet(np.ones(n)))
        result = compute_barycenter(disk, mu)
        g = sum(w * disk.log_map(result.point, z) for z, w in zip(mu.support, mu.weights))
        assert 2.0 * abs(g) <= result.tolerance + 1e-12
        assert result.tolerance <= 1e-8
        gap = result.value - result.v_inf_estimate
        assert gap >= 0.25 * result.tolerance**2
        # no nearby point beats the certified minimum
        for angle in np.linspace(0.0, 2.0 * math.pi, 8, endpoint=False):
            y = disk.exp_map(result.point, 1e-3 * complex(math.cos(angle), math.sin(angle)))
            assert w2_variance(disk, mu, y) >= result.objective - gap


def test_disk_barycenter_gap_follows_tolerance():
    disk = PoincareDisk()
    mu = DiscreteMeasure.uniform([DiskPoint(0.5, 0.1), DiskPoint(-0.4, 0.3), DiskPoint(0.0, -0.6)])
    result = disk_barycenter(disk, mu, tol=1e-4)
    assert result.tolerance <= 1e-4
    assert result.value - result.v_inf_estimate == pytest.approx(
        max(0.25 * result.tolerance**2, 1e-12 * max(1.0, result.objective)), rel=1e-6
    )
