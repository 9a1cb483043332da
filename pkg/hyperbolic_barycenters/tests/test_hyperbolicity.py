# Copyright (c) 2024-2025 Datalayer, Inc.
#
# BSD 3-Clause License

import itertools

import pytest

from hypothesis import given, settings
from hypothesis import strategies as st

from hyperbolic_barycenters.errors import InvalidInputError
from hyperbolic_barycenters.hyperbolicity import (
    estimate_delta,
    four_point_defect,
    gromov_product,
    resolve_delta,
    tripod_distance,
    tripod_map,
)
from hyperbolic_barycenters.spaces import (
    EuclideanPlane,
    PlanePoint,
    PoincareDisk,
    parse_tree,
    random_tree,
)
from hyperbolic_barycenters.utils import rng_stream


@pytest.fixture
def tripod():
    return parse_tree("edge o x 1\nedge o y 2\nedge o z 3\n")


def test_gromov_product_on_tripod(tripod):
    x, y, z = (tripod.vertex_point(v) for v in ("x", "y", "z"))
    assert gromov_product(tripod, y, z, x) == pytest.approx(1.0)
    assert gromov_product(tripod, y, z, x) == pytest.approx(tripod.distance(x, tripod.vertex_point("o")))


def test_gromov_product_degenerate_cases(tripod):
    x, y, o = (tripod.vertex_point(v) for v in ("x", "y", "o"))
    # o lies on [x, y]
    assert gromov_product(tripod, x, y, o) == pytest.approx(0.0)
    assert gromov_product(tripod, x, x, y) == pytest.approx(tripod.distance(x, y))


def test_four_point_defect_is_nonpositive_on_trees():
    tree = random_tree(20, rng_stream(2, 0))
    points = tree.sample(rng_stream(2, 1), 40)
    for p, x, y, z in zip(*(iter(points),) * 4):
        assert four_point_defect(tree, p, x, y, z) <= 1e-12
    p, x, y = points[:3]
    assert four_point_defect(tree, p, p, x, y) <= 0.0


def test_four_point_defect_on_unit_square():
    plane = EuclideanPlane()
    corners = [PlanePoint(0.0, 0.0), PlanePoint(1.0, 0.0), PlanePoint(1.0, 1.0), PlanePoint(0.0, 1.0)]
    diagonal = 2.0**0.5

    def d(a, b):
        return diagonal if abs(a - b) == 2 else (0.0 if a == b else 1.0)

    def product(a, b, base):
        return 0.5 * (d(base, a) + d(base, b) - d(a, b))

    for p, x, y, z in itertools.permutations(range(4)):
        expected = min(product(x, y, p), product(y, z, p)) - product(x, z, p)
        got = four_point_defect(plane, corners[p], corners[x], corners[y], corners[z])
        assert got == pytest.approx(expected, abs=1e-12)


def test_estimate_delta_exhaustive_on_tree_is_zero():
    tree = random_tree(8, rng_stream(9, 0))
    marked = [tree.vertex_point(v) for v in tree.vertices]
    estimate = estimate_delta(tree, marked, quadruple_budget=8**4, seed=1)
    assert estimate.mode == "exhaustive-on-sample"
    assert estimate.quadruples_checked == 8**4
    assert estimate.delta_hat == 0.0


def test_estimate_delta_with_equal_points():
    plane = EuclideanPlane()
    points = [PlanePoint(0.5, 0.5)] * 3
    estimate = estimate_delta(plane, points, quadruple_budget=100, seed=0)
    assert estimate.delta_hat == 0.0
    assert len(estimate.witness) == 4


def test_estimate_delta_randomized_is_thread_independent():
    disk = PoincareDisk()

    def region(rng, n):
        return disk.sample(rng, n, 3.0)

    one = estimate_delta(disk, region, quadruple_budget=20_000, seed=7, threads=1, pool_size=256)
    four = estimate_delta(disk, region, quadruple_budget=20_000, seed=7, threads=4, pool_size=256)
    assert one.mode == "randomized"
    assert one.delta_hat > 0.0
    assert one.model_dump() == four.model_dump()
    p, x, y, z = one.witness
    assert four_point_defect(disk, p, x, y, z) == pytest.approx(one.delta_hat, abs=1e-12)


def test_estimate_delta_rejects_bad_input():
    plane = EuclideanPlane()
    with pytest.raises(InvalidInputError):
        estimate_delta(plane, [], quadruple_budget=10, seed=0)
    with pytest.raises(InvalidInputError):
        estimate_delta(plane, [plane.center()], quadruple_budget=0, seed=0)


def test_resolve_delta_policies():
    plane = EuclideanPlane()
    points = [PlanePoint(0.0, 0.0), PlanePoint(1.0, 0.0), PlanePoint(1.0, 1.0), PlanePoint(0.0, 1.0)]
    assert resolve_delta("0.35", plane, points, seed=0) == (0.35, None)
    delta, estimate = resolve_delta("estimate:256", plane, points, seed=0, safety_factor=2.0)
    assert estimate is not None
    assert delta == pytest.approx(2.0 * estimate.delta_hat)
    with pytest.raises(InvalidInputError):
        resolve_delta("-1", plane, points, seed=0)
    with pytest.raises(InvalidInputError):
        resolve_delta("lots", plane, points, seed=0)


def test_tripod_legs_add_up_to_sides():
    disk = PoincareDisk()
    rng = rng_stream(4, 0)
    for _ in range(200):
        x, p, q = disk.sample(rng, 3)
        coords = tripod_map(disk, x, p, q)
        assert coords.side_length("xp") == pytest.approx(disk.distance(x, p), abs=1e-10)
        assert coords.side_length("xq") == pytest.approx(disk.distance(x, q), abs=1e-10)
        assert coords.side_length("pq") == pytest.approx(disk.distance(p, q), abs=1e-10)


def test_tripod_of_degenerate_triangle(tripod):
    x, o, y = (tripod.vertex_point(v) for v in ("x", "o", "y"))
    coords = tripod_map(tripod, x, y, o)
    assert coords.leg("q") == pytest.approx(0.0)


def test_tripod_map_is_one_lipschitz_on_sides():
    disk = PoincareDisk()
    rng = rng_stream(6, 0)
    for _ in range(2_000):
        x, p, q = disk.sample(rng, 3)
        coords = tripod_map(disk, x, p, q)
        sides = rng.integers(0, 3, size=2)
        ts = rng.random(size=2)
        points, images = [], []
        for side_index, t in zip(sides, ts):
            side = ("xp", "xq", "pq")[int(side_index)]
            a, b = coords.endpoints(side)
            points.append(disk.geodesic_point(a, b, float(t)))
            images.append(coords.image(side, float(t) * coords.side_length(side)))
        assert tripod_distance(*images) <= disk.distance(*points) + 1e-10


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=2**32), st.sampled_from(["tree", "disk"]))
def test_four_point_defect_symmetries(seed, space_name):
    space = random_tree(15, rng_stream(seed, 0)) if space_name == "tree" else PoincareDisk()
    p, x, y, z = space.sample(rng_stream(seed, 1), 4)
    defect = four_point_defect(space, p, x, y, z)
    assert four_point_defect(space, p, z, y, x) == pytest.approx(defect, abs=1e-9)
    assert four_point_defect(space, y, x, p, z) == pytest.approx(defect, abs=1e-9)

    def d(a, b):
        return space.distance(a, b)

    sums = [d(x, z) + d(y, p), d(x, y) + d(z, p), d(y, z) + d(x, p)]
    assert defect == pytest.approx(0.5 * (sums[0] - max(sums[1], sums[2])), abs=1e-9)
    largest, second = sorted(sums, reverse=True)[:2]
    best = max(four_point_defect(space, *quad) for quad in itertools.permutations((p, x, y, z)))
    assert best == pytest.approx(0.5 * (largest - second), abs=1e-9)
