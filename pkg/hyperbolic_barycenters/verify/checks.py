# Copyright (c) 2024-2025 Datalayer, Inc.
#
# BSD 3-Clause License

"""Randomized instances and exact evaluation of each checked inequality.

A check is a pair of functions: ``sample`` draws an instance from a stream,
``evaluate`` turns an instance into ``(lhs, rhs)`` (or ``None`` when the
instance misses a hypothesis). Evaluation never draws randomness, so a
serialized instance replays to the same values.
"""

from __future__ import annotations

import math

from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import numpy as np

from hyperbolic_barycenters.barycenter.functional import (
    barycentric_diameter_bound,
    midpoint_v_bound,
    sample_barycentric_set,
    v_functional,
)
from hyperbolic_barycenters.barycenter.solvers import compute_barycenter
from hyperbolic_barycenters.hyperbolicity.tripod import SIDES, tripod_distance, tripod_map
from hyperbolic_barycenters.schemes.bounds import (
    projection_bound,
    theta,
    wasserstein_contraction_bound,
)
from hyperbolic_barycenters.schemes.proximal import (
    AugmentedPoint,
    dist_to_A,
    product_metric,
    proximal_sqdist,
)
from hyperbolic_barycenters.spaces.base import GeodesicSpace, PointRef, point_text
from hyperbolic_barycenters.transport.measure import DiscreteMeasure
from hyperbolic_barycenters.transport.wasserstein import moment, wasserstein
from hyperbolic_barycenters.utils import format_float


@dataclass
class SamplingOptions:
    """Instance distribution knobs."""

    radius: float = 3.0
    max_atoms: int = 8
    eps_max: float = 1.0
    tau_range: tuple[float, float] = (0.01, 10.0)
    rejection_tries: int = 200


@dataclass
class Instance:
    """Points, scalar parameters and measures of one trial."""

    points: dict[str, PointRef] = field(default_factory=dict)
    params: dict[str, float] = field(default_factory=dict)
    measures: dict[str, DiscreteMeasure] = field(default_factory=dict)

    def to_json(self) -> dict[str, Any]:
        return {
            "points": {k: point_text(p) for k, p in self.points.items()},
            "params": {k: float(v) for k, v in self.params.items()},
            "measures": {
                k: [[format_float(w), point_text(p)] for p, w in zip(m.support, m.weights)]
                for k, m in self.measures.items()
            },
        }

    @classmethod
    def from_json(cls, space: GeodesicSpace, data: dict[str, Any]) -> Instance:
        measures = {}
        for name, atoms in data.get("measures", {}).items():
            # weights were stored normalized; rebuilding without renormalizing keeps every bit
            measures[name] = DiscreteMeasure(
                tuple(space.parse_point(text) for _, text in atoms),
                tuple(float(w) for w, _ in atoms),
            )
        return cls(
            points={k: space.parse_point(v) for k, v in data.get("points", {}).items()},
            params={k: float(v) for k, v in data.get("params", {}).items()},
            measures=measures,
        )


Sample = Callable[[GeodesicSpace, np.random.Generator, SamplingOptions, float], Instance]

Evaluate = Callable[[GeodesicSpace, Instance, float], Optional[tuple[float, float]]]


@dataclass(frozen=True)
class Check:
    name: str
    stream: int
    sample: Sample
    evaluate: Evaluate


def _points(space: GeodesicSpace, rng: np.random.Generator, opts: SamplingOptions, *names: str) -> dict[str, PointRef]:
    return dict(zip(names, space.sample(rng, len(names), opts.radius)))


def _epsilon(rng: np.random.Generator, opts: SamplingOptions) -> float:
    # a quarter of the trials sample the exact barycentric set
    if rng.random() < 0.25:
        return 0.0
    return float(rng.uniform(0.0, opts.eps_max))


def _measure(space: GeodesicSpace, rng: np.random.Generator, opts: SamplingOptions) -> DiscreteMeasure:
    n = int(rng.integers(1, opts.max_atoms + 1))
    support = space.sample(rng, n, opts.radius)
    weights = rng.dirichlet(np.ones(n))
    return DiscreteMeasure.create(support, np.maximum(weights, 1e-300))


def _member(
    space: GeodesicSpace,
    mu: DiscreteMeasure,
    epsilon: float,
    rng: np.random.Generator,
    opts: SamplingOptions,
    delta: float,
) -> tuple[PointRef, float]:
    """A member of the barycentric set and the level it is certified at."""
    result = compute_barycenter(space, mu)
    level = epsilon + max(0.0, result.value - result.v_inf_estimate)
    found = sample_barycentric_set(
        space,
        mu,
        result.point,
        level,
        result.v_inf_estimate,
        rng,
        1,
        delta=delta,
        max_tries=opts.rejection_tries,
    )
    return (found[0] if found else result.point), level


# -- comparison inequalities ---------------------------------------------------


def _sample_triangle(
    space: GeodesicSpace, rng: np.random.Generator, opts: SamplingOptions, delta: float
) -> Instance:
    return Instance(points=_points(space, rng, opts, "x", "y", "z"), params={"t": float(rng.random())})


def _evaluate_cat0_midpoint(space: GeodesicSpace, inst: Instance, delta: float) -> tuple[float, float]:
    x, y, z = inst.points["x"], inst.points["y"], inst.points["z"]
    w = space.geodesic_point(x, y, 0.5)
    dzx, dzy, dxy = space.distance(z, x), space.distance(z, y), space.distance(x, y)
    lhs = space.distance(z, w) ** 2
    rhs = 0.5 * dzx**2 + 0.5 * dzy**2 - 0.25 * dxy**2 + 2.0 * delta * (dzx + dzy) + 4.0 * delta**2
    return lhs, rhs


def _evaluate_cat0_general(space: GeodesicSpace, inst: Instance, delta: float) -> tuple[float, float]:
    x, y, z = inst.points["x"], inst.points["y"], inst.points["z"]
    t = inst.params["t"]
    dzx, dzy, dxy = space.distance(z, x), space.distance(z, y), space.distance(x, y)
    lhs = space.distance(z, space.geodesic_point(x, y, t)) ** 2
    rhs = (
        (1.0 - t) * dzx**2
        + t * dzy**2
        - (1.0 - t) * t * dxy**2
        + 4.0 * delta * max(dzx, dzy)
        + 4.0 * delta**2
    )
    return lhs, rhs


def _sample_busemann(
    space: GeodesicSpace, rng: np.random.Generator, opts: SamplingOptions, delta: float
) -> Instance:
    return Instance(
        points=_points(space, rng, opts, "x", "y", "p", "q"), params={"t": float(rng.random())}
    )


def _evaluate_busemann(space: GeodesicSpace, inst: Instance, delta: float) -> tuple[float, float]:
    x, y, p, q = (inst.points[k] for k in ("x", "y", "p", "q"))
    t = inst.params["t"]
    lhs = space.distance(space.geodesic_point(x, p, t), space.geodesic_point(y, q, t))
    rhs = (1.0 - t) * space.distance(x, y) + t * space.distance(p, q) + 8.0 * delta
    return lhs, rhs


def _sample_key_estimate(
    space: GeodesicSpace, rng: np.random.Generator, opts: SamplingOptions, delta: float
) -> Instance:
    low, high = opts.tau_range
    tau = float(10.0 ** rng.uniform(math.log10(low), math.log10(high)))
    return Instance(points=_points(space, rng, opts, "w", "x", "z"), params={"tau": tau})


def _evaluate_key_estimate(space: GeodesicSpace, inst: Instance, delta: float) -> tuple[float, float]:
    w, x, z = inst.points["w"], inst.points["x"], inst.points["z"]
    tau = inst.params["tau"]
    y = proximal_sqdist(space, z, x, tau)
    dzw, dwy, dzy = space.distance(z, w), space.distance(w, y), space.distance(z, y)
    Theta = theta(dzw, dwy, dzy, tau, delta)
    lhs = dwy**2
    rhs = space.distance(w, x) ** 2 - 2.0 * tau * (dzy**2 - dzw**2) + Theta * tau * delta
    return lhs, rhs


# -- the set A and the projection estimate ---------------------------------------


def _sample_projection(
    space: GeodesicSpace, rng: np.random.Generator, opts: SamplingOptions, delta: float
) -> Instance:
    points = _points(space, rng, opts, "x", "y", "p", "q")
    span = space.distance(points["x"], points["y"]) - 8.0 * delta
    # r in [0, d(x, y) - 8 delta) keeps (x, y, r) at distance >= 8 delta / sqrt(3) from A
    r = float(rng.uniform(0.0, span)) if span > 0 else -1.0
    return Instance(points=points, params={"r": r})


def _evaluate_projection(space: GeodesicSpace, inst: Instance, delta: float) -> tuple[float, float] | None:
    x, y, p, q = (inst.points[k] for k in ("x", "y", "p", "q"))
    r = inst.params["r"]
    if r < 0:
        return None
    a = AugmentedPoint(x, y, r)
    distance, projection = dist_to_A(space, a)
    if distance == 0.0 or distance * math.sqrt(3.0) < 8.0 * delta:
        return None
    target = AugmentedPoint(p, q, space.distance(p, q))
    D1 = space.diameter([x, y, p, q])
    lhs = product_metric(space, projection, target) ** 2
    rhs = product_metric(space, a, target) ** 2 - distance**2 + projection_bound(D1, delta)
    return lhs, rhs


# -- barycentric sets ------------------------------------------------------------


def _sample_contraction(
    space: GeodesicSpace, rng: np.random.Generator, opts: SamplingOptions, delta: float
) -> Instance:
    mu, nu = _measure(space, rng, opts), _measure(space, rng, opts)
    x, level1 = _member(space, mu, _epsilon(rng, opts), rng, opts, delta)
    y, level2 = _member(space, nu, _epsilon(rng, opts), rng, opts, delta)
    return Instance(
        points={"x": x, "y": y},
        params={"epsilon1": level1, "epsilon2": level2},
        measures={"mu": mu, "nu": nu},
    )


def _evaluate_contraction(space: GeodesicSpace, inst: Instance, delta: float) -> tuple[float, float]:
    x, y = inst.points["x"], inst.points["y"]
    mu, nu = inst.measures["mu"], inst.measures["nu"]
    w1, _ = wasserstein(space, 1, mu, nu)
    D2 = space.diameter([x, y, *mu.support, *nu.support])
    rhs = wasserstein_contraction_bound(
        w1, D2, delta, inst.params["epsilon1"], inst.params["epsilon2"]
    )
    return space.distance(x, y), rhs


def _sample_variance(
    space: GeodesicSpace, rng: np.random.Generator, opts: SamplingOptions, delta: float
) -> Instance:
    mu = _measure(space, rng, opts)
    x, level1 = _member(space, mu, _epsilon(rng, opts), rng, opts, delta)
    y, level2 = _member(space, mu, _epsilon(rng, opts), rng, opts, delta)
    return Instance(
        points={"x": x, "y": y},
        params={"epsilon1": level1, "epsilon2": level2},
        measures={"mu": mu},
    )


def _evaluate_variance(space: GeodesicSpace, inst: Instance, delta: float) -> tuple[float, float]:
    x, y, mu = inst.points["x"], inst.points["y"], inst.measures["mu"]
    rhs = barycentric_diameter_bound(
        moment(space, mu, x, 1),
        moment(space, mu, y, 1),
        delta,
        inst.params["epsilon1"],
        inst.params["epsilon2"],
    )
    return space.distance(x, y), rhs


def _sample_midpoint_variance(
    space: GeodesicSpace, rng: np.random.Generator, opts: SamplingOptions, delta: float
) -> Instance:
    return Instance(
        points=_points(space, rng, opts, "x", "y"), measures={"mu": _measure(space, rng, opts)}
    )


def _evaluate_midpoint_variance(space: GeodesicSpace, inst: Instance, delta: float) -> tuple[float, float]:
    x, y, mu = inst.points["x"], inst.points["y"], inst.measures["mu"]
    w = space.geodesic_point(x, y, 0.5)
    return v_functional(space, mu, w), midpoint_v_bound(space, mu, x, y, delta)


# -- tripods ---------------------------------------------------------------------


def _sample_tripod(
    space: GeodesicSpace, rng: np.random.Generator, opts: SamplingOptions, delta: float
) -> Instance:
    return Instance(
        points=_points(space, rng, opts, "x", "p", "q"),
        params={
            "side1": float(rng.integers(0, 3)),
            "side2": float(rng.integers(0, 3)),
            "t1": float(rng.random()),
            "t2": float(rng.random()),
        },
    )


def _evaluate_tripod(space: GeodesicSpace, inst: Instance, delta: float) -> tuple[float, float]:
    coords = tripod_map(space, inst.points["x"], inst.points["p"], inst.points["q"])
    images, points = [], []
    for side_key, t_key in (("side1", "t1"), ("side2", "t2")):
        side = SIDES[int(inst.params[side_key])]
        t = inst.params[t_key]
        a, b = coords.endpoints(side)
        points.append(space.geodesic_point(a, b, t))
        images.append(coords.image(side, t * coords.side_length(side)))
    return space.distance(points[0], points[1]), tripod_distance(images[0], images[1]) + 4.0 * delta


CHECKS: dict[str, Check] = {
    check.name: check
    for check in (
        Check("cat0_midpoint", 1, _sample_triangle, _evaluate_cat0_midpoint),
        Check("cat0_general", 2, _sample_triangle, _evaluate_cat0_general),
        Check("busemann", 3, _sample_busemann, _evaluate_busemann),
        Check("key_estimate", 4, _sample_key_estimate, _evaluate_key_estimate),
        Check("projection_lemma", 5, _sample_projection, _evaluate_projection),
        Check("wasserstein_contraction", 6, _sample_contraction, _evaluate_contraction),
        Check("variance_inequality", 7, _sample_variance, _evaluate_variance),
        Check("midpoint_variance", 8, _sample_midpoint_variance, _evaluate_midpoint_variance),
        Check("tripod", 9, _sample_tripod, _evaluate_tripod),
    )
}
