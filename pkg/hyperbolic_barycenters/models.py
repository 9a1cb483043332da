# Copyright (c) 2024-2025 Datalayer, Inc.
#
# BSD 3-Clause License

"""Result models shared by the library and the CLI.

Points are kept as ``PointRef`` objects in memory and serialize to the text
point syntax, so every JSON artifact re-parses to the exact same points.
"""

from __future__ import annotations

from typing import Annotated, Any, Dict, List, Optional

from pydantic import BaseModel, Field, PlainSerializer

from hyperbolic_barycenters.spaces.base import point_text


Point = Annotated[Any, PlainSerializer(point_text, return_type=str)]


class DeltaEstimate(BaseModel):
    """Four-point hyperbolicity estimate of a sampled region (a lower bound on delta)."""

    space: str
    delta_hat: float = Field(ge=0.0)
    quadruples_checked: int
    witness: List[Point]
    mode: str = Field(description="exhaustive-on-sample or randomized")
    budget: int
    seed: Optional[int] = None


class BarycenterResult(BaseModel):
    """A (near) minimizer of the variance functional of a measure.

    ``value`` and ``v_inf_estimate`` are values of the functional based at
    ``base_point``; ``objective`` is the mean squared distance at ``point``.
    """

    point: Point
    value: float
    method: str
    v_inf_estimate: float
    tolerance: float
    objective: float
    base_point: Point
    iterations: int = 0


class WassersteinResult(BaseModel):
    space: str
    order: int
    value: float
    coupling: List[List[float]]


class TrajectoryRecord(BaseModel):
    """One run of a proximal scheme together with the bounds it is checked against."""

    scheme: str
    seed: Optional[int] = None
    tau: float
    epsilon: float
    delta: float
    n: int = 1
    iterates: List[Point] = Field(default_factory=list)
    objective_values: List[float] = Field(default_factory=list)
    d2_to_reference: List[float] = Field(default_factory=list)
    k0: Optional[int] = None
    k0_bound: float = 0.0
    bound_rhs: float = 0.0
    d_omega: float = 0.0
    d_omega_exact: bool = True
    theta_omega: float = 0.0
    distance_at_k0: Optional[float] = None
    distance_bound: Optional[float] = None
    lyapunov_violations: int = 0
    giant_step_tau: Optional[float] = None
    violation: bool = False


class LLNSummary(BaseModel):
    """Monte Carlo estimate of the mean squared distance along the stochastic scheme."""

    seed: int
    replications: int
    steps: int
    tau: float
    epsilon: float
    delta: float
    estimates: List[float]
    standard_errors: List[float]
    min_index: int
    min_estimate: float
    min_standard_error: float
    bound_rhs: float
    d_omega: float
    d_omega_exact: bool
    theta_omega: float
    recursion_violations: int
    satisfied: bool


class EmpiricalLLNResult(BaseModel):
    seed: int
    k_max: int
    barycenters: List[Point]
    distances: List[float]
    w1_distances: List[float]
    bound: float
    support_diameter: float
    contraction_violations: int


class InequalityReport(BaseModel):
    """Outcome of one randomized inequality check.

    ``max_violation`` is the largest ``LHS - RHS`` seen (negative when every
    trial holds with room); ``witness`` replays that trial exactly.
    """

    inequality: str
    space: str
    trials: int
    violations: int
    skipped: int = 0
    max_violation: float
    mean_gap: float
    witness: Optional[Dict[str, Any]] = None
    delta_used: float
    seed: int
    tolerance: float
