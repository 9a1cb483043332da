# Copyright (c) 2024-2025 Datalayer, Inc.
#
# BSD 3-Clause License

"""Closed-form constants and right-hand sides of the proximal and contraction estimates."""

from __future__ import annotations

import math

from hyperbolic_barycenters.errors import InvalidInputError


def _check_nonnegative(**values: float) -> None:
    for name, value in values.items():
        if not value >= 0:
            raise InvalidInputError(f"{name} must be >= 0, got {value}")


def _check_tau(tau: float) -> None:
    if not tau > 0:
        raise InvalidInputError(f"tau must be > 0, got {tau}")


def _inverse_step_factor(d: float, tau: float, delta: float) -> float:
    # min(1/tau, 2d/delta); the second branch is +inf at delta = 0
    if delta == 0.0:
        return 1.0 / tau
    return min(1.0 / tau, 2.0 * d / delta)


def theta(d_zw: float, d_wy: float, d_zy: float, tau: float, delta: float) -> float:
    """Constant of the one-step proximal estimate.

    ``max(8 d_zw + 8 delta, (4 d_wy + 8 tau d_zy) * min(1/tau, 2 d_zy / delta))``.
    """
    _check_tau(tau)
    _check_nonnegative(d_zw=d_zw, d_wy=d_wy, d_zy=d_zy, delta=delta)
    return max(
        8.0 * d_zw + 8.0 * delta,
        (4.0 * d_wy + 8.0 * tau * d_zy) * _inverse_step_factor(d_zy, tau, delta),
    )


def theta_omega(D: float, tau: float, delta: float) -> float:
    """``theta`` with every distance replaced by the diameter ``D`` of the region."""
    _check_tau(tau)
    _check_nonnegative(D=D, delta=delta)
    return max(
        8.0 * D + 8.0 * delta,
        (4.0 + 8.0 * tau) * D * _inverse_step_factor(D, tau, delta),
    )


def giant_step_tau(D: float, delta: float) -> float | None:
    """Step ``sqrt(delta / D)`` balancing the ``tau`` and ``delta`` terms.

    Defined for ``0 < delta <= D / 2``; ``None`` otherwise.
    """
    _check_nonnegative(D=D, delta=delta)
    if delta == 0.0 or D == 0.0 or delta > D / 2.0:
        return None
    return math.sqrt(delta / D)


def projection_bound(D1: float, delta: float) -> float:
    """Additive term ``18 D1 sqrt(D1 + delta) sqrt(delta)`` of the projection estimate."""
    _check_nonnegative(D1=D1, delta=delta)
    return 18.0 * D1 * math.sqrt(D1 + delta) * math.sqrt(delta)


def wasserstein_contraction_bound(
    W1: float, D2: float, delta: float, epsilon1: float = 0.0, epsilon2: float = 0.0
) -> float:
    """``W1 + max(8 delta, sqrt(54 D2 sqrt(D2 + delta) sqrt(delta) + 3 (eps1 + eps2)))``."""
    _check_nonnegative(W1=W1, D2=D2, delta=delta, epsilon1=epsilon1, epsilon2=epsilon2)
    inner = 54.0 * D2 * math.sqrt(D2 + delta) * math.sqrt(delta) + 3.0 * (epsilon1 + epsilon2)
    return W1 + max(8.0 * delta, math.sqrt(inner))


def empirical_lln_bound(support_diameter: float, delta: float) -> float:
    """Limit bound ``max(8 delta, sqrt(54 D sqrt(D + delta) sqrt(delta)))``, ``D = 3 diam``."""
    _check_nonnegative(support_diameter=support_diameter, delta=delta)
    D = 3.0 * support_diameter
    return max(8.0 * delta, math.sqrt(54.0 * D * math.sqrt(D + delta) * math.sqrt(delta)))


def nodice_threshold(f_p: float, n: int, D: float, tau: float, delta: float, epsilon: float) -> float:
    """``f(p) + n Theta delta / 2 + 2 n (n + 1) D**2 tau + epsilon``."""
    return (
        f_p
        + 0.5 * n * theta_omega(D, tau, delta) * delta
        + 2.0 * n * (n + 1) * D * D * tau
        + epsilon
    )


def nodice_distance_bound(n: int, D: float, tau: float, delta: float, epsilon: float) -> float:
    """Bound on ``d(p, y_{k0 n})`` at the cycle where the objective threshold is met."""
    Theta = theta_omega(D, tau, delta)
    return math.sqrt(
        (16.0 * D + Theta) * delta + 16.0 * delta**2 + 4.0 * (n + 1) * D * D * tau + 2.0 * epsilon / n
    )


def lln_bound(D: float, tau: float, delta: float, epsilon: float) -> float:
    """``8 D**2 tau + (Theta + 16 D + 16 delta) delta + epsilon``."""
    Theta = theta_omega(D, tau, delta)
    return 8.0 * D * D * tau + (Theta + 16.0 * D + 16.0 * delta) * delta + epsilon


def lln_step_bound(previous: float, D: float, tau: float, delta: float) -> float:
    """Expected one-step recursion ``(1 - tau) e_k + 8 D**2 tau**2 + (Theta + 16 D + 16 delta) delta tau``."""
    Theta = theta_omega(D, tau, delta)
    return (1.0 - tau) * previous + 8.0 * D * D * tau * tau + (Theta + 16.0 * D + 16.0 * delta) * delta * tau
