# Copyright (c) 2024-2025 Datalayer, Inc.
#
# BSD 3-Clause License

"""Discrete measures and exact optimal transport."""

from hyperbolic_barycenters.transport.measure import (
    Coupling,
    DiscreteMeasure,
    format_measure,
    load_measure,
    parse_measure,
)
from hyperbolic_barycenters.transport.wasserstein import (
    cost_matrix,
    moment,
    w2_variance,
    wasserstein,
)


__all__ = [
    "Coupling",
    "DiscreteMeasure",
    "cost_matrix",
    "format_measure",
    "load_measure",
    "moment",
    "parse_measure",
    "w2_variance",
    "wasserstein",
]
