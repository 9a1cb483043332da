# Copyright (c) 2024-2025 Datalayer, Inc.
#
# BSD 3-Clause License

"""Hyperbolic Barycenters."""

from hyperbolic_barycenters.__version__ import __version__
from hyperbolic_barycenters.errors import (
    ConvergenceError,
    HyperbolicBarycentersError,
    InvalidInputError,
    TheoremViolationError,
    TransportError,
)


__all__ = [
    "ConvergenceError",
    "HyperbolicBarycentersError",
    "InvalidInputError",
    "TheoremViolationError",
    "TransportError",
    "__version__",
]
