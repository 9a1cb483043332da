# Copyright (c) 2024-2025 Datalayer, Inc.
#
# BSD 3-Clause License

"""Exceptions raised by Hyperbolic Barycenters."""

from __future__ import annotations

from typing import Any


class HyperbolicBarycentersError(Exception):
    """Base class for all library errors."""


class InvalidInputError(HyperbolicBarycentersError, ValueError):
    """An operation precondition is not met (space mismatch, bad parameter, malformed file)."""


class TransportError(HyperbolicBarycentersError):
    """The exact transportation solver did not reach an optimal basis."""


class ConvergenceError(HyperbolicBarycentersError):
    """An iterative method stopped before meeting its tolerance."""

    def __init__(self, message: str, last_iterate: Any = None, iterations: int = 0) -> None:
        super().__init__(message)
        self.last_iterate = last_iterate
        self.iterations = iterations


class TheoremViolationError(HyperbolicBarycentersError):
    """A scheme run contradicted a proven estimate.

    The offending run is attached as ``record`` so it can be written out and replayed.
    """

    def __init__(self, message: str, record: Any = None) -> None:
        super().__init__(message)
        self.record = record
