# Copyright (c) 2024-2025 Datalayer, Inc.
#
# BSD 3-Clause License

"""Randomized numerical checks of the comparison, projection and contraction inequalities."""

from hyperbolic_barycenters.verify.checks import CHECKS, Instance, SamplingOptions
from hyperbolic_barycenters.verify.suite import (
    CHECK_TOLERANCE,
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


__all__ = [
    "CHECKS",
    "CHECK_TOLERANCE",
    "Instance",
    "SamplingOptions",
    "SuiteConfig",
    "check_busemann",
    "check_cat0_general",
    "check_cat0_midpoint",
    "check_key_estimate",
    "check_projection_lemma",
    "check_variance_inequality",
    "check_wasserstein_contraction",
    "format_table",
    "replay",
    "run_check",
    "run_suite",
]
