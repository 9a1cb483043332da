# Copyright (c) 2024-2025 Datalayer, Inc.
#
# BSD 3-Clause License

"""Hyperbolic Barycenters CLI."""
