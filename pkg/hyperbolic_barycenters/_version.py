# Copyright (c) 2024-2025 Datalayer, Inc.
#
# BSD 3-Clause License

__version__ = "0.1.0"
