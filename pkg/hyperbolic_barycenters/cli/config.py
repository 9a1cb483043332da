# Copyright (c) 2024-2025 Datalayer, Inc.
#
# BSD 3-Clause License

"""Run configuration: traitlets traits fed by a key-value file and command-line flags."""

from __future__ import annotations

import logging

from pathlib import Path
from typing import Any

from traitlets import CFloat, CInt, TraitError, Unicode, validate
from traitlets.config import Config, Configurable

from hyperbolic_barycenters.errors import InvalidInputError


logger = logging.getLogger(__name__)


# Traits left out of the audit trail; they never change results.
UNRECORDED_TRAITS = ("threads", "output_prefix")


class RunConfig(Configurable):
    """Resolved parameters of one CLI invocation."""

    space = Unicode(
        "random-tree:32",
        config=True,
        help="Space: 'disk', 'plane', 'random-tree:<n>' or a tree file path.",
    )

    measure = Unicode(
        "",
        config=True,
        help="Measure file ('<weight> <point>' lines).",
    )

    measure2 = Unicode(
        "",
        config=True,
        help="Second measure file (wasserstein).",
    )

    y0 = Unicode(
        "",
        config=True,
        help="Starting point of a scheme; defaults to the center of the space.",
    )

    tau = CFloat(0.1, config=True, help="Proximal step size (> 0).")

    epsilon = CFloat(0.01, config=True, help="Accuracy target (> 0).")

    delta = Unicode(
        "0",
        config=True,
        help="Hyperbolicity constant: a non-negative number or 'estimate:<budget>'.",
    )

    safety_factor = CFloat(1.05, config=True, help="Multiplier applied to an estimated delta.")

    seed = CInt(None, allow_none=True, config=True, help="Random seed (required).")

    trials = CInt(10_000, config=True, help="Random instances per inequality (verify).")

    replications = CInt(100, config=True, help="Independent runs of the stochastic scheme.")

    k_max = CInt(2000, config=True, help="Largest empirical sample size (empirical-lln).")

    budget = CInt(1_000_000, config=True, help="Quadruples examined (estimate-delta).")

    radius = CFloat(3.0, config=True, help="Radius of the sampled ball (disk, plane).")

    order = CInt(2, config=True, help="Wasserstein order, 1 or 2.")

    max_cycles = CInt(10_000, config=True, help="Cap on no-dice cycles.")

    max_steps = CInt(100_000, config=True, help="Cap on stochastic scheme steps.")

    checks = Unicode(
        "",
        config=True,
        help="Comma-separated inequalities to verify; all when empty.",
    )

    threads = CInt(1, config=True, help="Worker threads; results do not depend on it.")

    output_prefix = Unicode(
        "",
        config=True,
        help="Write <prefix>_summary.json, <prefix>_trace.csv, <prefix>_report.json.",
    )

    @validate("tau", "epsilon", "radius", "safety_factor")
    def _positive(self, proposal: Any) -> float:
        value = proposal["value"]
        if not value > 0:
            raise TraitError(f"{proposal['trait'].name}: must be > 0, got {value}")
        return value

    @validate("trials", "replications", "k_max", "budget", "max_cycles", "max_steps", "threads")
    def _at_least_one(self, proposal: Any) -> int:
        value = proposal["value"]
        if value < 1:
            raise TraitError(f"{proposal['trait'].name}: must be >= 1, got {value}")
        return value

    @validate("order")
    def _order(self, proposal: Any) -> int:
        if proposal["value"] not in (1, 2):
            raise TraitError(f"order: must be 1 or 2, got {proposal['value']}")
        return proposal["value"]

    @validate("seed")
    def _seed(self, proposal: Any) -> int | None:
        value = proposal["value"]
        if value is not None and value < 0:
            raise TraitError(f"seed: must be >= 0, got {value}")
        return value

    def to_dict(self) -> dict[str, Any]:
        """Resolved values sorted by name, for the audit trail."""
        return {
            name: getattr(self, name)
            for name in self.trait_names(config=True)
            if name not in UNRECORDED_TRAITS
        }

    def config_lines(self) -> list[str]:
        return [f"{name} = {value}" for name, value in self.to_dict().items()]

    def require_seed(self) -> int:
        if self.seed is None:
            raise InvalidInputError("seed: required (pass --seed or set it in the config file)")
        return int(self.seed)

    def check_names(self) -> list[str]:
        return [name.strip() for name in self.checks.split(",") if name.strip()]


def parse_config_text(text: str, source: str = "config") -> dict[str, str]:
    """Parse ``key = value`` (or ``key value``) lines; ``#`` starts a comment."""
    known = set(RunConfig.class_trait_names(config=True))
    values: dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" in line:
            key, _, value = line.partition("=")
        else:
            key, _, value = line.partition(" ")
        key = key.strip().replace("-", "_")
        if key not in known:
            raise InvalidInputError(f"{source} line {number}: unknown key {key!r}")
        values[key] = value.strip()
    return values


def resolve_config(path: str | None, **overrides: Any) -> RunConfig:
    """Merge the file at ``path`` (if any) with ``overrides``; flags win.

    ``None`` overrides are flags the user did not pass.

    Raises:
        InvalidInputError: unreadable file, unknown key or a value failing validation.
    """
    section: dict[str, Any] = {}
    if path:
        file = Path(path)
        if not file.is_file():
            raise InvalidInputError(f"config: file {path!r} does not exist")
        section.update(parse_config_text(file.read_text(), source=str(file)))
        logger.info(f"Loaded run configuration from {file}")
    section.update({key: value for key, value in overrides.items() if value is not None})
    try:
        # traitlets validates on assignment; an unset seed stays None
        return RunConfig(config=Config({"RunConfig": section}))
    except TraitError as e:
        raise InvalidInputError(f"config: {e}") from e
