# Copyright (c) 2024-2025 Datalayer, Inc.
#
# BSD 3-Clause License

"""JSON documents and CSV traces written by the CLI."""

from __future__ import annotations

import csv
import io
import json
import logging

from pathlib import Path
from typing import Any, Sequence

import typer

from pydantic import BaseModel

from hyperbolic_barycenters.cli.config import RunConfig
from hyperbolic_barycenters.utils import format_float


logger = logging.getLogger(__name__)


TRACE_COLUMNS = ("k", "objective", "d2_to_p", "bound_rhs")


def _plain(result: Any) -> Any:
    if isinstance(result, BaseModel):
        return result.model_dump(mode="json")
    if isinstance(result, (list, tuple)):
        return [_plain(item) for item in result]
    return result


def document(command: str, config: RunConfig, delta: float | None, result: Any) -> dict[str, Any]:
    """Result wrapped with the resolved configuration and the delta it used."""
    return {
        "command": command,
        "config": config.to_dict(),
        "delta_used": delta,
        "result": _plain(result),
    }


def dumps(doc: dict[str, Any]) -> str:
    return json.dumps(doc, indent=2, allow_nan=False)


def emit(doc: dict[str, Any], config: RunConfig, suffix: str = "summary") -> None:
    """Print ``doc`` on stdout and, with an output prefix, write ``<prefix>_<suffix>.json``."""
    text = dumps(doc)
    typer.echo(text)
    if config.output_prefix:
        path = Path(f"{config.output_prefix}_{suffix}.json")
        path.write_text(text + "\n")
        logger.info(f"Wrote {path}")


def write_trace(
    config: RunConfig,
    delta: float | None,
    rows: Sequence[Sequence[float]],
    extra_columns: Sequence[str] = (),
) -> Path | None:
    """Write ``<prefix>_trace.csv``: ``# `` config lines, a header, then one row per iteration."""
    if not config.output_prefix:
        return None
    buffer = io.StringIO()
    for line in config.config_lines():
        buffer.write(f"# {line}\n")
    buffer.write(f"# delta_used = {'' if delta is None else format_float(delta)}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow([*TRACE_COLUMNS, *extra_columns])
    for row in rows:
        k, *values = row
        writer.writerow([int(k), *(format_float(v) for v in values)])
    path = Path(f"{config.output_prefix}_trace.csv")
    path.write_text(buffer.getvalue())
    logger.info(f"Wrote {path}")
    return path
