"""Trace and summary persistence.

Traces are CSV files with a fixed column order. The first line is a comment
carrying the resolved run configuration as canonical JSON, so every
hyperparameter survives verbatim into the file. Floats are rendered with 17
significant digits, which round-trips float64 bit-exactly; replays therefore
produce byte-identical files apart from the wall_ms column.
"""

from __future__ import annotations

import json
import math
import os
from typing import Optional

from .optimizers import TraceRow

__all__ = [
    "TRACE_COLUMNS",
    "format_float",
    "read_summary",
    "read_trace",
    "subsample_rows",
    "write_summary",
    "write_trace",
]

TRACE_COLUMNS = (
    "iter",
    "loss",
    "gap",
    "sigma",
    "sigma_pert",
    "eps_sam_norm",
    "queries_cum",
    "cos_true",
    "wall_ms",
)

_CONFIG_PREFIX = "# config: "

# Keep every row for short runs; beyond this many iterations, thin the tail.
_DENSE_ROWS = 1000


def format_float(value: float) -> str:
    return f"{value:.17g}"


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    return format_float(float(value))


def _parse_cell(text: str) -> Optional[float]:
    return None if text == "" else float(text)


def subsample_rows(rows: list[TraceRow], iterations: int) -> list[TraceRow]:
    """Thin a trace for persistence: every row up to iteration 1000, then
    every ceil(T / 1000)-th row, with the final iteration always kept."""
    if iterations <= _DENSE_ROWS:
        return list(rows)
    stride = math.ceil(iterations / _DENSE_ROWS)
    kept = [
        row
        for row in rows
        if row.iter <= _DENSE_ROWS or row.iter % stride == 0 or row.iter == iterations
    ]
    return kept


def write_trace(path: str, rows: list[TraceRow], config: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_CONFIG_PREFIX + json.dumps(config, sort_keys=True) + "\n")
        fh.write(",".join(TRACE_COLUMNS) + "\n")
        for row in rows:
            fh.write(
                ",".join(
                    (
                        str(row.iter),
                        format_float(row.loss),
                        format_float(row.gap),
                        _cell(row.sigma),
                        _cell(row.sigma_pert),
                        _cell(row.eps_sam_norm),
                        str(row.queries_cum),
                        _cell(row.cos_true),
                        format_float(row.wall_ms),
                    )
                )
                + "\n"
            )


def read_trace(path: str) -> tuple[dict, list[TraceRow]]:
    """Parse a trace file back into (config, rows)."""
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline()
        if not first.startswith(_CONFIG_PREFIX):
            raise ValueError(f"{path}: missing config header line")
        config = json.loads(first[len(_CONFIG_PREFIX):])
        header = fh.readline().rstrip("\n")
        if header != ",".join(TRACE_COLUMNS):
            raise ValueError(
                f"{path}: unexpected columns {header!r}, expected {','.join(TRACE_COLUMNS)}"
            )
        rows = []
        for line in fh:
            parts = line.rstrip("\n").split(",")
            if len(parts) != len(TRACE_COLUMNS):
                raise ValueError(f"{path}: malformed row {line!r}")
            rows.append(
                TraceRow(
                    iter=int(parts[0]),
                    loss=float(parts[1]),
                    gap=float(parts[2]),
                    sigma=_parse_cell(parts[3]),
                    sigma_pert=_parse_cell(parts[4]),
                    eps_sam_norm=_parse_cell(parts[5]),
                    queries_cum=int(parts[6]),
                    cos_true=_parse_cell(parts[7]),
                    wall_ms=float(parts[8]),
                )
            )
    return config, rows


def write_summary(path: str, summary: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_summary(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def trace_filename(seed: int) -> str:
    return f"trace_seed{seed}.csv"


def ensure_dir(path: str) -> None:
    os.makedirs(path, exist_ok=True)
