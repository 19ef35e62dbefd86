"""Reading the CLI's CSV files: comment-aware, schema-checked."""

from __future__ import annotations

import csv
from pathlib import Path


class SchemaError(ValueError):
    """The input file does not match the documented CSV schema."""


def read_table(path: Path) -> tuple[list[str], list[dict[str, str]]]:
    """Read a CSV with optional leading ``#`` comment lines.

    Returns the header row and the data rows as dicts keyed by column name.
    """
    with open(path, newline="") as handle:
        lines = [line for line in handle if line.strip() and not line.startswith("#")]
    if not lines:
        raise SchemaError(f"{path}: no header row")
    reader = csv.reader(lines)
    parsed = list(reader)
    header = parsed[0]
    rows = []
    for i, record in enumerate(parsed[1:], start=2):
        if len(record) != len(header):
            raise SchemaError(f"{path}: line {i} has {len(record)} fields, "
                              f"expected {len(header)}")
        rows.append(dict(zip(header, record)))
    return header, rows


def require_columns(header: list[str], needed: tuple[str, ...], kind: str) -> None:
    missing = [col for col in needed if col not in header]
    if missing:
        raise SchemaError(f"{kind} input is missing column(s): {', '.join(missing)}")


def require_rows(rows: list[dict[str, str]], kind: str) -> None:
    if not rows:
        raise SchemaError(f"{kind} input has no data rows")


def as_float(row: dict[str, str], column: str) -> float:
    try:
        return float(row[column])
    except ValueError:
        raise SchemaError(f"column {column!r} holds non-numeric value "
                          f"{row[column]!r}")
