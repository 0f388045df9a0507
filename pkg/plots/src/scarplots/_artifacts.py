"""Artifact readers with strict schema validation.

Readers return raw columns as numpy arrays; they never derive physical
quantities. A file that is missing, empty, or carries the wrong column
schema raises SchemaError, which the figure scripts translate to exit
code 2.
"""
from __future__ import annotations

import json

import numpy as np


class SchemaError(Exception):
    """Artifact does not match the expected schema."""


def read_csv(path: str, required_columns: list[str]) -> tuple[dict, dict[str, np.ndarray]]:
    """Read an artifact CSV (comment metadata, header row, LF endings).

    Returns (metadata, column arrays). String-valued columns stay as
    object arrays; numeric columns parse to float where possible.
    """
    metadata: dict = {}
    columns: list[str] = []
    rows: list[list[str]] = []
    try:
        with open(path, newline="\n") as fh:
            for line in fh:
                line = line.rstrip("\n")
                if line.startswith("# "):
                    key, _, value = line[2:].partition(" = ")
                    metadata[key] = value
                elif not columns:
                    columns = line.split(",")
                elif line:
                    rows.append(line.split(","))
    except OSError as exc:
        raise SchemaError(f"cannot read artifact {path!r}: {exc}") from exc
    if columns != required_columns:
        raise SchemaError(
            f"{path!r}: expected columns {required_columns}, found {columns or 'none'}"
        )
    if not rows:
        raise SchemaError(f"{path!r}: no data rows")
    if any(len(r) != len(columns) for r in rows):
        raise SchemaError(f"{path!r}: ragged rows")
    out: dict[str, np.ndarray] = {}
    for i, name in enumerate(columns):
        values = [r[i] for r in rows]
        try:
            out[name] = np.array([float(v) for v in values])
        except ValueError:
            out[name] = np.array(values, dtype=object)
    return metadata, out


def read_json(path: str, required_keys: list[str]) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read artifact {path!r}: {exc}") from exc
    missing = [k for k in required_keys if k not in doc]
    if missing:
        raise SchemaError(f"{path!r}: missing keys {missing}")
    return doc


def as_bool(column: np.ndarray) -> np.ndarray:
    """Parse a true/false string column."""
    if column.dtype != object:
        return column.astype(bool)
    lowered = [str(v).strip().lower() for v in column]
    bad = [v for v in lowered if v not in ("true", "false")]
    if bad:
        raise SchemaError(f"boolean column holds non-boolean values {bad[:3]}")
    return np.array([v == "true" for v in lowered])
