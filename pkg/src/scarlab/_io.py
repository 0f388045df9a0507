"""Deterministic artifact writers.

All files are written atomically (temp file + rename) with a '#' metadata
header carrying the tool version, config hash and root seed, so reruns
with identical inputs are byte-identical. Floats are formatted with repr
for full round-trip precision.
"""
from __future__ import annotations

import hashlib
import json
import os
import tempfile


def fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def config_hash(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


def write_text_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(metadata: dict, columns: list[str], rows: list[dict]) -> str:
    lines = [f"# {key} = {fmt(metadata[key])}" for key in sorted(metadata)]
    lines.append(f"# schema = {','.join(columns)}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(fmt(row[c]) for c in columns))
    return "\n".join(lines) + "\n"


def write_csv(path: str, metadata: dict, columns: list[str], rows: list[dict]) -> None:
    write_text_atomic(path, csv_text(metadata, columns, rows))


def write_json(path: str, doc: dict) -> None:
    write_text_atomic(path, json.dumps(doc, indent=2, sort_keys=True) + "\n")


def read_csv(path: str) -> tuple[dict, list[str], list[dict]]:
    """Read back an artifact CSV: (metadata, columns, rows as strings)."""
    metadata: dict = {}
    columns: list[str] = []
    rows: list[dict] = []
    with open(path, newline="\n") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("# "):
                key, _, value = line[2:].partition(" = ")
                metadata[key] = value
            elif not columns:
                columns = line.split(",")
            elif line:
                rows.append(dict(zip(columns, line.split(","))))
    return metadata, columns, rows
