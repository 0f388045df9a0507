"""Entropy-vs-energy scatter with marked states drawn as crosses.

Reads diagnostics.csv; every eigenstate becomes one dot colored by its
participation ratio, and rows with marked=true are overdrawn as crosses.
"""
from __future__ import annotations

import os

import matplotlib.pyplot as plt

from . import _render
from ._artifacts import SchemaError, as_bool, read_csv

BASE_COLUMNS = ["index", "energy", "entropy_nats", "pr", "sz_mean", "sz_var", "marked"]


def render(args):
    path = os.path.join(args.indir, "diagnostics.csv")
    # reference-overlap columns are optional and config-dependent; accept
    # any extension of the base schema that keeps the fixed prefix + marked
    metadata, columns = _read_diagnostics(path)
    energy = columns["energy"]
    entropy = columns["entropy_nats"]
    marked = as_bool(columns["marked"])

    fig, ax = plt.subplots()
    sc = ax.scatter(
        energy[~marked], entropy[~marked], s=14, c=columns["pr"][~marked],
        cmap="viridis", alpha=0.8, label="unmarked",
    )
    if marked.any():
        ax.scatter(
            energy[marked], entropy[marked], s=70, marker="x", c="crimson",
            linewidths=1.6, label="marked",
        )
    fig.colorbar(sc, ax=ax, label="participation ratio")
    ax.set_xlabel("energy")
    ax.set_ylabel("half-chain entropy (nats)")
    title = metadata.get("model", "spectrum diagnostics")
    ax.set_title(title)
    ax.legend(loc="best")
    fig.tight_layout()
    return fig


def _read_diagnostics(path):
    try:
        metadata, columns = read_csv(path, BASE_COLUMNS)
        return metadata, columns
    except SchemaError as exc:
        # retry against the actual header if it extends the base schema
        if "expected columns" not in str(exc):
            raise
    with open(path, newline="\n") as fh:
        header = None
        for line in fh:
            if not line.startswith("# "):
                header = line.rstrip("\n").split(",")
                break
    if (
        header
        and header[: len(BASE_COLUMNS) - 1] == BASE_COLUMNS[:-1]
        and header[-1] == "marked"
    ):
        return read_csv(path, header)
    raise SchemaError(
        f"{path!r}: header {header} does not extend {BASE_COLUMNS}"
    )


def main(argv=None) -> int:
    return _render.run(__doc__, render, argv)


if __name__ == "__main__":
    raise SystemExit(main())
