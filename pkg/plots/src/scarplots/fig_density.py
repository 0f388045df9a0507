"""Broadened density curves of marked energies and their differences.

Reads density.csv (kind, x, density) as written by the classify command;
draws one panel per kind. The curves arrive precomputed — nothing is
broadened here.
"""
from __future__ import annotations

import os

import matplotlib.pyplot as plt

from . import _render
from ._artifacts import SchemaError, read_csv

COLUMNS = ["kind", "x", "density"]


def render(args):
    path = os.path.join(args.indir, "density.csv")
    _, columns = read_csv(path, COLUMNS)
    kinds = []
    for k in columns["kind"]:
        if k not in kinds:
            kinds.append(k)
    if not kinds:
        raise SchemaError(f"{path!r}: no density kinds present")

    fig, axes = plt.subplots(1, len(kinds), squeeze=False)
    for ax, kind in zip(axes[0], kinds):
        sel = columns["kind"] == kind
        ax.plot(columns["x"][sel], columns["density"][sel], lw=1.4)
        ax.fill_between(
            columns["x"][sel].astype(float),
            columns["density"][sel].astype(float),
            alpha=0.25,
        )
        ax.set_xlabel("energy" if kind == "energy" else "energy difference")
        ax.set_ylabel("density")
        ax.set_title(f"marked-state {kind} density")
    fig.tight_layout()
    return fig


def main(argv=None) -> int:
    return _render.run(__doc__, render, argv)


if __name__ == "__main__":
    raise SystemExit(main())
