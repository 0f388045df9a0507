"""Fidelity revival traces, one line per labeled series.

Reads revival.csv (t, fidelity, series) and draws every series on one
axis, mirroring the three-initial-state comparison layout.
"""
from __future__ import annotations

import os

import matplotlib.pyplot as plt

from . import _render
from ._artifacts import read_csv

COLUMNS = ["t", "fidelity", "series"]


def render(args):
    path = os.path.join(args.indir, "revival.csv")
    _, columns = read_csv(path, COLUMNS)
    series = []
    for s in columns["series"]:
        if s not in series:
            series.append(s)

    fig, ax = plt.subplots()
    for label in series:
        sel = columns["series"] == label
        ax.plot(
            columns["t"][sel].astype(float),
            columns["fidelity"][sel].astype(float),
            lw=1.3,
            label=str(label),
        )
    ax.set_xlabel("time")
    ax.set_ylabel("fidelity")
    ax.set_ylim(-0.02, 1.05)
    ax.legend(loc="best", title="initial state")
    fig.tight_layout()
    return fig


def main(argv=None) -> int:
    return _render.run(__doc__, render, argv)


if __name__ == "__main__":
    raise SystemExit(main())
