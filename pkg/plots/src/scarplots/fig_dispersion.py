"""Quasiparticle dispersion overlay: E(k) per branch, optional Sz twin axis.

Reads dispersion.csv (model, branch, k, E, Sz). Branches are drawn as
separate curves; when the Sz column is populated it goes on a twin axis
as a dashed overlay.
"""
from __future__ import annotations

import os

import matplotlib.pyplot as plt
import numpy as np

from . import _render
from ._artifacts import read_csv

COLUMNS = ["model", "branch", "k", "E", "Sz"]


def render(args):
    path = os.path.join(args.indir, "dispersion.csv")
    _, columns = read_csv(path, COLUMNS)
    labels = []
    for m, b in zip(columns["model"], columns["branch"]):
        if (m, b) not in labels:
            labels.append((m, b))

    fig, ax = plt.subplots()
    ax_sz = None
    for model, branch in labels:
        sel = (columns["model"] == model) & (columns["branch"] == branch)
        k = columns["k"][sel].astype(float)
        ax.plot(k, columns["E"][sel].astype(float), lw=1.5, label=f"{model}:{branch}")
        sz_raw = columns["Sz"][sel]
        sz = np.array([str(v) for v in sz_raw])
        if np.all(sz != ""):
            if ax_sz is None:
                ax_sz = ax.twinx()
                ax_sz.set_ylabel(r"bulk $\langle S_z\rangle$")
            ax_sz.plot(k, sz.astype(float), ls="--", lw=1.0, alpha=0.7)
    ax.set_xlabel("k")
    ax.set_ylabel("E(k)")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    return fig


def main(argv=None) -> int:
    return _render.run(__doc__, render, argv)


if __name__ == "__main__":
    raise SystemExit(main())
