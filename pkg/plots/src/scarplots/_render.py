"""Shared CLI plumbing and styling for the figure scripts.

Every script takes --in (artifact directory or explicit file paths),
--out (output path stem), --style (named preset) and writes both PNG and
SVG. Schema problems exit 2; success exits 0.
"""
from __future__ import annotations

import argparse
import os
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from ._artifacts import SchemaError  # noqa: E402

STYLES = {
    "default": {
        "figure.figsize": (6.0, 4.0),
        "figure.dpi": 130,
        "axes.grid": True,
        "grid.alpha": 0.3,
        "font.size": 10,
        "svg.hashsalt": "scarplots",
    },
    "print": {
        "figure.figsize": (5.0, 3.4),
        "figure.dpi": 300,
        "axes.grid": False,
        "font.size": 9,
        "font.family": "serif",
        "svg.hashsalt": "scarplots",
    },
    "talk": {
        "figure.figsize": (8.0, 5.0),
        "figure.dpi": 110,
        "axes.grid": True,
        "grid.alpha": 0.25,
        "font.size": 14,
        "svg.hashsalt": "scarplots",
    },
}


def make_parser(description: str) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description=description)
    parser.add_argument(
        "--in", dest="indir", required=True,
        help="directory holding the input artifact(s)",
    )
    parser.add_argument(
        "--out", required=True,
        help="output path stem; .png and .svg are appended",
    )
    parser.add_argument(
        "--style", default="default", choices=sorted(STYLES),
        help="styling preset",
    )
    return parser


def run(description: str, render, argv=None) -> int:
    """Parse flags, call render(args, axes-factory), save PNG and SVG.

    render receives (args,) and must return a matplotlib Figure.
    """
    args = make_parser(description).parse_args(argv)
    plt.rcParams.update(STYLES[args.style])
    try:
        fig = render(args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    stem = args.out
    os.makedirs(os.path.dirname(os.path.abspath(stem)), exist_ok=True)
    fig.savefig(stem + ".png", metadata={"Software": "scarplots"})
    fig.savefig(stem + ".svg", metadata={"Date": None})
    plt.close(fig)
    return 0
