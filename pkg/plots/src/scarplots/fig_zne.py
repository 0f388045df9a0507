"""Zero-noise extrapolation panels: P1 vs proxy fidelity and vs fold factor.

Reads mitigation.csv and zne_fit.json. Left panel: log-log P1 against
proxy fidelity for the r=0 noise sweep with the power-law fit line and
its intercept. Right panel: P1 against the error multiplier 1+2r with
the linear fit extended to the zero-noise point.
"""
from __future__ import annotations

import os

import matplotlib.pyplot as plt
import numpy as np

from . import _render
from ._artifacts import SchemaError, read_csv, read_json

COLUMNS = ["p", "r", "trajectories", "shots", "proxy_fidelity", "P1", "stderr"]
FIT_KEYS = ["log_log", "linear"]


def render(args):
    csv_path = os.path.join(args.indir, "mitigation.csv")
    fit_path = os.path.join(args.indir, "zne_fit.json")
    _, columns = read_csv(csv_path, COLUMNS)
    fits = read_json(fit_path, FIT_KEYS)
    for key in FIT_KEYS:
        if not all(k in fits[key] for k in ("coefficients", "intercept", "stderr")):
            raise SchemaError(f"{fit_path!r}: incomplete {key} fit block")

    r = columns["r"].astype(float)
    noise_sweep = r == 0.0
    fold_sweep = np.ones(len(r), dtype=bool)
    # the fold sweep is the trailing block at fixed p (includes its r=0 row)
    p_fold = columns["p"][len(r) - 1]
    fold_sweep = columns["p"] == p_fold

    fig, (ax_ll, ax_lin) = plt.subplots(1, 2, figsize=None)

    f = columns["proxy_fidelity"][noise_sweep]
    p1 = columns["P1"][noise_sweep]
    ax_ll.errorbar(
        f, p1, yerr=columns["stderr"][noise_sweep], fmt="o", ms=4, capsize=2
    )
    a, b = fits["log_log"]["coefficients"]
    grid = np.linspace(min(f.min(), 0.9), 1.0, 64)
    ax_ll.plot(grid, np.exp(a) * grid**b, lw=1.2)
    ax_ll.plot([1.0], [fits["log_log"]["intercept"]], marker="*", ms=12)
    ax_ll.set_xscale("log")
    ax_ll.set_yscale("log")
    ax_ll.set_xlabel("proxy input fidelity")
    ax_ll.set_ylabel(r"$P_1$")
    ax_ll.set_title("power-law extrapolation")

    m = 1.0 + 2.0 * columns["r"][fold_sweep]
    p1f = columns["P1"][fold_sweep]
    ax_lin.errorbar(
        m, p1f, yerr=columns["stderr"][fold_sweep], fmt="s", ms=4, capsize=2
    )
    a_lin, b_lin = fits["linear"]["coefficients"]
    grid_m = np.linspace(0.0, m.max(), 32)
    ax_lin.plot(grid_m, a_lin + b_lin * grid_m, lw=1.2)
    ax_lin.errorbar(
        [0.0], [fits["linear"]["intercept"]], yerr=[fits["linear"]["stderr"]],
        fmt="*", ms=12, capsize=3,
    )
    ax_lin.set_xlabel("error multiplier 1+2r")
    ax_lin.set_ylabel(r"$P_1$")
    ax_lin.set_title("fold extrapolation")
    fig.tight_layout()
    return fig


def main(argv=None) -> int:
    return _render.run(__doc__, render, argv)


if __name__ == "__main__":
    raise SystemExit(main())
