"""Golden artifact fixtures for the figure-script tests.

The artifacts are produced once per session by driving the scarlab CLI on a
small n=6 model, so the tests exercise exactly the files a real pipeline run
would hand to the plotting scripts.
"""
from __future__ import annotations

import pytest

from scarlab import cli

MODEL_CFG = """
[model]
kind = xorx
n = 6
lam = 1.0
delta = 0.1
j = 1.0

[sector]
kind = frozen

[run]
seed = 4
"""


def _write(path, text):
    path.write_text(text)
    return str(path)


@pytest.fixture(scope="session")
def golden(tmp_path_factory):
    """Directory with one of each CSV/JSON artifact the figure scripts read."""
    out = tmp_path_factory.mktemp("golden")

    cfg = _write(out / "spectrum.cfg", MODEL_CFG)
    assert cli.main(["spectrum", "--config", cfg, "--out", str(out)]) == 0

    cfg = _write(
        out / "train.cfg", MODEL_CFG + "\n[training]\nd = 8\niterations = 3\n"
    )
    assert cli.main(["train", "--config", cfg, "--out", str(out)]) == 0

    cfg = _write(
        out / "classify.cfg",
        MODEL_CFG + f"\n[classify]\nmodel_file = {out / 'model.json'}\n",
    )
    assert cli.main(["classify", "--config", cfg, "--out", str(out)]) == 0
    assert (out / "density.csv").exists()

    cfg = _write(
        out / "revival.cfg",
        MODEL_CFG + "\n[revival]\nt_max = 5.0\nsteps = 20\nseries = scars, eig:0\n",
    )
    assert cli.main(["revival", "--config", cfg, "--out", str(out)]) == 0

    cfg = _write(
        out / "quasiparticle.cfg",
        "[quasiparticle]\nkind = single_domain_wall\nbranches = minus, plus\n"
        "lam = 1.0\ndelta = 0.1\nk_points = 16\n",
    )
    assert cli.main(["quasiparticle", "--config", cfg, "--out", str(out)]) == 0

    cfg = _write(
        out / "mitigate.cfg",
        f"[run]\nseed = 4\n\n[mitigate]\nmodel_file = {out / 'model.json'}\nn = 6\n"
        "p_values = 0.005, 0.01, 0.02, 0.04\nr_values = 0, 1, 2, 3\n"
        "trajectories = 60\nshots = 400\n",
    )
    assert cli.main(["mitigate", "--config", cfg, "--out", str(out)]) == 0

    return out
