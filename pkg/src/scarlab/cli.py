"""Command-line pipeline: config files in, CSV/JSON artifacts out.

Config files are flat key = value text with [section] headers. Unknown
sections or keys are rejected. All randomness derives from one root seed
through named streams, so artifacts are byte-identical across reruns.
Exit codes: 0 success, 2 config or user error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import configparser
import hashlib
import os
import sys

import numpy as np

from . import __version__, _io, _statevec, mitigation, models, qcnn, quasiparticle, spectra
from .dynamics import equal_superposition, revival_curve
from .errors import ConfigError, NumericalError, ScarlabError
from .hilbert import SectorConstraint, build_sector

_SCHEMA = {
    "spectrum": {
        "model": {"kind", "n", "lam", "delta", "j", "omega", "boundary",
                  "perturbation", "perturbation_strength", "j_even", "j_odd", "j_nnn"},
        "sector": {"kind", "n_dw", "n_up", "periodic"},
        "run": {"seed", "out", "threads"},
        "diagnostics": {"references", "cut"},
    },
    "train": {
        "model": {"kind", "n", "lam", "delta", "j", "omega", "boundary",
                  "perturbation", "perturbation_strength", "j_even", "j_odd", "j_nnn"},
        "sector": {"kind", "n_dw", "n_up", "periodic"},
        "run": {"seed", "out", "threads"},
        "architecture": {"n_l", "with_pre"},
        "training": {"d", "iterations", "learning_rate", "optimizer", "grad"},
    },
    "classify": {
        "model": {"kind", "n", "lam", "delta", "j", "omega", "boundary",
                  "perturbation", "perturbation_strength", "j_even", "j_odd", "j_nnn"},
        "sector": {"kind", "n_dw", "n_up", "periodic"},
        "run": {"seed", "out", "threads"},
        "classify": {"model_file", "broadening"},
    },
    "revival": {
        "model": {"kind", "n", "lam", "delta", "j", "omega", "boundary",
                  "perturbation", "perturbation_strength", "j_even", "j_odd", "j_nnn"},
        "sector": {"kind", "n_dw", "n_up", "periodic"},
        "run": {"seed", "out", "threads"},
        "revival": {"t_max", "steps", "series"},
    },
    "quasiparticle": {
        "run": {"seed", "out", "threads"},
        "quasiparticle": {"kind", "branches", "lam", "delta", "k_points", "n_sites"},
        "ksubspace": {"n", "omega"},
    },
    "mitigate": {
        "run": {"seed", "out", "threads"},
        "mitigate": {"model_file", "n", "p_values", "r_values", "trajectories", "shots"},
    },
}


def named_seed(root: int, name: str) -> int:
    digest = hashlib.sha256(f"{root}:{name}".encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def load_config(path: str, command: str) -> configparser.ConfigParser:
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config: {exc}") from exc
    schema = _SCHEMA[command]
    for section in parser.sections():
        if section not in schema:
            raise ConfigError(f"unknown section [{section}]")
        for key in parser[section]:
            if key not in schema[section]:
                raise ConfigError(f"unknown key {key!r} in section [{section}]")
    return parser


def _get(cfg, section: str, key: str, cast, default=None, required: bool = False):
    if not cfg.has_section(section):
        if required:
            raise ConfigError(f"missing section [{section}]")
        return default
    if key not in cfg[section]:
        if required:
            raise ConfigError(f"missing key {key!r} in section [{section}]")
        return default
    raw = cfg[section][key]
    try:
        if cast is bool:
            return raw.strip().lower() in ("1", "true", "yes")
        return cast(raw)
    except ValueError as exc:
        raise ConfigError(f"bad value for {section}.{key}: {raw!r}") from exc


def build_model(cfg) -> tuple:
    """(SparseOp builder output, basis, params, metadata) from config."""
    if not cfg.has_section("model"):
        raise ConfigError("missing section [model]")
    kind = _get(cfg, "model", "kind", str, required=True)
    n = _get(cfg, "model", "n", int, required=True)
    sector = build_sector_constraint(cfg, n)
    if kind == "xorx":
        params = models.XorXParams(
            lam=_get(cfg, "model", "lam", float, 1.0),
            delta=_get(cfg, "model", "delta", float, 0.1),
            j=_get(cfg, "model", "j", float, 1.0),
            n=n,
        )
        op = models.build_xorx(params, sector)
    elif kind == "pxp":
        params = models.PXPParams(
            omega=_get(cfg, "model", "omega", float, 1.0),
            n=n,
            boundary=_get(cfg, "model", "boundary", str, "open"),
            perturbation=_get(cfg, "model", "perturbation", str, None),
            perturbation_strength=_get(cfg, "model", "perturbation_strength", float, 0.0),
        )
        op = models.build_pxp(params, sector)
    elif kind == "ssh":
        params = models.SSHParams(
            j_even=_get(cfg, "model", "j_even", float, 1.0),
            j_odd=_get(cfg, "model", "j_odd", float, 1.0),
            j_nnn=_get(cfg, "model", "j_nnn", float, 0.0),
            n=n,
        )
        op = models.build_ssh(params, sector)
    else:
        raise ConfigError(f"unknown model kind {kind!r}")
    return op, params


def build_sector_constraint(cfg, n: int) -> SectorConstraint:
    kind = _get(cfg, "sector", "kind", str, "full")
    if kind == "full":
        return SectorConstraint.full_space(n)
    if kind == "frozen":
        return SectorConstraint.frozen_boundary(n)
    if kind == "domain_wall":
        n_dw = _get(cfg, "sector", "n_dw", int, required=True)
        return SectorConstraint.domain_wall(n, n_dw)
    if kind == "blockade":
        periodic = _get(cfg, "sector", "periodic", bool, False)
        return SectorConstraint.rydberg_blockade(n, periodic=periodic)
    if kind == "magnetization":
        n_up = _get(cfg, "sector", "n_up", int, required=True)
        return SectorConstraint.magnetization(n, n_up)
    raise ConfigError(f"unknown sector kind {kind!r}")


def _common_metadata(cfg_text: str, seed: int) -> dict:
    return {
        "tool_version": __version__,
        "config_hash": _io.config_hash(cfg_text),
        "seed": seed,
    }


def _run_params(cfg, args) -> tuple[int, str]:
    seed = args.seed if args.seed is not None else _get(cfg, "run", "seed", int, 0)
    out = args.out if args.out is not None else _get(cfg, "run", "out", str, ".")
    return seed, out


def _diagonalize_model(cfg):
    op, params = build_model(cfg)
    eigs = spectra.diagonalize(op)
    return op, params, eigs


def cmd_spectrum(cfg, cfg_text: str, args) -> int:
    seed, out = _run_params(cfg, args)
    op, params, eigs = _diagonalize_model(cfg)
    refs = {}
    names = _get(cfg, "diagnostics", "references", str, "all_zero")
    for label in [s.strip() for s in names.split(",") if s.strip()]:
        refs[label] = models.reference_state(label, eigs.basis)
    cut = _get(cfg, "diagnostics", "cut", int, None)
    rows = spectra.diagnostics_table(eigs, references=refs, cut=cut)
    columns = list(rows[0].keys())
    meta = _common_metadata(cfg_text, seed)
    meta["model"] = type(params).__name__
    meta["sector"] = eigs.basis.constraint.describe()
    _io.write_csv(os.path.join(out, "diagnostics.csv"), meta, columns, rows)
    np.savez_compressed(
        os.path.join(out, "eigenset.npz"),
        configs=eigs.basis.configs,
        energies=eigs.energies,
        states=eigs.states,
    )
    return 0


def _scar_eigenindices(eigs, n: int) -> list[int]:
    """Eigenstate indices carrying the exact scar tower (by peak overlap)."""
    tower = models.scar_tower(n, eigs.basis)
    picks = []
    for scar in tower:
        ov = np.abs(eigs.states.conj().T @ scar.amplitudes) ** 2
        picks.append(int(np.argmax(ov)))
    return picks


def _train_from_config(cfg, seed: int):
    op, params, eigs = _diagonalize_model(cfg)
    n = params.n
    scar_idx = _scar_eigenindices(eigs, n)
    n_l = _get(cfg, "architecture", "n_l", int, 2)
    with_pre = _get(cfg, "architecture", "with_pre", bool, True)
    spec = qcnn.build_architecture(n, n_l, with_pre=with_pre)
    d = _get(cfg, "training", "d", int, 20)
    iterations = _get(cfg, "training", "iterations", int, 0)
    opt = qcnn.OptimizerConfig(
        method=_get(cfg, "training", "optimizer", str, "adam"),
        learning_rate=_get(cfg, "training", "learning_rate", float, 0.05),
        grad_method=_get(cfg, "training", "grad", str, "adjoint"),
    )
    theta0 = qcnn.init_params(spec, named_seed(seed, "init"))
    dataset = qcnn.make_dataset(eigs, scar_idx, d, named_seed(seed, "dataset"))
    theta, trace = qcnn.train(spec, lambda it: dataset, opt, iterations, theta0)
    return eigs, scar_idx, spec, theta, trace, opt, d, iterations


def cmd_train(cfg, cfg_text: str, args) -> int:
    seed, out = _run_params(cfg, args)
    eigs, scar_idx, spec, theta, trace, opt, d, iterations = _train_from_config(cfg, seed)
    meta = _common_metadata(cfg_text, seed)
    rows = [{"iteration": r.iteration, "loss": r.loss} for r in trace]
    _io.write_csv(
        os.path.join(out, "loss_trace.csv"), meta, ["iteration", "loss"], rows
    )
    training_meta = {
        "seed": seed,
        "dataset": {"size": d, "scar_indices": scar_idx},
        "iterations": iterations,
        "optimizer": opt.method,
        "learning_rate": opt.learning_rate,
        "final_loss": trace[-1].loss if trace else None,
        "trained": iterations > 0,
        "loss_trace": "loss_trace.csv",
        "config_hash": _io.config_hash(cfg_text),
    }
    _io.write_text_atomic(
        os.path.join(out, "model.json"),
        qcnn.serialize_model(spec, theta, training_meta) + "\n",
    )
    return 0


def _load_model(path: str) -> tuple[qcnn.CircuitSpec, np.ndarray, dict]:
    if not os.path.exists(path):
        raise ConfigError(f"model file not found: {path}")
    try:
        arch, theta, training = qcnn.deserialize_model(open(path).read())
    except (ValueError, KeyError) as exc:
        raise ConfigError(f"corrupt model file {path}: {exc}") from exc
    spec = qcnn.build_architecture(
        arch["n_data"], arch["n_l"], with_pre=arch["with_pre"],
        n_ancilla=arch["n_ancilla"],
    )
    if spec.n_slots != len(theta):
        raise ConfigError("model parameter count does not match its architecture")
    return spec, theta, training


def cmd_classify(cfg, cfg_text: str, args) -> int:
    seed, out = _run_params(cfg, args)
    model_file = _get(cfg, "classify", "model_file", str, required=True)
    spec, theta, training = _load_model(model_file)
    if not training.get("trained", False):
        raise ConfigError("model has not been trained; refusing to classify")
    op, params, eigs = _diagonalize_model(cfg)
    q, marked = qcnn.classify_spectrum(spec, theta, eigs)
    rows = [
        {"index": j, "energy": float(eigs.energies[j]), "q": float(q[j]),
         "marked": bool(marked[j])}
        for j in range(eigs.dim)
    ]
    meta = _common_metadata(cfg_text, seed)
    _io.write_csv(
        os.path.join(out, "classify.csv"), meta, ["index", "energy", "q", "marked"], rows
    )
    marked_e = eigs.energies[np.asarray(marked, dtype=bool)]
    if len(marked_e) >= 2:
        broadening = _get(cfg, "classify", "broadening", float, 0.1)
        dens = spectra.energy_tower_density(marked_e, broadening)
        drows = [
            {"kind": "energy", "x": float(x), "density": float(d)}
            for x, d in zip(dens["energy_grid"], dens["energy_density"])
        ] + [
            {"kind": "difference", "x": float(x), "density": float(d)}
            for x, d in zip(dens["difference_grid"], dens["difference_density"])
        ]
        _io.write_csv(
            os.path.join(out, "density.csv"), meta, ["kind", "x", "density"], drows
        )
    return 0


def cmd_revival(cfg, cfg_text: str, args) -> int:
    seed, out = _run_params(cfg, args)
    op, params, eigs = _diagonalize_model(cfg)
    t_max = _get(cfg, "revival", "t_max", float, 10.0)
    steps = _get(cfg, "revival", "steps", int, 200)
    series_spec = _get(cfg, "revival", "series", str, "scars")
    times = np.linspace(0.0, t_max, steps)
    rows = []
    rng = np.random.default_rng(named_seed(seed, "revival"))
    for label in [s.strip() for s in series_spec.split(",") if s.strip()]:
        if label == "scars":
            idx = np.array(_scar_eigenindices(eigs, params.n))
            psi0 = equal_superposition(eigs, idx)
        elif label.startswith("eig:"):
            psi0 = eigs.state(int(label.split(":", 1)[1]))
        elif label.startswith("thermal:"):
            count = int(label.split(":", 1)[1])
            scar_set = set(_scar_eigenindices(eigs, params.n))
            pool = [j for j in range(eigs.dim) if j not in scar_set]
            idx = rng.choice(pool, size=min(count, len(pool)), replace=False)
            psi0 = equal_superposition(eigs, np.sort(idx))
        else:
            raise ConfigError(f"unknown revival series {label!r}")
        curve = revival_curve(eigs, psi0, times)
        for t, f in zip(curve.times, curve.fidelity):
            rows.append({"t": float(t), "fidelity": float(f), "series": label})
    meta = _common_metadata(cfg_text, seed)
    _io.write_csv(os.path.join(out, "revival.csv"), meta, ["t", "fidelity", "series"], rows)
    return 0


def cmd_quasiparticle(cfg, cfg_text: str, args) -> int:
    seed, out = _run_params(cfg, args)
    meta = _common_metadata(cfg_text, seed)
    rows = []
    if cfg.has_section("quasiparticle"):
        kind = _get(cfg, "quasiparticle", "kind", str, required=True)
        branches = _get(cfg, "quasiparticle", "branches", str, required=True)
        lam = _get(cfg, "quasiparticle", "lam", float, 1.0)
        delta = _get(cfg, "quasiparticle", "delta", float, 1.0)
        k_points = _get(cfg, "quasiparticle", "k_points", int, 64)
        n_sites = _get(cfg, "quasiparticle", "n_sites", int, None)
        k_grid = np.linspace(-np.pi, np.pi, k_points)
        for branch in [b.strip() for b in branches.split(",") if b.strip()]:
            overlay = n_sites if kind != "single_domain_wall" else None
            curve = quasiparticle.dispersion(kind, branch, k_grid, lam, delta, n_sites=overlay)
            for i, k in enumerate(curve.k):
                rows.append({
                    "model": kind,
                    "branch": branch,
                    "k": float(k),
                    "E": float(curve.energy[i]),
                    "Sz": float(curve.sz[i]) if curve.sz is not None else "",
                })
        _io.write_csv(
            os.path.join(out, "dispersion.csv"), meta,
            ["model", "branch", "k", "E", "Sz"], rows,
        )
    if cfg.has_section("ksubspace"):
        n = _get(cfg, "ksubspace", "n", int, required=True)
        omega = _get(cfg, "ksubspace", "omega", float, 1.0)
        sub = quasiparticle.symmetric_subspace(n, omega=omega)
        op = models.build_pxp(
            models.PXPParams(omega=omega, n=n, boundary="periodic"),
            SectorConstraint.rydberg_blockade(n, periodic=True),
        )
        eigs = spectra.diagonalize(op)
        weights = np.array([sub.k_weight(eigs.state(j)) for j in range(eigs.dim)])
        median = float(np.median(weights))
        krows = [
            {"index": j, "k_weight": float(weights[j]), "quasimode": bool(weights[j] > median)}
            for j in range(eigs.dim)
        ]
        _io.write_csv(
            os.path.join(out, "ksubspace.csv"), meta,
            ["index", "k_weight", "quasimode"], krows,
        )
    if not rows and not cfg.has_section("ksubspace"):
        raise ConfigError("need a [quasiparticle] or [ksubspace] section")
    return 0


def cmd_mitigate(cfg, cfg_text: str, args) -> int:
    seed, out = _run_params(cfg, args)
    model_file = _get(cfg, "mitigate", "model_file", str, required=True)
    spec, theta, training = _load_model(model_file)
    if not training.get("trained", False):
        raise ConfigError("model has not been trained; refusing to mitigate")
    n = _get(cfg, "mitigate", "n", int, required=True)
    p_values = [float(s) for s in _get(cfg, "mitigate", "p_values", str, "0.005,0.01,0.02").split(",")]
    r_values = [int(s) for s in _get(cfg, "mitigate", "r_values", str, "0,1,2,3").split(",")]
    trajectories = _get(cfg, "mitigate", "trajectories", int, 200)
    shots = _get(cfg, "mitigate", "shots", int, 1000)
    ideal = mitigation.noiseless_output(mitigation.prep_s1_circuit(n))
    angles = qcnn._instance_angles(spec, theta)
    out_state = qcnn._run_ops(spec, angles, ideal[:, None])
    noiseless_q = float(_statevec.prob_bit_one(out_state, spec.readout, spec.n_qubits)[0])

    rows = []
    # proxy sweep at r=0 over p values, for the power-law fit
    proxy_x, proxy_y = [], []
    for i, p in enumerate(p_values):
        circ = mitigation.prep_s1_circuit(n, p=p, r=0)
        resp = mitigation.classifier_p1(
            circ, spec, theta, trajectories, shots, named_seed(seed, f"p{i}")
        )
        rows.append({"p": p, "r": 0, "trajectories": trajectories, "shots": shots,
                     "proxy_fidelity": resp.proxy_fidelity, "P1": resp.p1,
                     "stderr": resp.stderr})
        proxy_x.append(resp.proxy_fidelity)
        proxy_y.append(resp.p1)
    # fold sweep at the middle p, for the linear fit
    p_fold = p_values[len(p_values) // 2]
    fold_x, fold_y, fold_se = [], [], []
    for r in r_values:
        circ = mitigation.prep_s1_circuit(n, p=p_fold, r=r)
        resp = mitigation.classifier_p1(
            circ, spec, theta, trajectories, shots, named_seed(seed, f"r{r}")
        )
        rows.append({"p": p_fold, "r": r, "trajectories": trajectories, "shots": shots,
                     "proxy_fidelity": resp.proxy_fidelity, "P1": resp.p1,
                     "stderr": resp.stderr})
        fold_x.append(circ.error_multiplier)
        fold_y.append(resp.p1)
        fold_se.append(resp.stderr)
    meta = _common_metadata(cfg_text, seed)
    _io.write_csv(
        os.path.join(out, "mitigation.csv"), meta,
        ["p", "r", "trajectories", "shots", "proxy_fidelity", "P1", "stderr"], rows,
    )
    fit_ll = mitigation.zne_fit(np.array(proxy_x), np.array(proxy_y), "log_log")
    fit_lin = mitigation.zne_fit(
        np.array(fold_x, dtype=float), np.array(fold_y), "linear",
        stderrs=np.array(fold_se), baseline=0.5,
    )
    _io.write_json(os.path.join(out, "zne_fit.json"), {
        **meta,
        "log_log": fit_ll.describe(),
        "linear": fit_lin.describe(),
        "noiseless_q": noiseless_q,
    })
    return 0


_COMMANDS = {
    "spectrum": cmd_spectrum,
    "train": cmd_train,
    "classify": cmd_classify,
    "revival": cmd_revival,
    "quasiparticle": cmd_quasiparticle,
    "mitigate": cmd_mitigate,
}


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="scarlab")
    parser.add_argument("command", choices=sorted(_COMMANDS))
    parser.add_argument("--config", required=True)
    parser.add_argument("--out", default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--threads", type=int, default=None)
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config, args.command)
        with open(args.config) as fh:
            cfg_text = fh.read()
        return _COMMANDS[args.command](cfg, cfg_text, args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NumericalError, np.linalg.LinAlgError, AssertionError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    except ScarlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
