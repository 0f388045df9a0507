"""Dense exact diagonalization and per-eigenstate diagnostics."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BadCutError,
    NotSubsetError,
    SectorMismatchError,
    TooFewStatesError,
)
from .hilbert import DENSE_MAX_DIM, SectorBasis, SparseOp, StateVector

ENTROPY_CLIP = 1e-14
OVERLAP_NONZERO = 1e-12


@dataclass
class EigenSet:
    """Full spectrum of a Hermitian operator over a sector basis."""

    basis: SectorBasis
    energies: np.ndarray  # ascending
    states: np.ndarray  # column eigenvectors
    metadata: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.energies)

    def state(self, j: int) -> StateVector:
        return StateVector(self.basis, self.states[:, j])

    def residual_max(self, op: SparseOp) -> float:
        res = op.matrix @ self.states - self.states * self.energies[None, :]
        return float(np.abs(res).max())


def diagonalize(op: SparseOp, dense_max: int = DENSE_MAX_DIM) -> EigenSet:
    dense = op.to_dense(dense_max)
    energies, states = np.linalg.eigh(dense)
    return EigenSet(op.basis, energies, states, metadata=dict(op.metadata))


def half_chain_entropy(psi: StateVector, cut: int) -> float:
    """Von Neumann entropy (nats) of sites [0, cut) after zero-padding
    the sector state into the full 2^n tensor space."""
    n = psi.basis.n
    if not 0 < cut < n:
        raise BadCutError(f"cut={cut} outside (0, {n})")
    full = psi.embed_full()
    # index x = l + (r << cut): left block = low bits
    mat = full.reshape(1 << (n - cut), 1 << cut).T
    svals = np.linalg.svd(mat, compute_uv=False)
    probs = svals**2
    probs = probs[probs > ENTROPY_CLIP]
    return float(-np.sum(probs * np.log(probs)))


def participation_ratio(psi: StateVector) -> float:
    """Sum over the sector basis of |amplitude|^4."""
    return float(np.sum(np.abs(psi.amplitudes) ** 4))


def sz_stats(psi: StateVector, site_range: range | None = None) -> tuple[float, float]:
    """Mean and variance of the total z-magnetization over a site range.

    Defaults to the bulk sites 1..n-2 (paper sites 2..n-1).
    """
    n = psi.basis.n
    if site_range is None:
        site_range = range(1, n - 1)
    configs = psi.basis.configs
    mags = np.zeros(len(configs))
    for site in site_range:
        bit = (configs >> site) & 1
        mags += 2.0 * bit - 1.0
    probs = np.abs(psi.amplitudes) ** 2
    mean = float(np.sum(probs * mags))
    var = float(np.sum(probs * mags**2) - mean**2)
    return mean, max(var, 0.0)


def subspace_weight(psi: StateVector, subspace_configs: np.ndarray) -> float:
    """Total probability carried by a subset of sector configurations."""
    basis = psi.basis
    idx = []
    for bits in np.asarray(subspace_configs, dtype=np.int64):
        if int(bits) not in basis:
            raise NotSubsetError(f"config {int(bits):0{basis.n}b} outside the sector")
        idx.append(basis.index_of(int(bits)))
    if not idx:
        return 0.0
    return float(np.sum(np.abs(psi.amplitudes[idx]) ** 2))


def overlap_scan(eigs: EigenSet, ref: StateVector) -> np.ndarray:
    """Squared overlap of a reference state with every eigenstate."""
    if len(ref.amplitudes) != eigs.dim or not np.array_equal(
        ref.basis.configs, eigs.basis.configs
    ):
        raise SectorMismatchError("reference state lives over a different sector")
    return np.abs(eigs.states.conj().T @ ref.amplitudes) ** 2


def gaussian_density(values: np.ndarray, grid: np.ndarray, broadening: float) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    norm = 1.0 / (broadening * np.sqrt(2.0 * np.pi))
    diff = grid[:, None] - values[None, :]
    return norm * np.sum(np.exp(-0.5 * (diff / broadening) ** 2), axis=1)


def energy_tower_density(
    energies: np.ndarray,
    broadening: float,
    grid_points: int = 512,
    pad_sigmas: float = 4.0,
) -> dict:
    """Gaussian-broadened density of marked energies and of all pairwise
    energy differences (both signs, self-pairs included)."""
    energies = np.asarray(energies, dtype=float)
    if len(energies) < 2:
        raise TooFewStatesError("need at least 2 marked states")
    diffs = (energies[:, None] - energies[None, :]).ravel()
    pad = pad_sigmas * broadening
    e_grid = np.linspace(energies.min() - pad, energies.max() + pad, grid_points)
    d_grid = np.linspace(diffs.min() - pad, diffs.max() + pad, grid_points)
    return {
        "energy_grid": e_grid,
        "energy_density": gaussian_density(energies, e_grid, broadening),
        "difference_grid": d_grid,
        "difference_density": gaussian_density(diffs, d_grid, broadening),
    }


def diagnostics_table(
    eigs: EigenSet,
    references: dict[str, StateVector] | None = None,
    subspaces: dict[str, np.ndarray] | None = None,
    cut: int | None = None,
    site_range: range | None = None,
) -> list[dict]:
    """One diagnostics row per eigenstate, in ascending-energy order."""
    n = eigs.basis.n
    if cut is None:
        cut = n // 2
    overlap_cols = {
        label: overlap_scan(eigs, ref) for label, ref in (references or {}).items()
    }
    rows = []
    for j in range(eigs.dim):
        psi = eigs.state(j)
        mean, var = sz_stats(psi, site_range)
        row = {
            "index": j,
            "energy": float(eigs.energies[j]),
            "entropy_nats": half_chain_entropy(psi, cut),
            "pr": participation_ratio(psi),
            "sz_mean": mean,
            "sz_var": var,
        }
        for label, vals in overlap_cols.items():
            row[f"overlap_{label}"] = float(vals[j])
        for label, configs in (subspaces or {}).items():
            row[f"weight_{label}"] = subspace_weight(psi, configs)
        row["marked"] = False
        rows.append(row)
    return rows
