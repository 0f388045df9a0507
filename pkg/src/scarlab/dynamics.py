"""Unitary quench evolution and fidelity revival curves."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import SectorMismatchError
from .hilbert import StateVector
from .spectra import EigenSet


@dataclass
class RevivalCurve:
    times: np.ndarray
    fidelity: np.ndarray
    label: str = ""
    metadata: dict = field(default_factory=dict)


def _check_sector(eigs: EigenSet, psi0: StateVector) -> None:
    if len(psi0.amplitudes) != eigs.dim or not np.array_equal(
        psi0.basis.configs, eigs.basis.configs
    ):
        raise SectorMismatchError("initial state lives over a different sector")


def evolve(eigs: EigenSet, psi0: StateVector, t: float) -> StateVector:
    """Spectral propagator: psi_t = sum_j e^{-i E_j t} <v_j|psi0> v_j."""
    _check_sector(eigs, psi0)
    coeffs = eigs.states.conj().T @ psi0.amplitudes
    amps = eigs.states @ (np.exp(-1j * eigs.energies * t) * coeffs)
    return StateVector(psi0.basis, amps)


def revival_curve(
    eigs: EigenSet, psi0: StateVector, times: np.ndarray, label: str = ""
) -> RevivalCurve:
    """Fidelity |<psi0|psi_t>|^2 sampled on a time grid."""
    _check_sector(eigs, psi0)
    coeffs = eigs.states.conj().T @ psi0.amplitudes
    probs = np.abs(coeffs) ** 2
    times = np.asarray(times, dtype=float)
    phases = np.exp(-1j * np.outer(times, eigs.energies))
    fid = np.abs(phases @ probs.astype(np.complex128)) ** 2
    # |<psi0|psi_t>|^2 = |sum_j |c_j|^2 e^{-iE_j t}|^2
    return RevivalCurve(times, fid, label=label)


def equal_superposition(eigs: EigenSet, indices: np.ndarray) -> StateVector:
    """Uniform positive-real-coefficient superposition of eigenstates."""
    indices = np.asarray(indices, dtype=int)
    if len(indices) == 0:
        raise ValueError("need at least one eigenstate index")
    amps = eigs.states[:, indices].sum(axis=1) / np.sqrt(len(indices))
    return StateVector(eigs.basis, amps)
