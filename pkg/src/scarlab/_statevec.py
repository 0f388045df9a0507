"""Minimal dense statevector engine shared by the classifier and the
noisy-circuit simulator.

States are arrays of shape (2**nq,) or (2**nq, batch); bit q of the flat
index is the state of qubit q.
"""
from __future__ import annotations

import numpy as np

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / np.sqrt(2.0)

_XX = np.kron(PAULI_X, PAULI_X)
_YY = np.kron(PAULI_Y, PAULI_Y)
_ZZ = np.kron(PAULI_Z, PAULI_Z)


def ry_matrix(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz_matrix(theta: float) -> np.ndarray:
    return np.array(
        [[np.exp(-0.5j * theta), 0.0], [0.0, np.exp(0.5j * theta)]], dtype=complex
    )


def _pair_rotation(theta: float, pauli_pair: np.ndarray) -> np.ndarray:
    return np.cos(theta / 2.0) * np.eye(4, dtype=complex) - 1j * np.sin(theta / 2.0) * pauli_pair


def rxx_matrix(theta: float) -> np.ndarray:
    return _pair_rotation(theta, _XX)


def ryy_matrix(theta: float) -> np.ndarray:
    return _pair_rotation(theta, _YY)


def rzz_matrix(theta: float) -> np.ndarray:
    return _pair_rotation(theta, _ZZ)


def _reshaped(state: np.ndarray, nq: int):
    batch = state.shape[1:] if state.ndim > 1 else ()
    return state.reshape((2,) * nq + batch)


def apply_1q(state: np.ndarray, u: np.ndarray, q: int, nq: int) -> np.ndarray:
    """Apply a 2x2 matrix to qubit q."""
    t = _reshaped(state, nq)
    ax = nq - 1 - q
    out = np.tensordot(u, t, axes=([1], [ax]))
    out = np.moveaxis(out, 0, ax)
    return np.ascontiguousarray(out).reshape(state.shape)


def apply_2q(state: np.ndarray, u: np.ndarray, qa: int, qb: int, nq: int) -> np.ndarray:
    """Apply a 4x4 matrix with local basis index 2*b_qa + b_qb."""
    t = _reshaped(state, nq)
    axa, axb = nq - 1 - qa, nq - 1 - qb
    out = np.tensordot(u.reshape(2, 2, 2, 2), t, axes=([2, 3], [axa, axb]))
    out = np.moveaxis(out, [0, 1], [axa, axb])
    return np.ascontiguousarray(out).reshape(state.shape)


def apply_cz(state: np.ndarray, qa: int, qb: int, nq: int) -> np.ndarray:
    out = state.copy()
    t = _reshaped(out, nq)
    idx = [slice(None)] * t.ndim
    idx[nq - 1 - qa] = 1
    idx[nq - 1 - qb] = 1
    t[tuple(idx)] *= -1.0
    return out


def apply_x(state: np.ndarray, q: int, nq: int) -> np.ndarray:
    t = _reshaped(state, nq)
    out = np.flip(t, axis=nq - 1 - q)
    return np.ascontiguousarray(out).reshape(state.shape)


def apply_pauli_z(state: np.ndarray, q: int, nq: int) -> np.ndarray:
    out = state.copy()
    t = _reshaped(out, nq)
    idx = [slice(None)] * t.ndim
    idx[nq - 1 - q] = 1
    t[tuple(idx)] *= -1.0
    return out


def apply_controlled(state: np.ndarray, u: np.ndarray, control: int, target: int, nq: int) -> np.ndarray:
    """Apply a 2x2 matrix to `target` where qubit `control` is |1>."""
    out = state.copy()
    t = _reshaped(out, nq)
    idx = [slice(None)] * t.ndim
    idx[nq - 1 - control] = 1
    sub = t[tuple(idx)]  # view with the control axis removed
    if target > control:
        ax = nq - 1 - target
    else:
        ax = nq - 2 - target  # one axis vanished above the target axis
    rot = np.tensordot(u, sub, axes=([1], [ax]))
    t[tuple(idx)] = np.moveaxis(rot, 0, ax)
    return out


def apply_cswap(state: np.ndarray, control: int, a: int, b: int, nq: int) -> np.ndarray:
    """Swap qubits a and b where `control` is |1>."""
    out = state.copy()
    t = _reshaped(out, nq)
    idx = [slice(None)] * t.ndim
    idx[nq - 1 - control] = 1
    sub = t[tuple(idx)]
    axes = []
    for q in (a, b):
        ax = nq - 1 - q
        if q < control:
            ax -= 1
        axes.append(ax)
    t[tuple(idx)] = np.swapaxes(sub, axes[0], axes[1])
    return out


def prob_bit_one(state: np.ndarray, q: int, nq: int) -> np.ndarray:
    """Marginal probability that qubit q is |1> (per batch column)."""
    probs = np.abs(state) ** 2
    t = _reshaped(probs, nq)
    idx = [slice(None)] * t.ndim
    idx[nq - 1 - q] = 1
    sub = t[tuple(idx)]
    axes = tuple(range(nq - 1))
    return sub.sum(axis=axes)
