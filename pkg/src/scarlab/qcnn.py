"""Enhanced convolutional quantum classifier.

Architecture: optional fixed-depth preprocessing block, then repeated
[convolution x n_l -> pooling] stages halving the kept qubits, ending in a
fully connected gate block on the survivors plus one ancilla padding qubit.
Convolution layers are brick-wall two-qubit gates sharing one parameter
block; pooled qubits receive no gates after their pooling gate and the
readout probability marginalizes over every non-readout qubit.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import _statevec as sv
from .errors import DimensionMismatchError, EmptyBatchError, NoScarsError
from .hilbert import StateVector
from .spectra import EigenSet

GATE_GENERATORS = ("ry", "rz", "rxx", "ryy", "rzz")
FIXED_GATES = ("cz",)

_MATRIX = {
    "ry": sv.ry_matrix,
    "rz": sv.rz_matrix,
    "rxx": sv.rxx_matrix,
    "ryy": sv.ryy_matrix,
    "rzz": sv.rzz_matrix,
}


@dataclass(frozen=True)
class GateOp:
    name: str
    qubits: tuple[int, ...]
    slot: int | None = None
    layer: str = ""


@dataclass
class CircuitSpec:
    n_data: int
    n_ancilla: int
    readout: int
    ops: list[GateOp]
    n_slots: int
    slot_layout: dict[str, int] = field(default_factory=dict)
    layers: list[dict] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    @property
    def n_qubits(self) -> int:
        return self.n_data + self.n_ancilla

    def describe(self) -> dict:
        return {
            "n_data": self.n_data,
            "n_ancilla": self.n_ancilla,
            "readout": self.readout,
            "n_slots": self.n_slots,
            "slot_layout": self.slot_layout,
            "layers": self.layers,
            **self.metadata,
        }


def _brick_pairs(kept: list[int]) -> list[tuple[int, int]]:
    pairs = [(kept[i], kept[i + 1]) for i in range(0, len(kept) - 1, 2)]
    pairs += [(kept[i], kept[i + 1]) for i in range(1, len(kept) - 1, 2)]
    return pairs


def build_architecture(
    n_data: int,
    n_l: int,
    with_pre: bool = True,
    n_ancilla: int = 1,
) -> CircuitSpec:
    """Compile the layer plan into an elementary gate list with parameter
    slots. Slot count is n_data (pre block) + stages * (9*n_l + 3)."""
    if n_data < 4:
        raise ValueError("need at least 4 data qubits")
    ops: list[GateOp] = []
    layers: list[dict] = []
    slot = 0

    def take(count: int) -> list[int]:
        nonlocal slot
        out = list(range(slot, slot + count))
        slot += count
        return out

    if with_pre:
        pre_slots = take(n_data)
        for q in range(n_data):
            ops.append(GateOp("ry", (q,), pre_slots[q], "pre"))
        for q in range(n_data - 1):
            ops.append(GateOp("cz", (q, q + 1), None, "pre"))
        layers.append({"kind": "general_pre", "rounds": 1, "slots": len(pre_slots)})

    def u3(q: int, slots: list[int], layer: str):
        ops.append(GateOp("rz", (q,), slots[0], layer))
        ops.append(GateOp("ry", (q,), slots[1], layer))
        ops.append(GateOp("rz", (q,), slots[2], layer))

    def pair_rot(qa: int, qb: int, slots: list[int], layer: str):
        ops.append(GateOp("rxx", (qa, qb), slots[0], layer))
        ops.append(GateOp("ryy", (qa, qb), slots[1], layer))
        ops.append(GateOp("rzz", (qa, qb), slots[2], layer))

    kept = list(range(n_data + n_ancilla))
    readout = kept[0]
    stage = 0
    while True:
        stage += 1
        for conv_idx in range(n_l):
            block = take(9)
            tag = f"conv{stage}.{conv_idx + 1}"
            for qa, qb in _brick_pairs(kept):
                u3(qa, block[0:3], tag)
                u3(qb, block[3:6], tag)
                pair_rot(qa, qb, block[6:9], tag)
            layers.append({"kind": "conv", "stage": stage, "gates": len(_brick_pairs(kept))})
        next_kept = kept[0::2]
        pooled = kept[1::2]
        if len(next_kept) > 2:
            block = take(3)
            for i, p in enumerate(pooled):
                pair_rot(p, kept[2 * i], block, f"pool{stage}")
            layers.append({"kind": "pool", "stage": stage, "pooled": len(pooled)})
            kept = next_kept
        else:
            block = take(3)
            for q in kept[1:]:
                pair_rot(q, readout, block, "fc")
            layers.append({"kind": "fully_connected", "stage": stage, "gates": len(kept) - 1})
            break

    layout = {"pre": n_data if with_pre else 0, "stages": stage, "per_stage": 9 * n_l + 3}
    meta = {"n_l": n_l, "with_pre": with_pre}
    return CircuitSpec(
        n_data=n_data,
        n_ancilla=n_ancilla,
        readout=readout,
        ops=ops,
        n_slots=slot,
        slot_layout=layout,
        layers=layers,
        metadata=meta,
    )


def init_params(spec: CircuitSpec, seed: int, scale: float = 0.1) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return scale * rng.standard_normal(spec.n_slots)


def _instance_angles(spec: CircuitSpec, theta: np.ndarray) -> np.ndarray:
    angles = np.zeros(len(spec.ops))
    for j, op in enumerate(spec.ops):
        if op.slot is not None:
            angles[j] = theta[op.slot]
    return angles


def _prepare_input(spec: CircuitSpec, states: np.ndarray) -> np.ndarray:
    """Stack data-space amplitudes with the ancilla register in |0>."""
    states = np.asarray(states, dtype=np.complex128)
    single = states.ndim == 1
    if single:
        states = states[:, None]
    dim_data = 1 << spec.n_data
    if states.shape[0] != dim_data:
        raise DimensionMismatchError(
            f"input dimension {states.shape[0]} != 2^{spec.n_data}"
        )
    full = np.zeros((1 << spec.n_qubits, states.shape[1]), dtype=np.complex128)
    full[:dim_data] = states  # ancilla bits are the top bits, all |0>
    return full


def _apply_op(spec: CircuitSpec, op: GateOp, angle: float, state: np.ndarray) -> np.ndarray:
    nq = spec.n_qubits
    if op.name == "cz":
        return sv.apply_cz(state, op.qubits[0], op.qubits[1], nq)
    if len(op.qubits) == 1:
        return sv.apply_1q(state, _MATRIX[op.name](angle), op.qubits[0], nq)
    return sv.apply_2q(state, _MATRIX[op.name](angle), op.qubits[0], op.qubits[1], nq)


def _run_ops(spec: CircuitSpec, angles: np.ndarray, state: np.ndarray) -> np.ndarray:
    for j, op in enumerate(spec.ops):
        state = _apply_op(spec, op, angles[j], state)
    return state


def forward(spec: CircuitSpec, theta: np.ndarray, state_in: np.ndarray | StateVector):
    """Probability of the readout qubit being |1>, marginalized over all
    other qubits. Accepts a single state (full 2^n_data amplitudes or a
    StateVector, embedded automatically) or a (dim, batch) matrix."""
    if isinstance(state_in, StateVector):
        state_in = state_in.embed_full()
    single = np.asarray(state_in).ndim == 1
    full = _prepare_input(spec, state_in)
    angles = _instance_angles(spec, np.asarray(theta, dtype=float))
    out = _run_ops(spec, angles, full)
    q = sv.prob_bit_one(out, spec.readout, spec.n_qubits)
    return float(q[0]) if single else q


@dataclass
class LossReport:
    loss: float
    q_values: np.ndarray
    iteration: int = 0


def _batch_arrays(spec: CircuitSpec, batch) -> tuple[np.ndarray, np.ndarray]:
    if len(batch) == 0:
        raise EmptyBatchError("empty training batch")
    states = np.stack(
        [
            s.state.embed_full() if isinstance(s.state, StateVector) else np.asarray(s.state)
            for s in batch
        ],
        axis=1,
    )
    labels = np.array([s.label for s in batch], dtype=float)
    return states, labels


def _dedupe_batch(
    states: np.ndarray, labels: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Collapse identical (state, label) columns into multiplicity weights.

    Returns (unique_states, unique_labels, weights, expand) where weights
    are multiplicities normalized by the full batch size and
    q_full = q_unique[expand] restores batch order. Gradients computed
    with these weights equal the plain mean over the duplicated batch.
    """
    index: dict[tuple[bytes, float], int] = {}
    counts: list[int] = []
    expand = np.empty(states.shape[1], dtype=int)
    keep: list[int] = []
    for i in range(states.shape[1]):
        key = (states[:, i].tobytes(), float(labels[i]))
        j = index.get(key)
        if j is None:
            j = len(keep)
            index[key] = j
            keep.append(i)
            counts.append(0)
        counts[j] += 1
        expand[i] = j
    weights = np.array(counts, dtype=float) / states.shape[1]
    return states[:, keep], labels[keep], weights, expand


def loss(spec: CircuitSpec, theta: np.ndarray, batch, iteration: int = 0) -> LossReport:
    """Mean absolute deviation between labels and readout probabilities."""
    states, labels = _batch_arrays(spec, batch)
    q = forward(spec, theta, states)
    return LossReport(float(np.mean(np.abs(labels - q))), q, iteration)


def gradient(spec: CircuitSpec, theta: np.ndarray, batch) -> np.ndarray:
    """Loss gradient by the two-point parameter-shift rule.

    Every tied gate instance is shifted individually by +/- pi/2 and the
    contributions accumulate into the shared slot. The subgradient of
    |y - q| at q = y is taken as 0.
    """
    grad, _ = _shift_gradient_with_q(spec, theta, batch)
    return grad


def _shift_gradient_with_q(spec, theta, batch) -> tuple[np.ndarray, np.ndarray]:
    states, labels = _batch_arrays(spec, batch)
    states, labels, weights, expand = _dedupe_batch(states, labels)
    theta = np.asarray(theta, dtype=float)
    nq = spec.n_qubits
    full = _prepare_input(spec, states)
    angles = _instance_angles(spec, theta)

    # cache the state just before every op so each shifted evaluation
    # only replays the tail of the circuit
    prefixes = [full]
    state = full
    for j, op in enumerate(spec.ops):
        state = _apply_op(spec, op, angles[j], state)
        prefixes.append(state)
    q0 = sv.prob_bit_one(state, spec.readout, nq)
    signs = np.sign(q0 - labels) * weights

    grad = np.zeros(spec.n_slots)
    for j, op in enumerate(spec.ops):
        if op.slot is None:
            continue
        dq = None
        for sign in (1.0, -1.0):
            tail = _apply_op(spec, op, angles[j] + sign * np.pi / 2, prefixes[j])
            for jj in range(j + 1, len(spec.ops)):
                tail = _apply_op(spec, spec.ops[jj], angles[jj], tail)
            q_shift = sv.prob_bit_one(tail, spec.readout, nq)
            dq = 0.5 * q_shift if dq is None else dq - 0.5 * q_shift
        grad[op.slot] += float(np.dot(signs, dq))
    return grad, q0[expand]


_GENERATOR_1Q = {"ry": sv.PAULI_Y, "rz": sv.PAULI_Z}
_GENERATOR_2Q = {
    "rxx": np.kron(sv.PAULI_X, sv.PAULI_X),
    "ryy": np.kron(sv.PAULI_Y, sv.PAULI_Y),
    "rzz": np.kron(sv.PAULI_Z, sv.PAULI_Z),
}


def adjoint_gradient(spec: CircuitSpec, theta: np.ndarray, batch) -> np.ndarray:
    """Analytic loss gradient by reverse propagation.

    Equals the parameter-shift gradient exactly (all gates are
    Pauli-generated); used as the fast path during training.
    """
    grad, _ = _adjoint_gradient_with_q(spec, theta, batch)
    return grad


def _adjoint_gradient_with_q(spec, theta, batch) -> tuple[np.ndarray, np.ndarray]:
    states, labels = _batch_arrays(spec, batch)
    states, labels, weights, expand = _dedupe_batch(states, labels)
    theta = np.asarray(theta, dtype=float)
    nq = spec.n_qubits
    full = _prepare_input(spec, states)
    angles = _instance_angles(spec, theta)
    ket = _run_ops(spec, angles, full)
    q0 = sv.prob_bit_one(ket, spec.readout, nq)
    signs = np.sign(q0 - labels) * weights

    # bra = projector on readout |1>, applied to the final state, weighted
    bra = 0.5 * (ket - sv.apply_pauli_z(ket, spec.readout, nq))
    bra = bra * signs[None, :]

    grad = np.zeros(spec.n_slots)
    for j in range(len(spec.ops) - 1, -1, -1):
        op = spec.ops[j]
        if op.slot is not None:
            if len(op.qubits) == 1:
                pk = sv.apply_1q(ket, _GENERATOR_1Q[op.name], op.qubits[0], nq)
            else:
                pk = sv.apply_2q(
                    ket, _GENERATOR_2Q[op.name], op.qubits[0], op.qubits[1], nq
                )
            grad[op.slot] += float(np.sum(np.conj(bra) * pk).imag)
        if op.name == "cz":
            ket = sv.apply_cz(ket, op.qubits[0], op.qubits[1], nq)
            bra = sv.apply_cz(bra, op.qubits[0], op.qubits[1], nq)
        elif len(op.qubits) == 1:
            u_dag = _MATRIX[op.name](angles[j]).conj().T
            ket = sv.apply_1q(ket, u_dag, op.qubits[0], nq)
            bra = sv.apply_1q(bra, u_dag, op.qubits[0], nq)
        else:
            u_dag = _MATRIX[op.name](angles[j]).conj().T
            ket = sv.apply_2q(ket, u_dag, op.qubits[0], op.qubits[1], nq)
            bra = sv.apply_2q(bra, u_dag, op.qubits[0], op.qubits[1], nq)
    return grad, q0[expand]


@dataclass
class TrainingSample:
    state: np.ndarray  # full 2^n_data amplitudes
    label: int


def make_dataset(eigs: EigenSet, scar_indices, size: int, seed: int) -> list[TrainingSample]:
    """Balanced dataset: superpositions inside the scar span labeled 1,
    single non-scar eigenstates and small superpositions labeled 0."""
    scar_indices = list(scar_indices)
    if not scar_indices:
        raise NoScarsError("need at least one scar index")
    if size % 2:
        raise ValueError("dataset size must be even")
    rng = np.random.default_rng(seed)
    scar_states = np.stack([eigs.state(j).embed_full() for j in scar_indices], axis=1)
    other = [j for j in range(eigs.dim) if j not in set(scar_indices)]
    samples: list[TrainingSample] = []
    for _ in range(size // 2):
        coeff = rng.standard_normal(len(scar_indices)) + 1j * rng.standard_normal(
            len(scar_indices)
        )
        coeff /= np.linalg.norm(coeff)
        samples.append(TrainingSample(scar_states @ coeff, 1))
    for i in range(size // 2):
        if i % 2 == 0:
            j = int(rng.choice(other))
            samples.append(TrainingSample(eigs.state(j).embed_full(), 0))
        else:
            count = int(rng.integers(2, 5))
            picks = rng.choice(other, size=min(count, len(other)), replace=False)
            coeff = rng.standard_normal(len(picks)) + 1j * rng.standard_normal(len(picks))
            coeff /= np.linalg.norm(coeff)
            mix = np.stack([eigs.state(int(j)).embed_full() for j in picks], axis=1) @ coeff
            samples.append(TrainingSample(mix, 0))
    return samples


@dataclass
class OptimizerConfig:
    method: str = "gd"  # gd | adam
    learning_rate: float = 0.05
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    grad_method: str = "adjoint"  # adjoint | shift


def train(
    spec: CircuitSpec,
    batch_generator,
    optimizer: OptimizerConfig,
    iterations: int,
    theta0: np.ndarray,
) -> tuple[np.ndarray, list[LossReport]]:
    """Gradient-descent training; batch_generator(iteration) -> batch."""
    theta = np.array(theta0, dtype=float)
    trace: list[LossReport] = []
    grad_fn = (
        _adjoint_gradient_with_q
        if optimizer.grad_method == "adjoint"
        else _shift_gradient_with_q
    )
    m = np.zeros_like(theta)
    v = np.zeros_like(theta)
    for it in range(iterations):
        batch = batch_generator(it)
        g, q0 = grad_fn(spec, theta, batch)
        labels = np.array([s.label for s in batch], dtype=float)
        trace.append(LossReport(float(np.mean(np.abs(labels - q0))), q0, it))
        if optimizer.method == "adam":
            m = optimizer.beta1 * m + (1 - optimizer.beta1) * g
            v = optimizer.beta2 * v + (1 - optimizer.beta2) * g**2
            mhat = m / (1 - optimizer.beta1 ** (it + 1))
            vhat = v / (1 - optimizer.beta2 ** (it + 1))
            theta -= optimizer.learning_rate * mhat / (np.sqrt(vhat) + optimizer.eps)
        else:
            theta -= optimizer.learning_rate * g
    return theta, trace


def classify_spectrum(
    spec: CircuitSpec, theta: np.ndarray, eigs: EigenSet
) -> tuple[np.ndarray, np.ndarray]:
    """Readout probability per eigenstate; marked iff q strictly exceeds 0.5."""
    states = np.stack([eigs.state(j).embed_full() for j in range(eigs.dim)], axis=1)
    q = forward(spec, theta, states)
    return q, q > 0.5


def select_scar_indices(
    eigs: EigenSet,
    overlaps: np.ndarray,
    window_width: float,
    threshold: float = 1e-12,
) -> list[int]:
    """Per-energy-window argmax of reference overlap (window-tower picks
    used for models without an exact scar tower)."""
    e_min, e_max = float(eigs.energies[0]), float(eigs.energies[-1])
    picks = []
    edges = np.arange(e_min, e_max + window_width, window_width)
    for lo in edges:
        hi = lo + window_width
        in_win = np.nonzero((eigs.energies >= lo) & (eigs.energies < hi))[0]
        if len(in_win) == 0:
            continue
        best = in_win[np.argmax(overlaps[in_win])]
        if overlaps[best] > threshold:
            picks.append(int(best))
    return sorted(set(picks))


def serialize_model(spec: CircuitSpec, theta: np.ndarray, training_meta: dict) -> str:
    doc = {
        "architecture": spec.describe(),
        "parameters": [float(t) for t in theta],
        "parameters_repr": [repr(float(t)) for t in theta],
        "training": training_meta,
    }
    return json.dumps(doc, indent=2, sort_keys=True)


def deserialize_model(text: str) -> tuple[dict, np.ndarray, dict]:
    doc = json.loads(text)
    theta = np.array([float(s) for s in doc["parameters_repr"]], dtype=float)
    return doc["architecture"], theta, doc.get("training", {})
