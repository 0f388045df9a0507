"""Noisy preparation of the first scar state and zero-noise extrapolation.

The preparation circuit seeds one excitation and splits it across the bulk
with a controlled-SWAP ladder, un-computing the ancilla after every split.
Noise is modeled as stochastic single-qubit Pauli insertions after each
multi-qubit gate; single-qubit gates are treated as noiseless. Circuit
folding replaces U by U(U^dag U)^r to scale the error rate, and the fits
extrapolate the classifier response back to the zero-noise point.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _statevec as sv
from . import qcnn
from .errors import ConfigError, DegenerateFitError

PAULI_OPS = ("x", "y", "z")


@dataclass(frozen=True)
class Gate:
    name: str  # x | z | cry | cswap | cnot
    qubits: tuple[int, ...]
    angle: float | None = None

    @property
    def is_multi(self) -> bool:
        return len(self.qubits) > 1

    def inverse(self) -> "Gate":
        if self.name == "cry":
            return Gate("cry", self.qubits, -self.angle)
        return self


@dataclass
class NoisyCircuit:
    n_qubits: int  # data qubits; one ancilla is appended internally
    gates: list[Gate]
    p: float = 0.0
    r: int = 0
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 0.0 <= self.p < 1.0:
            raise ConfigError(f"noise probability {self.p} outside [0, 1)")
        if self.r < 0 or int(self.r) != self.r:
            raise ConfigError(f"fold factor {self.r} must be a non-negative integer")

    @property
    def total_qubits(self) -> int:
        return self.n_qubits + 1

    @property
    def error_multiplier(self) -> int:
        return 1 + 2 * self.r

    def folded_gates(self) -> list[Gate]:
        seq = list(self.gates)
        inverse = [g.inverse() for g in reversed(self.gates)]
        for _ in range(self.r):
            seq += inverse + self.gates
        return seq


def prep_s1_circuit(n: int, p: float = 0.0, r: int = 0) -> NoisyCircuit:
    """Circuit taking |0...0> (n data qubits + ancilla) to the m=1 scar
    state with the ancilla back in |0>.

    The seed excitation starts on the last bulk site and each ladder step
    settles amplitude 1/sqrt(B) there before swapping the remainder one
    site down; the rotation angles are one valid amplitude-balanced
    realization of the equal-division ladder.
    """
    if n < 4:
        raise ConfigError("need n >= 4")
    ancilla = n
    bulk = list(range(1, n - 1))
    b = len(bulk)
    order = bulk[::-1]  # walk from the seed at site n-2 down to site 1
    gates = [Gate("x", (order[0],))]
    for k in range(1, b):
        theta = 2.0 * np.arccos(1.0 / np.sqrt(b - k + 1))
        cur, nxt = order[k - 1], order[k]
        gates.append(Gate("cry", (cur, ancilla), theta))
        gates.append(Gate("cswap", (ancilla, cur, nxt)))
        gates.append(Gate("cnot", (nxt, ancilla)))
    for j in bulk:
        if j % 2 == 0:  # sign (-1)^(j+1) on the site-j component
            gates.append(Gate("z", (j,)))
    return NoisyCircuit(n, gates, p=p, r=r, metadata={"kind": "prep_s1", "bulk": b})


def _apply_gate(state: np.ndarray, g: Gate, nq: int) -> np.ndarray:
    if g.name == "x":
        return sv.apply_x(state, g.qubits[0], nq)
    if g.name == "z":
        return sv.apply_pauli_z(state, g.qubits[0], nq)
    if g.name == "cry":
        return sv.apply_controlled(state, sv.ry_matrix(g.angle), g.qubits[0], g.qubits[1], nq)
    if g.name == "cnot":
        return sv.apply_controlled(state, sv.PAULI_X, g.qubits[0], g.qubits[1], nq)
    if g.name == "cswap":
        return sv.apply_cswap(state, g.qubits[0], g.qubits[1], g.qubits[2], nq)
    raise ConfigError(f"unknown gate {g.name}")


def _apply_pauli(state: np.ndarray, which: str, q: int, nq: int) -> np.ndarray:
    if which == "x":
        return sv.apply_x(state, q, nq)
    if which == "z":
        return sv.apply_pauli_z(state, q, nq)
    return sv.apply_1q(state, sv.PAULI_Y, q, nq)


def run_gates(
    state: np.ndarray,
    gates: list[Gate],
    nq: int,
    p: float = 0.0,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Apply a gate sequence; with p > 0 each multi-qubit gate is followed
    by an independent Pauli insertion (X, Y or Z with probability p/3
    each) on every qubit it touches."""
    for g in gates:
        state = _apply_gate(state, g, nq)
        if p > 0.0 and g.is_multi:
            for q in g.qubits:
                if rng.random() < p:
                    state = _apply_pauli(state, PAULI_OPS[rng.integers(3)], q, nq)
    return state


def _zero_state(nq: int) -> np.ndarray:
    state = np.zeros(1 << nq, dtype=np.complex128)
    state[0] = 1.0
    return state


def noiseless_output(circuit: NoisyCircuit) -> np.ndarray:
    return run_gates(_zero_state(circuit.total_qubits), circuit.folded_gates(), circuit.total_qubits)


def _trajectory_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([seed, index])


@dataclass
class NoisyRunResult:
    probabilities: np.ndarray  # trajectory-averaged |amp|^2 over all qubits
    counts: np.ndarray  # shot histogram sampled from the averaged outcome law
    mean_fidelity: float  # average overlap^2 with the noiseless output
    trajectories: int
    shots: int


def run_noisy(circuit: NoisyCircuit, trajectories: int, shots: int, seed: int) -> NoisyRunResult:
    if trajectories < 1:
        raise ConfigError("need at least one trajectory")
    nq = circuit.total_qubits
    gates = circuit.folded_gates()
    ideal = run_gates(_zero_state(nq), circuit.gates, nq)
    probs = np.zeros(1 << nq)
    fid = 0.0
    for t in range(trajectories):
        rng = _trajectory_rng(seed, t)
        psi = run_gates(_zero_state(nq), gates, nq, p=circuit.p, rng=rng)
        probs += np.abs(psi) ** 2
        fid += abs(np.vdot(ideal, psi)) ** 2
    probs /= trajectories
    probs = probs / probs.sum()
    shot_rng = np.random.default_rng([seed, trajectories, 1])
    counts = shot_rng.multinomial(shots, probs)
    return NoisyRunResult(probs, counts, fid / trajectories, trajectories, shots)


def fidelity_proxy(circuit: NoisyCircuit, trajectories: int, seed: int) -> float:
    """All-zero return probability after the noiseless un-preparation is
    appended to the noisy (folded) preparation; a zeroth-order stand-in
    for the true preparation fidelity."""
    nq = circuit.total_qubits
    forward = circuit.folded_gates()
    undo = [g.inverse() for g in reversed(circuit.gates)]
    total = 0.0
    for t in range(trajectories):
        rng = _trajectory_rng(seed, t)
        psi = run_gates(_zero_state(nq), forward, nq, p=circuit.p, rng=rng)
        psi = run_gates(psi, undo, nq)
        total += abs(psi[0]) ** 2
    return float(total / trajectories)


@dataclass
class ClassifierResponse:
    p1: float
    stderr: float
    proxy_fidelity: float
    trajectories: int
    shots: int


def classifier_p1(
    circuit: NoisyCircuit,
    spec: qcnn.CircuitSpec,
    theta: np.ndarray,
    trajectories: int,
    shots: int,
    seed: int,
) -> ClassifierResponse:
    """Marking probability of the trained classifier on the noisy
    preparation output, with binomial shot sampling per trajectory. The
    preparation ancilla doubles as the classifier ancilla."""
    if spec.n_qubits != circuit.total_qubits:
        raise ConfigError(
            f"classifier acts on {spec.n_qubits} qubits, circuit has {circuit.total_qubits}"
        )
    nq = circuit.total_qubits
    gates = circuit.folded_gates()
    angles = qcnn._instance_angles(spec, np.asarray(theta, dtype=float))
    # run all trajectories through the classifier as one batch; each
    # trajectory keeps its own rng so the shot draw stays per-trajectory
    states = np.empty((1 << nq, trajectories), dtype=np.complex128)
    rngs = []
    for t in range(trajectories):
        rng = _trajectory_rng(seed, t)
        states[:, t] = run_gates(_zero_state(nq), gates, nq, p=circuit.p, rng=rng)
        rngs.append(rng)
    out = qcnn._run_ops(spec, angles, states)
    qs = np.clip(sv.prob_bit_one(out, spec.readout, nq), 0.0, 1.0)
    fractions = np.array(
        [rngs[t].binomial(shots, qs[t]) / shots for t in range(trajectories)]
    )
    p1 = float(fractions.mean())
    stderr = float(fractions.std(ddof=1) / np.sqrt(trajectories)) if trajectories > 1 else 0.0
    proxy = fidelity_proxy(circuit, trajectories, seed)
    return ClassifierResponse(p1, stderr, proxy, trajectories, shots)


@dataclass
class ExtrapolationFit:
    family: str  # log_log | linear
    coefficients: tuple[float, float]  # (intercept-form a, slope b)
    intercept: float  # extrapolated P1 at the zero-noise point
    stderr: float
    used_points: int

    def describe(self) -> dict:
        return {
            "family": self.family,
            "coefficients": list(self.coefficients),
            "intercept": self.intercept,
            "stderr": self.stderr,
            "used_points": self.used_points,
        }


def _ols(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    """Least-squares y = a + b x; returns (a, b, stderr_a)."""
    n = len(x)
    xbar = x.mean()
    sxx = float(np.sum((x - xbar) ** 2))
    if sxx == 0.0:
        raise DegenerateFitError("all x values identical")
    b = float(np.sum((x - xbar) * (y - y.mean())) / sxx)
    a = float(y.mean() - b * xbar)
    resid = y - (a + b * x)
    s2 = float(np.sum(resid**2) / (n - 2)) if n > 2 else 0.0
    stderr_a = float(np.sqrt(s2 * (1.0 / n + xbar**2 / sxx)))
    return a, b, stderr_a


def zne_fit(
    x: np.ndarray,
    p1: np.ndarray,
    family: str,
    stderrs: np.ndarray | None = None,
    baseline: float | None = None,
) -> ExtrapolationFit:
    """Zero-noise extrapolation.

    log_log: power-law fit of P1 against the proxy fidelity, extrapolated
    to fidelity 1. linear: fit of P1 against the error multiplier
    m = 1 + 2r, extrapolated to m = 0; points within two standard errors
    of the uniform-random `baseline` are treated as saturated and dropped.
    """
    x = np.asarray(x, dtype=float)
    p1 = np.asarray(p1, dtype=float)
    keep = np.ones(len(x), dtype=bool)
    if family == "linear" and baseline is not None and stderrs is not None:
        keep = np.abs(p1 - baseline) > 2.0 * np.asarray(stderrs, dtype=float)
    xs, ys = x[keep], p1[keep]
    if len(xs) < 3:
        raise DegenerateFitError(f"need at least 3 points, have {len(xs)}")
    if family == "log_log":
        a, b, se_a = _ols(np.log(xs), np.log(ys))
        intercept = float(np.exp(a))
        return ExtrapolationFit("log_log", (a, b), intercept, intercept * se_a, len(xs))
    if family == "linear":
        a, b, se_a = _ols(xs, ys)
        return ExtrapolationFit("linear", (a, b), a, se_a, len(xs))
    raise ConfigError(f"unknown fit family {family!r}")
