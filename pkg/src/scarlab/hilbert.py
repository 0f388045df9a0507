"""Computational-basis bookkeeping, symmetry sectors, and sparse operators.

Conventions (fixed across the package):
  * qubit/site indices are 0-based; bit i of an integer configuration is
    the state of site i,
  * sz|0> = -|0>, sz|1> = +|1>, sigma^+ = |1><0|,
  * domain walls are counted on all n-1 bonds, boundary bonds included,
  * basis configurations are sorted ascending by integer value.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import (
    EmptySectorError,
    NonHermitianError,
    NotInSectorError,
    SectorEscapeError,
    TooLargeError,
    TooManySitesError,
)

MAX_SITES = 20
DENSE_MAX_DIM = 2**14
HERMITIAN_ATOL = 1e-12


def domain_wall_count(bits: int, n: int) -> int:
    """Number of bonds (i, i+1) with unequal bits, over all n-1 bonds."""
    return int(bin((bits ^ (bits >> 1)) & ((1 << (n - 1)) - 1)).count("1"))


@dataclass(frozen=True)
class SectorConstraint:
    """Descriptor of which configurations belong to a sector."""

    kind: str  # full | frozen | domain_wall | blockade | magnetization
    n: int
    left: int = 0
    right: int = 0
    n_dw: int | None = None
    k: int | None = None
    periodic: bool = False

    @staticmethod
    def full_space(n: int) -> "SectorConstraint":
        return SectorConstraint("full", n)

    @staticmethod
    def frozen_boundary(n: int, left: int = 0, right: int = 0) -> "SectorConstraint":
        return SectorConstraint("frozen", n, left=left, right=right)

    @staticmethod
    def domain_wall(n: int, n_dw: int, left: int = 0, right: int = 0) -> "SectorConstraint":
        if not 0 <= n_dw <= n - 1:
            raise ValueError(f"n_dw={n_dw} outside [0, {n - 1}]")
        return SectorConstraint("domain_wall", n, left=left, right=right, n_dw=n_dw)

    @staticmethod
    def rydberg_blockade(n: int, periodic: bool = False) -> "SectorConstraint":
        return SectorConstraint("blockade", n, periodic=periodic)

    @staticmethod
    def magnetization(n: int, k: int) -> "SectorConstraint":
        if not 0 <= k <= n:
            raise ValueError(f"k={k} outside [0, {n}]")
        return SectorConstraint("magnetization", n, k=k)

    def admits(self, bits: int) -> bool:
        n = self.n
        if self.kind == "full":
            return True
        if self.kind == "frozen":
            return (bits & 1) == self.left and ((bits >> (n - 1)) & 1) == self.right
        if self.kind == "domain_wall":
            if (bits & 1) != self.left or ((bits >> (n - 1)) & 1) != self.right:
                return False
            return domain_wall_count(bits, n) == self.n_dw
        if self.kind == "blockade":
            if bits & (bits >> 1):
                return False
            if self.periodic and (bits & 1) and ((bits >> (n - 1)) & 1):
                return False
            return True
        if self.kind == "magnetization":
            return bin(bits).count("1") == self.k
        raise ValueError(f"unknown constraint kind {self.kind!r}")

    def describe(self) -> str:
        if self.kind == "full":
            return f"full(n={self.n})"
        if self.kind == "frozen":
            return f"frozen(n={self.n},l={self.left},r={self.right})"
        if self.kind == "domain_wall":
            return f"domain_wall(n={self.n},n_dw={self.n_dw},l={self.left},r={self.right})"
        if self.kind == "blockade":
            bc = "pbc" if self.periodic else "obc"
            return f"blockade(n={self.n},{bc})"
        return f"magnetization(n={self.n},k={self.k})"


class SectorBasis:
    """Ordered basis of configurations satisfying a sector constraint."""

    def __init__(self, constraint: SectorConstraint, configs: np.ndarray):
        self.constraint = constraint
        self.n = constraint.n
        self.configs = np.asarray(configs, dtype=np.int64)
        self._index = {int(c): i for i, c in enumerate(self.configs)}

    def __len__(self) -> int:
        return len(self.configs)

    @property
    def dim(self) -> int:
        return len(self.configs)

    def __contains__(self, bits: int) -> bool:
        return int(bits) in self._index

    def index_of(self, bits: int) -> int:
        try:
            return self._index[int(bits)]
        except KeyError:
            raise NotInSectorError(
                f"configuration {bits:0{self.n}b} not in sector {self.constraint.describe()}"
            ) from None

    def hex_dump(self) -> list[str]:
        return [f"{int(c):x}" for c in self.configs]

    def __repr__(self) -> str:
        return f"SectorBasis({self.constraint.describe()}, dim={self.dim})"


def build_sector(n: int, constraint: SectorConstraint, max_sites: int = MAX_SITES) -> SectorBasis:
    """Enumerate every configuration of n sites satisfying the constraint."""
    if n < 3:
        raise ValueError(f"n={n} too small (need n >= 3)")
    if n > max_sites:
        raise TooManySitesError(f"n={n} exceeds the configured maximum {max_sites}")
    if constraint.n != n:
        raise ValueError("constraint built for a different chain length")
    configs = [bits for bits in range(1 << n) if constraint.admits(bits)]
    if not configs:
        raise EmptySectorError(f"no configuration satisfies {constraint.describe()}")
    return SectorBasis(constraint, np.array(configs, dtype=np.int64))


class StateVector:
    """Complex amplitudes over a SectorBasis."""

    def __init__(self, basis: SectorBasis, amplitudes: np.ndarray):
        amplitudes = np.asarray(amplitudes, dtype=np.complex128)
        if amplitudes.shape != (basis.dim,):
            raise ValueError(f"amplitude shape {amplitudes.shape} != ({basis.dim},)")
        self.basis = basis
        self.amplitudes = amplitudes

    @staticmethod
    def basis_state(basis: SectorBasis, bits: int) -> "StateVector":
        amps = np.zeros(basis.dim, dtype=np.complex128)
        amps[basis.index_of(bits)] = 1.0
        return StateVector(basis, amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "StateVector":
        nrm = self.norm()
        if nrm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return StateVector(self.basis, self.amplitudes / nrm)

    def dot(self, other: "StateVector") -> complex:
        if other.basis is not self.basis and not np.array_equal(
            other.basis.configs, self.basis.configs
        ):
            raise NotInSectorError("states live over different bases")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def embed_full(self) -> np.ndarray:
        """Zero-pad into the full 2^n computational space (bit i = site i)."""
        full = np.zeros(1 << self.basis.n, dtype=np.complex128)
        full[self.basis.configs] = self.amplitudes
        return full


@dataclass(frozen=True)
class PauliTerm:
    """A scalar multiple of a product of single-site factors.

    Factor symbols: x, y, z, +, -, p0, p1. Sites must be distinct.
    """

    coeff: complex
    factors: tuple[tuple[int, str], ...]

    def __post_init__(self):
        sites = [s for s, _ in self.factors]
        if len(set(sites)) != len(sites):
            raise ValueError("repeated site in Pauli term")
        for _, sym in self.factors:
            if sym not in ("x", "y", "z", "+", "-", "p0", "p1"):
                raise ValueError(f"unknown factor symbol {sym!r}")

    def apply_to_config(self, bits: int) -> tuple[int, complex]:
        """Image configuration and amplitude; amplitude 0 when annihilated."""
        amp = complex(self.coeff)
        out = bits
        for site, sym in self.factors:
            b = (out >> site) & 1
            if sym == "z":
                amp *= 1.0 if b else -1.0
            elif sym == "x":
                out ^= 1 << site
            elif sym == "y":
                # sigma_y|0> = -i|1>,  sigma_y|1> = +i|0>
                amp *= 1j if b else -1j
                out ^= 1 << site
            elif sym == "+":
                if b:
                    return bits, 0.0
                out |= 1 << site
            elif sym == "-":
                if not b:
                    return bits, 0.0
                out &= ~(1 << site)
            elif sym == "p0":
                if b:
                    return bits, 0.0
            elif sym == "p1":
                if not b:
                    return bits, 0.0
        return out, amp


def _check_sites(terms: Iterable[PauliTerm], n: int) -> None:
    for term in terms:
        for site, _ in term.factors:
            if not 0 <= site < n:
                raise ValueError(f"site {site} outside [0, {n})")


def pauli_string_apply(terms: Sequence[PauliTerm] | PauliTerm, psi: StateVector) -> StateVector:
    """Exact linear action of a sum of Pauli/projector terms on a state.

    Raises SectorEscapeError if any image configuration with nonzero
    amplitude leaves the state's sector.
    """
    if isinstance(terms, PauliTerm):
        terms = [terms]
    basis = psi.basis
    _check_sites(terms, basis.n)
    out = np.zeros(basis.dim, dtype=np.complex128)
    # accumulate per image config before the sector check: individual terms
    # may leave the sector while their sum cancels exactly
    images: dict[int, complex] = {}
    for idx in np.nonzero(psi.amplitudes)[0]:
        bits = int(basis.configs[idx])
        a = psi.amplitudes[idx]
        for term in terms:
            new_bits, amp = term.apply_to_config(bits)
            if amp != 0.0:
                images[new_bits] = images.get(new_bits, 0.0) + amp * a
    for new_bits, amp in images.items():
        if amp == 0.0:
            continue
        if new_bits not in basis:
            raise SectorEscapeError(
                f"net image {new_bits:0{basis.n}b} outside "
                f"{basis.constraint.describe()}"
            )
        out[basis.index_of(new_bits)] = amp
    return StateVector(basis, out)


class SparseOp:
    """Sparse operator over a SectorBasis (CSR storage)."""

    def __init__(
        self,
        basis: SectorBasis,
        matrix: sp.spmatrix,
        hermitian: bool = True,
        metadata: dict | None = None,
    ):
        matrix = sp.csr_matrix(matrix, dtype=np.complex128)
        if matrix.shape != (basis.dim, basis.dim):
            raise ValueError(f"matrix shape {matrix.shape} != square dim {basis.dim}")
        if hermitian:
            dev = abs(matrix - matrix.getH())
            if dev.nnz and dev.max() > HERMITIAN_ATOL:
                raise NonHermitianError(f"max|A - A^dag| = {dev.max():.3e}")
        self.basis = basis
        self.matrix = matrix
        self.hermitian = hermitian
        self.metadata = dict(metadata or {})

    @property
    def dim(self) -> int:
        return self.basis.dim

    @staticmethod
    def from_terms(
        basis: SectorBasis,
        terms: Sequence[PauliTerm],
        hermitian: bool = True,
        metadata: dict | None = None,
    ) -> "SparseOp":
        """Build the matrix of a sum of terms over the sector basis."""
        _check_sites(terms, basis.n)
        rows, cols, vals = [], [], []
        for col, bits in enumerate(basis.configs):
            bits = int(bits)
            images: dict[int, complex] = {}
            for term in terms:
                new_bits, amp = term.apply_to_config(bits)
                if amp != 0.0:
                    images[new_bits] = images.get(new_bits, 0.0) + amp
            for new_bits, amp in images.items():
                if amp == 0.0:
                    continue
                if new_bits not in basis:
                    raise SectorEscapeError(
                        f"column {bits:0{basis.n}b} maps outside "
                        f"{basis.constraint.describe()}"
                    )
                rows.append(basis.index_of(new_bits))
                cols.append(col)
                vals.append(amp)
        matrix = sp.coo_matrix(
            (vals, (rows, cols)), shape=(basis.dim, basis.dim), dtype=np.complex128
        ).tocsr()
        return SparseOp(basis, matrix, hermitian=hermitian, metadata=metadata)

    def to_dense(self, dense_max: int = DENSE_MAX_DIM) -> np.ndarray:
        if self.dim > dense_max:
            raise TooLargeError(f"dimension {self.dim} exceeds dense threshold {dense_max}")
        dense = self.matrix.toarray()
        if self.hermitian:
            dev = np.abs(dense - dense.conj().T).max() if dense.size else 0.0
            if dev > HERMITIAN_ATOL:
                raise NonHermitianError(f"max|A - A^dag| = {dev:.3e}")
        return dense

    def apply(self, psi: StateVector) -> StateVector:
        if psi.basis is not self.basis and not np.array_equal(
            psi.basis.configs, self.basis.configs
        ):
            raise NotInSectorError("state and operator over different bases")
        return StateVector(self.basis, self.matrix @ psi.amplitudes)

    def expectation(self, psi: StateVector) -> float:
        val = np.vdot(psi.amplitudes, self.matrix @ psi.amplitudes)
        return float(val.real)

    def commutator_norm(self, other: "SparseOp") -> float:
        comm = self.matrix @ other.matrix - other.matrix @ self.matrix
        return float(abs(comm).max()) if comm.nnz else 0.0
