"""Model Hamiltonians, exact scar tower, and reference product states.

All builders are pure functions returning SparseOps with a metadata block
(model name, parameters, sector convention, boundary flags).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotInSectorError, ZeroStateError
from .hilbert import (
    PauliTerm,
    SectorBasis,
    SectorConstraint,
    SparseOp,
    StateVector,
    build_sector,
    pauli_string_apply,
)


@dataclass(frozen=True)
class XorXParams:
    lam: float
    delta: float
    j: float
    n: int

    def __post_init__(self):
        if self.n < 4:
            raise ValueError("xorX needs n >= 4")
        for v in (self.lam, self.delta, self.j):
            if not np.isfinite(v):
                raise ValueError("couplings must be finite")


@dataclass(frozen=True)
class PXPParams:
    omega: float
    n: int
    boundary: str = "open"  # open | open_with_boundary_terms | periodic
    perturbation: str | None = None  # pxpz | staggered | uniform
    perturbation_strength: float = 0.0

    def __post_init__(self):
        if self.n < 4:
            raise ValueError("PXP needs n >= 4")
        if self.boundary not in ("open", "open_with_boundary_terms", "periodic"):
            raise ValueError(f"unknown boundary {self.boundary!r}")
        if self.perturbation not in (None, "pxpz", "staggered", "uniform"):
            raise ValueError(f"unknown perturbation {self.perturbation!r}")


@dataclass(frozen=True)
class SSHParams:
    j_even: float
    j_odd: float
    j_nnn: float
    n: int

    def __post_init__(self):
        if self.n < 4:
            raise ValueError("far-coupling SSH needs n >= 4")


def xorx_terms(params: XorXParams) -> list[PauliTerm]:
    """Term list of the xorX chain; paper sites 1..n map to 0..n-1."""
    n = params.n
    terms: list[PauliTerm] = []
    # flip term on bulk sites, active only when the neighbors anti-align
    for i in range(1, n - 1):
        terms.append(PauliTerm(params.lam, ((i, "x"),)))
        terms.append(PauliTerm(-params.lam, ((i - 1, "z"), (i, "x"), (i + 1, "z"))))
    for i in range(n):
        terms.append(PauliTerm(params.delta, ((i, "z"),)))
    for i in range(n - 1):
        terms.append(PauliTerm(params.j, ((i, "z"), (i + 1, "z"))))
    return terms


def build_xorx(params: XorXParams, sector: SectorConstraint) -> SparseOp:
    basis = build_sector(params.n, sector)
    meta = {
        "model": "xorx",
        "lambda": params.lam,
        "delta": params.delta,
        "j": params.j,
        "n": params.n,
        "sector": sector.describe(),
        "dw_convention": "all n-1 bonds, boundary bonds included",
    }
    return SparseOp.from_terms(basis, xorx_terms(params), metadata=meta)


def domain_wall_operator(basis: SectorBasis) -> SparseOp:
    """Sum of zz over all bonds; commutes with the xorX Hamiltonian."""
    n = basis.n
    terms = [PauliTerm(1.0, ((i, "z"), (i + 1, "z"))) for i in range(n - 1)]
    return SparseOp.from_terms(basis, terms, metadata={"model": "sum_zz"})


def raising_terms(n: int) -> list[PauliTerm]:
    """Scar raising operator: sum over bulk sites of (-1)^i P0 s+ P0.

    The alternating sign uses paper 1-based indexing, i.e. phase
    (-1)^(j+1) at 0-based site j.
    """
    terms = []
    for j in range(1, n - 1):
        sign = -1.0 if (j + 1) % 2 else 1.0
        terms.append(PauliTerm(sign, ((j - 1, "p0"), (j, "+"), (j + 1, "p0"))))
    return terms


def exact_scar(m: int, n: int, basis: SectorBasis | None = None) -> StateVector:
    """Normalized m-quasiparticle scar state in the frozen-boundary space.

    The normalization factor (before the 1/m! convention) is recorded in
    the returned vector as attribute `norm_factor`.
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    if basis is None:
        basis = build_sector(n, SectorConstraint.frozen_boundary(n))
    psi = StateVector.basis_state(basis, 0)
    qdag = raising_terms(n)
    for _ in range(m):
        psi = pauli_string_apply(qdag, psi)
        if psi.norm() == 0.0:
            raise ZeroStateError(f"(Q^dag)^{m} annihilates the vacuum at n={n}")
    norm_factor = psi.norm()
    out = StateVector(basis, psi.amplitudes / norm_factor)
    out.norm_factor = norm_factor
    out.m = m
    return out


def scar_tower(n: int, basis: SectorBasis | None = None) -> list[StateVector]:
    """All exact scar states, enumerating m upward until annihilation."""
    if basis is None:
        basis = build_sector(n, SectorConstraint.frozen_boundary(n))
    tower = []
    m = 0
    while True:
        try:
            tower.append(exact_scar(m, n, basis))
        except ZeroStateError:
            break
        m += 1
    return tower


def pxp_terms(params: PXPParams) -> list[PauliTerm]:
    n = params.n
    half = params.omega / 2.0
    terms: list[PauliTerm] = []
    for i in range(1, n - 1):
        terms.append(PauliTerm(half, ((i - 1, "p0"), (i, "x"), (i + 1, "p0"))))
    if params.boundary == "open_with_boundary_terms":
        terms.append(PauliTerm(half, ((0, "x"), (1, "p0"))))
        terms.append(PauliTerm(half, ((n - 2, "p0"), (n - 1, "x"))))
    elif params.boundary == "periodic":
        terms.append(PauliTerm(half, (((n - 1) % n, "p0"), (0, "x"), (1, "p0"))))
        terms.append(PauliTerm(half, ((n - 2, "p0"), (n - 1, "x"), (0, "p0"))))
    lam = params.perturbation_strength
    if params.perturbation == "pxpz" and lam != 0.0:
        periodic = params.boundary == "periodic"
        for i in range(n):
            # z_{i-2} P_{i-1} x_i P_{i+1}  and  P_{i-1} x_i P_{i+1} z_{i+2}
            for zsite in (i - 2, i + 2):
                sites = [zsite, i - 1, i, i + 1]
                if periodic:
                    sites = [s % n for s in sites]
                elif min(sites) < 0 or max(sites) >= n:
                    continue
                z, pl, x, pr = sites
                if len({z, pl, x, pr}) < 4:
                    continue
                terms.append(
                    PauliTerm(-lam, ((z, "z"), (pl, "p0"), (x, "x"), (pr, "p0")))
                )
    elif params.perturbation == "staggered" and lam != 0.0:
        # (-1)^i with paper 1-based indexing: phase -1 on odd paper sites
        for i in range(n):
            sign = -1.0 if (i + 1) % 2 else 1.0
            terms.append(PauliTerm(lam * sign, ((i, "z"),)))
    elif params.perturbation == "uniform" and lam != 0.0:
        for i in range(n):
            terms.append(PauliTerm(lam, ((i, "z"),)))
    return terms


def build_pxp(params: PXPParams, sector: SectorConstraint) -> SparseOp:
    basis = build_sector(params.n, sector)
    meta = {
        "model": "pxp",
        "omega": params.omega,
        "n": params.n,
        "boundary": params.boundary,
        "perturbation": params.perturbation or "none",
        "perturbation_strength": params.perturbation_strength,
        "sector": sector.describe(),
    }
    return SparseOp.from_terms(basis, pxp_terms(params), metadata=meta)


def ssh_terms(params: SSHParams) -> list[PauliTerm]:
    """Hopping terms of the far-coupling Ising SSH chain.

    Nearest-neighbor couplings alternate J_e, J_o over every bond of the
    open chain (bond index from the left, J_e first); range-3 hops with
    out-of-range endpoints are dropped.
    """
    n = params.n
    terms: list[PauliTerm] = []

    def hop(a: int, b: int, strength: float):
        if strength == 0.0 or a < 0 or b < 0 or a >= n or b >= n:
            return
        terms.append(PauliTerm(strength, ((a, "+"), (b, "-"))))
        terms.append(PauliTerm(strength, ((a, "-"), (b, "+"))))

    for bond in range(n - 1):
        hop(bond, bond + 1, params.j_even if bond % 2 == 0 else params.j_odd)
    for i in range(1, n - 2):
        hop(i - 1, i + 2, params.j_nnn)  # paper sites i, i+3
    return terms


def build_ssh(params: SSHParams, sector: SectorConstraint) -> SparseOp:
    basis = build_sector(params.n, sector)
    meta = {
        "model": "ssh",
        "j_even": params.j_even,
        "j_odd": params.j_odd,
        "j_nnn": params.j_nnn,
        "n": params.n,
        "sector": sector.describe(),
        "defaults_note": "coupling ratios are package defaults, not source-derived",
    }
    return SparseOp.from_terms(basis, ssh_terms(params), metadata=meta)


REFERENCE_LABELS = ("all_zero", "z2", "z2_alt", "z1001", "ferro")


def reference_bits(label: str, n: int) -> int:
    """Bit pattern of a named product state."""
    if label in ("all_zero", "ferro"):
        return 0
    if label == "z2":
        # Neel state with bit 0 = 1: |1010...>
        return sum(1 << i for i in range(0, n, 2))
    if label == "z2_alt":
        return sum(1 << i for i in range(1, n, 2))
    if label == "z1001":
        if n % 4:
            raise ValueError("z1001 needs n divisible by 4")
        bits = 0
        for block in range(n // 4):
            bits |= 1 << (4 * block)
            bits |= 1 << (4 * block + 3)
        return bits
    raise ValueError(f"unknown reference label {label!r}")


def reference_state(label: str, basis: SectorBasis) -> StateVector:
    bits = reference_bits(label, basis.n)
    if bits not in basis:
        raise NotInSectorError(
            f"reference {label!r} ({bits:0{basis.n}b}) not in {basis.constraint.describe()}"
        )
    return StateVector.basis_state(basis, bits)
