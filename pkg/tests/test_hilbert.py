import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from scarlab.errors import (
    EmptySectorError,
    NonHermitianError,
    NotInSectorError,
    SectorEscapeError,
    TooLargeError,
    TooManySitesError,
)
from scarlab.hilbert import (
    PauliTerm,
    SectorBasis,
    SectorConstraint,
    SparseOp,
    StateVector,
    build_sector,
    domain_wall_count,
    pauli_string_apply,
)


def test_full_space_n4_has_16_configs():
    basis = build_sector(4, SectorConstraint.full_space(4))
    assert basis.dim == 16
    assert list(basis.configs) == list(range(16))


def test_frozen_boundary_n4_middle_bits_free():
    basis = build_sector(4, SectorConstraint.frozen_boundary(4))
    assert list(basis.configs) == [0b0000, 0b0010, 0b0100, 0b0110]


def test_domain_wall_sector_size_matches_brute_force():
    # oracle: exhaustive scan with an independently written bond counter
    n = 12
    expected = sum(1 for b in oracles.frozen_configs(n) if oracles.dw_count(b, n) == 2)
    basis = build_sector(n, SectorConstraint.domain_wall(n, 2))
    assert basis.dim == expected
    assert all(oracles.dw_count(int(b), n) == 2 for b in basis.configs)


def test_sector_sizes_partition_frozen_space():
    n = 10
    total = 0
    for n_dw in range(0, n, 2):
        total += build_sector(n, SectorConstraint.domain_wall(n, n_dw)).dim
    assert total == 2 ** (n - 2)


def test_odd_domain_wall_sector_is_empty():
    with pytest.raises(EmptySectorError):
        build_sector(8, SectorConstraint.domain_wall(8, 3))


def test_site_count_limit():
    with pytest.raises(TooManySitesError):
        build_sector(25, SectorConstraint.full_space(25))


def test_domain_wall_count_examples():
    assert domain_wall_count(0b0000, 4) == 0
    assert domain_wall_count(0b0010, 4) == 2
    assert domain_wall_count(0b0101, 4) == 3


@given(st.integers(min_value=4, max_value=10), st.data())
@settings(max_examples=30, deadline=None)
def test_index_of_inverts_configs(n, data):
    basis = build_sector(n, SectorConstraint.frozen_boundary(n))
    j = data.draw(st.integers(min_value=0, max_value=basis.dim - 1))
    assert basis.index_of(int(basis.configs[j])) == j


def test_index_of_rejects_outside_configs():
    basis = build_sector(4, SectorConstraint.frozen_boundary(4))
    with pytest.raises(NotInSectorError):
        basis.index_of(0b0001)


def test_configs_sorted_ascending():
    basis = build_sector(8, SectorConstraint.rydberg_blockade(8))
    assert np.all(np.diff(basis.configs) > 0)


def test_hex_dump_roundtrip():
    basis = build_sector(5, SectorConstraint.frozen_boundary(5))
    assert [int(s, 16) for s in basis.hex_dump()] == list(basis.configs)


def test_sigma_z_convention_on_down_spin():
    basis = build_sector(3, SectorConstraint.full_space(3))
    psi = StateVector.basis_state(basis, 0b000)
    out = pauli_string_apply(PauliTerm(1.0, ((1, "z"),)), psi)
    assert out.amplitudes[basis.index_of(0)] == pytest.approx(-1.0)


def test_projected_raise_creates_single_excitation():
    basis = build_sector(3, SectorConstraint.full_space(3))
    psi = StateVector.basis_state(basis, 0b000)
    term = PauliTerm(1.0, ((0, "p0"), (1, "+"), (2, "p0")))
    out = pauli_string_apply(term, psi)
    assert out.amplitudes[basis.index_of(0b010)] == pytest.approx(1.0)
    assert np.count_nonzero(out.amplitudes) == 1


def test_zz_bond_expectation_on_antialigned_pair():
    basis = build_sector(4, SectorConstraint.full_space(4))
    psi = StateVector.basis_state(basis, 0b0010)
    out = pauli_string_apply(PauliTerm(1.0, ((1, "z"), (2, "z"))), psi)
    assert np.vdot(psi.amplitudes, out.amplitudes) == pytest.approx(-1.0)


def test_sigma_y_convention():
    basis = build_sector(3, SectorConstraint.full_space(3))
    down = StateVector.basis_state(basis, 0b000)
    up = pauli_string_apply(PauliTerm(1.0, ((1, "y"),)), down)
    assert up.amplitudes[basis.index_of(0b010)] == pytest.approx(-1.0j)
    back = pauli_string_apply(PauliTerm(1.0, ((1, "y"),)), up)
    assert back.amplitudes[0] == pytest.approx(1.0)


def test_sector_escape_raises():
    basis = build_sector(4, SectorConstraint.frozen_boundary(4))
    psi = StateVector.basis_state(basis, 0)
    with pytest.raises(SectorEscapeError):
        pauli_string_apply(PauliTerm(1.0, ((0, "+"),)), psi)


@given(st.integers(min_value=0, max_value=2**31))
@settings(max_examples=50, deadline=None)
def test_pauli_apply_is_linear(seed):
    rng = np.random.default_rng(seed)
    basis = build_sector(5, SectorConstraint.frozen_boundary(5))
    terms = [
        PauliTerm(0.7, ((1, "x"),)),
        PauliTerm(-0.3, ((2, "z"), (3, "x"))),
    ]
    v1 = rng.standard_normal(basis.dim) + 1j * rng.standard_normal(basis.dim)
    v2 = rng.standard_normal(basis.dim) + 1j * rng.standard_normal(basis.dim)
    a, b = complex(rng.standard_normal()), complex(rng.standard_normal())
    lhs = pauli_string_apply(terms, StateVector(basis, a * v1 + b * v2)).amplitudes
    rhs = a * pauli_string_apply(terms, StateVector(basis, v1)).amplitudes
    rhs = rhs + b * pauli_string_apply(terms, StateVector(basis, v2)).amplitudes
    assert np.allclose(lhs, rhs, atol=1e-12)


def test_sparse_one_by_one_dense():
    basis = build_sector(3, SectorConstraint.domain_wall(3, 0))
    assert basis.dim == 1
    op = SparseOp.from_terms(basis, [PauliTerm(2.0, ())])
    assert np.allclose(op.to_dense(), [[2.0]])


def test_sparse_empty_operator_dense_zero():
    basis = build_sector(4, SectorConstraint.frozen_boundary(4))
    op = SparseOp.from_terms(basis, [])
    assert np.allclose(op.to_dense(), np.zeros((4, 4)))


def test_dense_round_trip_preserves_entries():
    from scarlab import models

    sec = SectorConstraint.frozen_boundary(6)
    op = models.build_xorx(models.XorXParams(lam=0.9, delta=0.2, j=0.5, n=6), sec)
    dense = op.to_dense()
    rebuilt = SparseOp(op.basis, dense)
    assert np.array_equal(rebuilt.to_dense(), dense)


def test_hermiticity_enforced():
    basis = build_sector(4, SectorConstraint.frozen_boundary(4))
    bad = np.zeros((4, 4), dtype=complex)
    bad[0, 1] = 1.0
    with pytest.raises(NonHermitianError):
        SparseOp(basis, bad)


def test_dense_threshold():
    basis = build_sector(4, SectorConstraint.frozen_boundary(4))
    op = SparseOp.from_terms(basis, [])
    with pytest.raises(TooLargeError):
        op.to_dense(dense_max=2)


def test_statevector_embed_full_zero_pads():
    basis = build_sector(4, SectorConstraint.frozen_boundary(4))
    psi = StateVector.basis_state(basis, 0b0110)
    full = psi.embed_full()
    assert full.shape == (16,)
    assert full[0b0110] == 1.0
    assert np.count_nonzero(full) == 1
