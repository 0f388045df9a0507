import numpy as np
import pytest

import oracles
from scarlab import models
from scarlab.errors import NotInSectorError, ZeroStateError
from scarlab.hilbert import SectorConstraint, build_sector
from scarlab.models import PXPParams, SSHParams, XorXParams


def dense(op):
    return op.to_dense()


class TestXorX:
    def test_n4_sector_matrix_matches_kron_oracle(self):
        params = XorXParams(lam=0.8, delta=0.3, j=0.6, n=4)
        op = models.build_xorx(params, SectorConstraint.frozen_boundary(4))
        full = oracles.xorx_full(4, 0.8, 0.3, 0.6)
        expected = oracles.sector_project(full, oracles.frozen_configs(4))
        assert np.allclose(dense(op), expected, atol=1e-14)

    def test_n6_sector_matrix_matches_kron_oracle(self):
        params = XorXParams(lam=1.3, delta=-0.4, j=0.9, n=6)
        op = models.build_xorx(params, SectorConstraint.frozen_boundary(6))
        full = oracles.xorx_full(6, 1.3, -0.4, 0.9)
        expected = oracles.sector_project(full, oracles.frozen_configs(6))
        assert np.allclose(dense(op), expected, atol=1e-14)

    def test_vacuum_diagonal_entry(self):
        n, delta, j = 8, 0.25, 0.75
        op = models.build_xorx(
            XorXParams(lam=1.0, delta=delta, j=j, n=n),
            SectorConstraint.frozen_boundary(n),
        )
        idx = op.basis.index_of(0)
        assert dense(op)[idx, idx] == pytest.approx(-n * delta + (n - 1) * j)

    def test_domain_wall_number_conserved(self):
        op = models.build_xorx(
            XorXParams(lam=1.0, delta=0.1, j=1.0, n=8),
            SectorConstraint.frozen_boundary(8),
        )
        dw = models.domain_wall_operator(op.basis)
        assert op.commutator_norm(dw) == 0.0

    def test_builds_inside_fixed_dw_sector_without_escape(self):
        op = models.build_xorx(
            XorXParams(lam=1.0, delta=0.1, j=1.0, n=10),
            SectorConstraint.domain_wall(10, 2),
        )
        assert op.dim == build_sector(10, SectorConstraint.domain_wall(10, 2)).dim


class TestExactScar:
    def test_m0_is_vacuum(self):
        basis = build_sector(6, SectorConstraint.frozen_boundary(6))
        s0 = models.exact_scar(0, 6, basis)
        assert s0.amplitudes[basis.index_of(0)] == pytest.approx(1.0)

    def test_m1_n6_alternating_half_amplitudes(self):
        basis = build_sector(6, SectorConstraint.frozen_boundary(6))
        s1 = models.exact_scar(1, 6, basis)
        amps = {int(basis.configs[i]): s1.amplitudes[i]
                for i in np.nonzero(s1.amplitudes)[0]}
        # bulk sites 1..4; sign (-1)^(site+1), magnitude 1/2
        assert amps == {
            1 << 1: pytest.approx(0.5),
            1 << 2: pytest.approx(-0.5),
            1 << 3: pytest.approx(0.5),
            1 << 4: pytest.approx(-0.5),
        }

    def test_matches_kron_oracle(self):
        n = 8
        basis = build_sector(n, SectorConstraint.frozen_boundary(n))
        for m in range(1, 4):
            ours = models.exact_scar(m, n, basis).embed_full()
            ref = oracles.scar_full(m, n)
            phase = np.vdot(ref, ours)
            assert abs(abs(phase) - 1.0) < 1e-12
            assert np.allclose(ours, phase * ref, atol=1e-12)

    def test_m2_n12_eigenstate_variance(self):
        n = 12
        op = models.build_xorx(
            XorXParams(lam=1.0, delta=0.1, j=1.0, n=n),
            SectorConstraint.frozen_boundary(n),
        )
        s2 = models.exact_scar(2, n, op.basis)
        h = op.matrix
        v = s2.amplitudes
        e = float(np.real(np.vdot(v, h @ v)))
        var = float(np.real(np.vdot(h @ v, h @ v))) - e**2
        assert var < 1e-20

    def test_parameter_independence_residuals(self):
        n = 8
        basis = build_sector(n, SectorConstraint.frozen_boundary(n))
        tower = models.scar_tower(n, basis)
        rng = np.random.default_rng(42)
        for _ in range(5):
            lam, delta, j = rng.uniform(-2, 2, size=3)
            op = models.build_xorx(XorXParams(lam=lam, delta=delta, j=j, n=n),
                                   basis.constraint)
            for s in tower:
                v = s.amplitudes
                e = float(np.real(np.vdot(v, op.matrix @ v)))
                assert np.linalg.norm(op.matrix @ v - e * v) < 1e-10

    def test_tower_orthonormal(self):
        basis = build_sector(10, SectorConstraint.frozen_boundary(10))
        tower = models.scar_tower(10, basis)
        mat = np.stack([s.amplitudes for s in tower], axis=1)
        gram = mat.conj().T @ mat
        assert np.allclose(gram, np.eye(len(tower)), atol=1e-10)

    def test_tower_extent_and_annihilation(self):
        basis = build_sector(8, SectorConstraint.frozen_boundary(8))
        tower = models.scar_tower(8, basis)
        assert len(tower) == 4  # m = 0..3 for 6 bulk sites
        with pytest.raises(ZeroStateError):
            models.exact_scar(4, 8, basis)

    def test_equal_energy_spacing(self):
        n, delta, j = 10, 0.35, 0.8
        op = models.build_xorx(XorXParams(lam=1.1, delta=delta, j=j, n=n),
                               SectorConstraint.frozen_boundary(n))
        tower = models.scar_tower(n, op.basis)
        energies = [op.expectation(s) for s in tower]
        spacings = np.diff(energies)
        assert np.allclose(spacings, spacings[0], atol=1e-10)
        assert spacings[0] == pytest.approx(2 * delta - 4 * j)


class TestPXP:
    def test_n4_blockade_matrix_matches_kron_oracle(self):
        params = PXPParams(omega=1.4, n=4)
        op = models.build_pxp(params, SectorConstraint.rydberg_blockade(4))
        full = oracles.pxp_full(4, 1.4)
        configs = [b for b in range(16)
                   if not any((b >> i) & 1 and (b >> (i + 1)) & 1 for i in range(3))]
        expected = oracles.sector_project(full, configs)
        assert np.allclose(dense(op), expected, atol=1e-14)

    def test_zero_perturbation_reduces_to_pxp(self):
        sec = SectorConstraint.rydberg_blockade(8)
        plain = models.build_pxp(PXPParams(omega=1.0, n=8), sec)
        for kind in ("pxpz", "staggered", "uniform"):
            pert = models.build_pxp(
                PXPParams(omega=1.0, n=8, perturbation=kind, perturbation_strength=0.0),
                sec,
            )
            assert (abs(plain.matrix - pert.matrix).max() if
                    (plain.matrix - pert.matrix).nnz else 0.0) == 0.0

    def test_staggered_diagonal_on_neel(self):
        n, lam = 8, 0.3
        sec = SectorConstraint.rydberg_blockade(n)
        op = models.build_pxp(
            PXPParams(omega=1.0, n=n, perturbation="staggered", perturbation_strength=lam),
            sec,
        )
        z2 = models.reference_state("z2", op.basis)
        base = models.build_pxp(PXPParams(omega=1.0, n=n), sec)
        # paper 1-based (-1)^i with sigma_z = +1 on up spins at 0-based even sites
        expected = lam * sum((-1) ** (i + 1) * (1 if i % 2 == 0 else -1) for i in range(n))
        assert op.expectation(z2) - base.expectation(z2) == pytest.approx(expected)

    def test_boundary_variants_stay_in_sector(self):
        for boundary in ("open", "open_with_boundary_terms"):
            op = models.build_pxp(
                PXPParams(omega=1.0, n=8, boundary=boundary),
                SectorConstraint.rydberg_blockade(8),
            )
            assert op.dim > 0
        op = models.build_pxp(
            PXPParams(omega=1.0, n=8, boundary="periodic"),
            SectorConstraint.rydberg_blockade(8, periodic=True),
        )
        assert op.dim > 0


class TestSSH:
    def test_single_excitation_tridiagonal(self):
        op = models.build_ssh(
            SSHParams(j_even=0.7, j_odd=1.2, j_nnn=0.0, n=4),
            SectorConstraint.magnetization(4, 1),
        )
        expected = np.zeros((4, 4))
        expected[0, 1] = expected[1, 0] = 0.7
        expected[1, 2] = expected[2, 1] = 1.2
        expected[2, 3] = expected[3, 2] = 0.7
        assert np.allclose(dense(op), expected, atol=1e-14)

    def test_matches_kron_oracle_full_space(self):
        params = SSHParams(j_even=0.9, j_odd=1.1, j_nnn=0.2, n=8)
        op = models.build_ssh(params, SectorConstraint.full_space(8))
        expected = oracles.ssh_full(8, 0.9, 1.1, 0.2)
        assert np.allclose(dense(op), expected, atol=1e-14)

    def test_all_zero_couplings_zero_operator(self):
        op = models.build_ssh(
            SSHParams(j_even=0.0, j_odd=0.0, j_nnn=0.0, n=8),
            SectorConstraint.magnetization(8, 2),
        )
        assert op.matrix.nnz == 0

    def test_z1001_expectation_vanishes(self):
        op = models.build_ssh(
            SSHParams(j_even=1.0, j_odd=1.0, j_nnn=0.1, n=8),
            SectorConstraint.magnetization(8, 4),
        )
        z = models.reference_state("z1001", op.basis)
        assert op.expectation(z) == pytest.approx(0.0, abs=1e-14)

    def test_magnetization_conserved(self):
        full = oracles.ssh_full(8, 1.0, 1.0, 0.1)
        sz_total = sum(oracles.site_operator(8, {i: oracles.SZ}) for i in range(8))
        assert np.abs(full @ sz_total - sz_total @ full).max() < 1e-13


class TestReferenceStates:
    def test_all_zero_is_vacuum_basis_vector(self):
        basis = build_sector(6, SectorConstraint.frozen_boundary(6))
        psi = models.reference_state("all_zero", basis)
        assert psi.amplitudes[basis.index_of(0)] == pytest.approx(1.0)

    def test_z2_tie_break_bit0_up(self):
        assert models.reference_bits("z2", 6) == 0b010101
        assert models.reference_bits("z2_alt", 6) == 0b101010

    def test_z1001_pattern(self):
        assert models.reference_bits("z1001", 8) == 0b10011001

    def test_reference_outside_sector_raises(self):
        basis = build_sector(6, SectorConstraint.frozen_boundary(6))
        with pytest.raises(NotInSectorError):
            models.reference_state("z2", basis)
