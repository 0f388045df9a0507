import numpy as np
import pytest
import scipy.linalg

from scarlab import dynamics, models, spectra
from scarlab.errors import SectorMismatchError
from scarlab.hilbert import SectorConstraint, StateVector, build_sector
from scarlab.models import XorXParams


@pytest.fixture(scope="module")
def xorx8():
    op = models.build_xorx(
        XorXParams(lam=1.0, delta=0.1, j=1.0, n=8),
        SectorConstraint.frozen_boundary(8),
    )
    return op, spectra.diagonalize(op)


def test_evolve_matches_expm_oracle(xorx8):
    op, eigs = xorx8
    rng = np.random.default_rng(4)
    amps = rng.normal(size=eigs.dim) + 1j * rng.normal(size=eigs.dim)
    psi0 = StateVector(op.basis, amps / np.linalg.norm(amps))
    t = 1.37
    prop = scipy.linalg.expm(-1j * op.to_dense() * t)
    expected = prop @ psi0.amplitudes
    got = dynamics.evolve(eigs, psi0, t).amplitudes
    assert np.abs(got - expected).max() < 1e-10


def test_evolve_zero_time_identity(xorx8):
    op, eigs = xorx8
    psi0 = models.reference_state("all_zero", op.basis)
    psi_t = dynamics.evolve(eigs, psi0, 0.0)
    assert np.abs(psi_t.amplitudes - psi0.amplitudes).max() < 1e-12


def test_evolve_norm_preserved(xorx8):
    op, eigs = xorx8
    psi0 = StateVector.basis_state(op.basis, 0b01100110)
    for t in (0.5, 3.0, 20.0):
        assert dynamics.evolve(eigs, psi0, t).norm() == pytest.approx(1.0, abs=1e-12)


def test_eigenstate_fidelity_constant_one(xorx8):
    _, eigs = xorx8
    times = np.linspace(0.0, 50.0, 101)
    curve = dynamics.revival_curve(eigs, eigs.state(13), times)
    assert np.abs(curve.fidelity - 1.0).max() < 1e-10


def test_two_eigenstate_closed_form(xorx8):
    # equal superposition of two eigenstates: F(t) = cos^2(dE t / 2)
    _, eigs = xorx8
    i, j = 4, 29
    psi0 = dynamics.equal_superposition(eigs, np.array([i, j]))
    de = eigs.energies[j] - eigs.energies[i]
    times = np.linspace(0.0, 4 * np.pi / abs(de), 257)
    curve = dynamics.revival_curve(eigs, psi0, times)
    assert np.abs(curve.fidelity - np.cos(de * times / 2.0) ** 2).max() < 1e-10


def test_revival_curve_matches_evolve(xorx8):
    op, eigs = xorx8
    psi0 = StateVector.basis_state(op.basis, 0b01100110)
    times = np.linspace(0.0, 10.0, 21)
    curve = dynamics.revival_curve(eigs, psi0, times)
    direct = [
        abs(psi0.dot(dynamics.evolve(eigs, psi0, t))) ** 2 for t in times
    ]
    assert np.abs(curve.fidelity - np.array(direct)).max() < 1e-10


def test_scar_tower_superposition_revives_at_tower_period():
    n = 10
    op = models.build_xorx(
        XorXParams(lam=1.0, delta=0.1, j=1.0, n=n),
        SectorConstraint.frozen_boundary(n),
    )
    eigs = spectra.diagonalize(op)
    tower = models.scar_tower(n, op.basis)
    idx = np.array(
        [int(np.argmax(np.abs(eigs.states.conj().T @ s.amplitudes) ** 2)) for s in tower]
    )
    psi0 = dynamics.equal_superposition(eigs, idx)
    spacing = abs(2 * 0.1 - 4 * 1.0)  # equal tower spacing |2*delta - 4*j|
    period = 2 * np.pi / spacing
    curve = dynamics.revival_curve(eigs, psi0, np.array([period, 2 * period]))
    assert np.all(curve.fidelity > 1.0 - 1e-8)
    mid = dynamics.revival_curve(eigs, psi0, np.array([period / 2.0]))
    assert mid.fidelity[0] < 0.5


def test_thermal_state_decays_without_full_revival(xorx8):
    op, eigs = xorx8
    rng = np.random.default_rng(11)
    # superposition of eigenstates from the dense middle of the spectrum
    mid = np.arange(eigs.dim // 2 - 8, eigs.dim // 2 + 8)
    idx = rng.choice(mid, size=6, replace=False)
    psi0 = dynamics.equal_superposition(eigs, idx)
    times = np.linspace(0.5, 100.0, 400)
    curve = dynamics.revival_curve(eigs, psi0, times)
    assert curve.fidelity[times > 5.0].max() < 0.999


def test_equal_superposition_normalized(xorx8):
    _, eigs = xorx8
    psi = dynamics.equal_superposition(eigs, np.array([0, 3, 9]))
    assert psi.norm() == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        dynamics.equal_superposition(eigs, np.array([], dtype=int))


def test_sector_mismatch_rejected(xorx8):
    _, eigs = xorx8
    other = build_sector(8, SectorConstraint.domain_wall(8, 2))
    psi = StateVector.basis_state(other, int(other.configs[0]))
    with pytest.raises(SectorMismatchError):
        dynamics.evolve(eigs, psi, 1.0)
    with pytest.raises(SectorMismatchError):
        dynamics.revival_curve(eigs, psi, np.array([0.0]))
