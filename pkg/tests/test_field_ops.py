import math

import numpy as np
import pytest

from zslice import field_ops as fo
from zslice.dispersion import MassParam, MomentumTriple, SpatialMomentum
from zslice.operators import hermiticity_defect, off_corner_residual

M = MassParam(1.0)


def test_phi_grid_construction():
    g = fo.SiteGrid(8, 4.0)
    phi = np.asarray(fo.build_phi_grid(g))
    np.testing.assert_array_equal(phi, np.diag(np.arange(-4.0, 4.0)))
    assert hermiticity_defect(phi) == 0
    assert len(set(np.diag(phi).real)) == 8


@pytest.mark.parametrize("n", [6, 12, 4])
def test_grid_size_validation(n):
    with pytest.raises(ValueError):
        fo.SiteGrid(n, 1.0)


def test_pi_grid_plane_wave_eigenvector():
    g = fo.SiteGrid(64, 4.0)
    pi = np.asarray(fo.build_pi_grid(g))
    for j in (1, 5, -7, 20):
        k0 = 2 * np.pi * j / (g.n_phi * g.spacing)
        psi = fo.plane_wave(g, k0)
        assert np.linalg.norm(pi @ psi - k0 * psi) <= 1e-10 * np.linalg.norm(psi)


def test_pi_grid_hermitian_real_expectation_and_constant():
    g = fo.SiteGrid(32, 3.0)
    pi = np.asarray(fo.build_pi_grid(g))
    assert hermiticity_defect(pi) == 0
    rng = np.random.Generator(np.random.Philox(3))
    psi = rng.standard_normal(32)
    psi /= np.linalg.norm(psi)
    assert abs(np.vdot(psi, pi @ psi).imag) <= 1e-14
    assert np.max(np.abs(pi @ np.ones(32))) <= 1e-13


def test_fock_canonical_commutator():
    phi, pi = fo.build_phi_pi_fock(1.3, 16)
    assert fo.canonical_commutator_residual_fock(phi, pi) <= 1e-12
    assert hermiticity_defect(phi) == 0 and hermiticity_defect(pi) == 0


def test_fock_hamiltonian_spectrum():
    w = 1.7
    phi, pi = fo.build_phi_pi_fock(w, 12)
    phi, pi = np.asarray(phi), np.asarray(pi)
    h = (pi @ pi + w**2 * phi @ phi) / 2
    assert off_corner_residual(h - np.diag(w * (np.arange(12) + 0.5)), (12,)) <= 1e-12


def test_grid_canonical_commutator():
    g = fo.SiteGrid(64, 4.0)
    vecs = fo.band_limited_packets(g, 32, np.random.Generator(np.random.Philox(0)))
    assert fo.canonical_commutator_residual_grid(g, vecs) <= 1e-8


def test_grid_commutator_fails_on_rough_vectors():
    # the identity is a statement about smooth wavefunctionals only
    g = fo.SiteGrid(64, 4.0)
    rough = np.random.Generator(np.random.Philox(1)).standard_normal((64, 4))
    assert fo.canonical_commutator_residual_grid(g, rough) > 1.0


def test_build_h_modes_spectrum():
    h = np.asarray(fo.build_H_modes([SpatialMomentum(0, 0, 0)], M, 8))
    assert hermiticity_defect(h) == 0
    np.testing.assert_allclose(np.linalg.eigvalsh(h)[:6], np.arange(6) + 0.5, atol=1e-14)


def test_evolution_commutators_single_p1_mode():
    k = MomentumTriple(0, 0, 2)
    lam = math.sqrt(3)
    phi, pi = fo.build_phi_pi_fock(lam, 16)
    h = np.diag(lam * (np.arange(16) + 0.5))
    hp = fo.build_Hprime_modes([k], M, 16)
    rep = fo.check_evolution_commutators(phi, pi, h=h, hprime=hp)
    assert rep.t_residual <= 1e-10 and rep.z_residual <= 1e-10
    assert rep.passed()
    # H' drives phi with the opposite sign: using it as a t-generator fails badly
    assert fo.check_evolution_commutators(phi, pi, h=hp).t_residual > 1.0


def test_i_h_phi_is_pi_for_mode_hamiltonian():
    phi, pi = fo.build_phi_pi_fock(1.0, 8)
    h = fo.build_H_modes([SpatialMomentum(0, 0, 0)], M, 8)
    assert fo.check_evolution_commutators(phi, pi, h=h).t_residual <= 1e-12


def test_zero_matrices_zero_residual():
    z = np.zeros((6, 6))
    rep = fo.check_evolution_commutators(z, z, h=z, hprime=z)
    assert rep.t_residual == 0 and rep.z_residual == 0


def test_dimension_mismatch():
    phi, pi = fo.build_phi_pi_fock(1.0, 8)
    with pytest.raises(ValueError):
        fo.check_evolution_commutators(phi, pi, h=np.eye(4))


def test_hprime_all_p1_is_hermitian():
    hp = fo.build_Hprime_modes([MomentumTriple(0, 0, 2), MomentumTriple(0.5, 0, 3)], M, 4)
    assert hermiticity_defect(hp) == 0
