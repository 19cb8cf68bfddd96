"""Tests for the short propagator, the dipole propagator, and decay rates."""

import numpy as np
import pytest

from atomlight.errors import OutsideDomain, ZeroSeparation
from atomlight.medium import cross_matrix
from atomlight.propagator import (GreensSum, coordinate_free_short_propagator,
                                  dipole_propagator, dipole_propagator_kspace,
                                  dipole_self_term, greens_reciprocity_residual,
                                  light_decay_matrix, short_propagator_closed,
                                  short_propagator_quadrature, spin_decay_rates,
                                  symmetric_k_grid)

RNG = np.random.default_rng(11)


def rel_dev(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


class TestShortPropagator:
    def test_closed_vs_quadrature(self):
        for a1 in np.linspace(0.05, 0.8, 8):
            for a0 in np.linspace(a1 + 0.1, a1 + 2.0, 8):
                closed = short_propagator_closed(a0, a1, 1.0)
                quad = short_propagator_quadrature(a0, a1, 1.0)
                for name in ("rho_par", "rho_perp", "rho_gamma"):
                    assert rel_dev(getattr(closed, name),
                                   getattr(quad, name)) < 1e-10, (a0, a1, name)

    def test_isotropic_limit(self):
        c = short_propagator_closed(1.0, 0.0, 1.0)
        assert abs(c.rho_par - 1.0 / (3.0 * np.pi)) < 1e-15
        assert c.rho_perp == c.rho_par
        assert c.rho_gamma == 0.0
        # scaling in a0 and k_L
        c2 = short_propagator_closed(2.0, 0.0, 3.0)
        assert c2.rho_par == pytest.approx(27.0 / (3.0 * np.pi) * 2.0**-2.5,
                                           rel=1e-14)

    def test_quadrature_isotropic(self):
        q = short_propagator_quadrature(1.0, 0.0, 1.0)
        assert abs(q.rho_par - 1.0 / (3.0 * np.pi)) < 1e-14
        assert abs(q.rho_gamma) < 1e-16

    def test_rho_gamma_monotone_from_zero(self):
        vals = [short_propagator_closed(1.5, a1, 1.0).rho_gamma
                for a1 in np.linspace(0.0, 1.0, 21)]
        assert vals[0] == 0.0
        diffs = np.diff(vals)
        assert np.all(diffs < 0.0) or np.all(diffs > 0.0)

    def test_outside_domain(self):
        with pytest.raises(OutsideDomain):
            short_propagator_closed(1.0, 1.0, 1.0)
        with pytest.raises(OutsideDomain):
            short_propagator_closed(1.0, -0.1, 1.0)

    def test_near_singular_flag(self):
        assert short_propagator_closed(1.0, 0.97, 1.0).near_singular
        assert not short_propagator_closed(1.0, 0.5, 1.0).near_singular

    def test_minimum_quadrature_points(self):
        with pytest.raises(ValueError):
            short_propagator_quadrature(1.0, 0.1, 1.0, n_points=32)

    def test_coordinate_free_assembly(self):
        c = short_propagator_closed(1.2, 0.4, 1.0)
        M = coordinate_free_short_propagator(c, [0.0, 0.0, 1.0])
        assert M[2, 2] == pytest.approx(c.rho_par, rel=1e-14)
        assert M[0, 0] == pytest.approx(c.rho_perp, rel=1e-14)
        assert M[0, 1] == pytest.approx(1j * c.rho_gamma, rel=1e-14)
        assert np.max(np.abs(M - M.conj().T)) < 1e-15

    def test_coordinate_free_covariance(self):
        # Rotating j_hat conjugates the matrix by the same rotation.
        c = short_propagator_closed(1.1, 0.3, 1.0)
        theta = 0.7
        R = np.array([[np.cos(theta), 0.0, np.sin(theta)],
                      [0.0, 1.0, 0.0],
                      [-np.sin(theta), 0.0, np.cos(theta)]])
        j = np.array([0.0, 0.0, 1.0])
        M1 = coordinate_free_short_propagator(c, R @ j)
        M2 = R @ coordinate_free_short_propagator(c, j) @ R.T
        assert np.max(np.abs(M1 - M2)) < 1e-14


class TestDipolePropagator:
    def test_zero_separation(self):
        with pytest.raises(ZeroSeparation):
            dipole_propagator([0.0, 0.0, 0.0], 1.0)

    def test_self_term(self):
        assert dipole_self_term() == 2.0 / 3.0

    def test_symmetry_under_inversion(self):
        n = np.array([0.3, -0.2, 0.9])
        G1 = dipole_propagator(n, 2.0)
        G2 = dipole_propagator(-n, 2.0)
        assert np.max(np.abs(G1 - G2)) < 1e-15

    def test_far_field_transverse(self):
        # At kn >> 1 the propagator is transverse to n_hat to O(1/kn).
        n = np.array([0.0, 0.0, 50.0])
        G = dipole_propagator(n, 10.0)
        assert abs(G[2, 2]) < abs(G[0, 0]) / 100.0

    def test_kspace_oracle(self):
        for n_vec in ([0.0, 0.0, 5.0], [3.0, 4.0, 0.0]):
            k_L = 1.0
            direct = dipole_propagator(n_vec, k_L)
            oracle = dipole_propagator_kspace(n_vec, k_L, k_max=200.0,
                                              n_radial=200_000)
            scale = np.max(np.abs(direct))
            assert np.max(np.abs(direct - oracle)) / scale < 1e-4


class TestGreensSum:
    def test_reciprocity(self):
        grid, weights = symmetric_k_grid(9, 3.0)
        gsum = GreensSum(k_grid=grid, weights=weights, omega_L=2.0)
        pairs = [(RNG.normal(size=3), float(RNG.uniform(0.1, 1.0)),
                  RNG.normal(size=3), float(RNG.uniform(-1.0, 0.0)))
                 for _ in range(10)]
        assert greens_reciprocity_residual(gsum, pairs) < 1e-10

    def test_causality(self):
        grid, weights = symmetric_k_grid(5, 2.0)
        gsum = GreensSum(k_grid=grid, weights=weights, omega_L=1.0)
        assert gsum.evaluate([0, 0, 0], 0.0, [0, 0, 0], 1.0) == 0.0


class TestDecay:
    def test_light_decay_hermitian(self):
        c = short_propagator_closed(1.2, 0.3, 1.0)
        dm = light_decay_matrix(c, c0=1.0, c1=0.7, J=[0.5, 0.0, 0.0])
        M = dm.matrix
        assert np.max(np.abs(M - M.conj().T)) < 1e-15

    def test_light_decay_scalar_limit(self):
        # c1 = 0: decay is isotropic in the (y,z) block with Gamma from
        # the scalar channel only.
        c = short_propagator_closed(1.2, 0.3, 1.0)
        dm = light_decay_matrix(c, c0=1.0, c1=0.0, J=[0.5, 0.0, 0.0])
        jsq = 0.25
        assert dm.Gamma_par == pytest.approx(jsq**2 * c.rho_par, rel=1e-14)
        assert dm.Gamma_perp1 == dm.Gamma_perp2
        assert dm.Gamma_Gamma == pytest.approx(jsq * c.rho_gamma, rel=1e-14)

    def test_spin_decay_ratio(self):
        c = short_propagator_closed(1.0, 0.0, 1.0)
        gx, gy, gz = spin_decay_rates(c, c1=0.8, beta=0.01, D_intensity=2.0)
        assert gx == 2.0 * gy
        assert gy == gz
        assert gy == pytest.approx(0.01**2 * 0.64 * c.rho_perp * 2.0,
                                   rel=1e-14)
