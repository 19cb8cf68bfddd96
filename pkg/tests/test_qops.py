"""Tests for the quadratic operator algebra and perturbative terms."""

import itertools

import numpy as np
import pytest

from atomlight.errors import BasisMismatch
from atomlight.modes import HermiteGaussMode, make_grid
from atomlight.qops import (PolarizedModeBasis, QuadraticOperator, commutator,
                            s2c_coefficient, spin_first_order,
                            spin_incoherent_rate, spin_second_order_B,
                            spin_second_order_A_single_mode, stokes_field,
                            stokes_first_order, stokes_mode_pair,
                            stokes_second_order_terms, export_operator_csv)

RNG = np.random.default_rng(3)

QX, QY = (0, "x"), (0, "y")


def stokes_from_generator(basis, G, m=0, mp=0):
    """Assemble (s1, s2, s3) coefficient matrices from generator elements."""
    qx, qy = (m, "x"), (mp, "y")
    s1 = 0.5 * (G[(qx, qx)].coeff - G[(qy, qy)].coeff)
    s2 = 0.5 * (G[(qx, qy)].coeff + G[(qy, qx)].coeff)
    s3 = (0.5 / 1j) * (G[(qx, qy)].coeff - G[(qy, qx)].coeff)
    return s1, s2, s3


class TestAlgebra:
    def test_su2_random_pairs(self):
        basis = PolarizedModeBasis(n_modes=4, k=1.0)
        eps = {(0, 1): 1, (1, 2): 1, (2, 0): 1,
               (1, 0): -1, (2, 1): -1, (0, 2): -1}
        for _ in range(50):
            m, mp = RNG.integers(0, 4, 2)
            s = stokes_mode_pair(basis, int(m), int(mp))
            for (a, b), sign in eps.items():
                c = 3 - a - b
                res = commutator(s[a], s[b]).coeff - sign * 1j * s[c].coeff
                assert np.max(np.abs(res)) < 1e-13

    def test_hermitian(self):
        basis = PolarizedModeBasis(n_modes=2, k=1.0)
        for op in stokes_mode_pair(basis, 0, 1):
            assert op.is_hermitian()

    def test_basis_mismatch(self):
        b1 = PolarizedModeBasis(n_modes=1, k=1.0)
        b2 = PolarizedModeBasis(n_modes=2, k=1.0)
        s1a, _, _ = stokes_mode_pair(b1, 0, 0)
        s1b, _, _ = stokes_mode_pair(b2, 0, 0)
        with pytest.raises(BasisMismatch):
            commutator(s1a, s1b)
        with pytest.raises(BasisMismatch):
            s1a + s1b

    def test_expectation_number(self):
        basis = PolarizedModeBasis(n_modes=1, k=1.0)
        s1, _, _ = stokes_mode_pair(basis, 0, 0)
        assert s1.expectation_number([3.0, 1.0]) == pytest.approx(1.0)

    def test_scalar_arithmetic(self):
        basis = PolarizedModeBasis(n_modes=1, k=1.0)
        s1, s2, _ = stokes_mode_pair(basis, 0, 0)
        combo = 2.0 * s1 - s2
        assert np.allclose(combo.coeff, 2.0 * s1.coeff - s2.coeff)

    def test_csv_export(self, tmp_path):
        basis = PolarizedModeBasis(n_modes=1, k=1.0)
        s1, _, _ = stokes_mode_pair(basis, 0, 0)
        path = tmp_path / "s1.csv"
        export_operator_csv(path, s1)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "row,col,Re,Im"
        assert len(lines) == 5


class TestStokesField:
    def test_integrated_field_matches_mode_ops(self):
        k, w0 = 200.0, 1.0
        basis = PolarizedModeBasis(n_modes=2, k=k)
        modes = [HermiteGaussMode(0, 0, k, w0), HermiteGaussMode(1, 0, k, w0)]
        grid = make_grid(w0, extent_factor=7.0, n=128)
        field = stokes_field(basis, modes, grid)
        # int s1 d2r = sum_m s1^{mm} by mode orthonormality.
        expect = sum(stokes_mode_pair(basis, m, m)[0].coeff for m in range(2))
        got = field.integrate("s1").coeff
        assert np.max(np.abs(got - expect)) < 1e-6

    def test_pointwise_hermitian(self):
        k, w0 = 200.0, 1.0
        basis = PolarizedModeBasis(n_modes=2, k=k)
        modes = [HermiteGaussMode(0, 0, k, w0), HermiteGaussMode(0, 1, k, w0)]
        grid = make_grid(w0, n=32)
        field = stokes_field(basis, modes, grid, z=0.3)
        for name in ("s0", "s1", "s2", "s3"):
            f = getattr(field, name)
            assert np.max(np.abs(f - np.conj(np.swapaxes(f, 2, 3)))) < 1e-13


class TestFirstOrder:
    def test_single_mode_rotation(self):
        basis = PolarizedModeBasis(n_modes=1, k=2.0)
        k_L, beta, c1, w = 2.0, 0.05, 0.8, 1.7
        phi = k_L * beta * c1 * w
        G = stokes_first_order(basis, np.array([[w]]), k_L, beta, c1)
        s1, s2, s3 = stokes_mode_pair(basis, 0, 0)
        d1, d2, d3 = stokes_from_generator(basis, G)
        assert np.max(np.abs(d1 + phi * s2.coeff)) < 1e-15
        assert np.max(np.abs(d2 - phi * s1.coeff)) < 1e-15
        assert np.max(np.abs(d3)) == 0.0

    def test_multimode_hermitian_pairing(self):
        # G[q', q] must be the dagger of G[q, q'] for Hermitian W.
        basis = PolarizedModeBasis(n_modes=2, k=1.0)
        A = RNG.normal(size=(2, 2)) + 1j * RNG.normal(size=(2, 2))
        W = A + A.conj().T
        G = stokes_first_order(basis, W, 1.0, 0.1, 1.0)
        for q in basis.labels():
            for qp in basis.labels():
                assert np.max(np.abs(G[(q, qp)].coeff
                                     - G[(qp, q)].coeff.conj().T)) < 1e-14


class TestSecondOrder:
    def test_single_mode_reduction(self):
        basis = PolarizedModeBasis(n_modes=1, k=2.0)
        k_L, beta, c1, w = 2.0, 0.05, 0.8, 1.7
        phi = k_L * beta * c1 * w
        T = stokes_second_order_terms(basis, np.array([[w]]), k_L, beta, c1)
        G = {key: QuadraticOperator(basis,
                                    T["S2_A"][key].coeff + T["S2_B"][key].coeff)
             for key in T["S2_A"]}
        s1, s2, s3 = stokes_mode_pair(basis, 0, 0)
        d1, d2, d3 = stokes_from_generator(basis, G)
        assert np.max(np.abs(d1 + 0.5 * phi**2 * s1.coeff)) < 1e-12
        assert np.max(np.abs(d2 + 0.5 * phi**2 * s2.coeff)) < 1e-12
        assert np.max(np.abs(d3)) < 1e-15

    def test_s2c_contraction_zero(self):
        for _ in range(5):
            J = RNG.normal(size=3)
            total = 0.0
            for j, l, lp, lpp in itertools.product("xy", repeat=4):
                total += abs(s2c_coefficient(J, j, l, lp, lpp))
            assert total == 0.0

    def test_s2c_nonzero_outside_transverse(self):
        # Sanity: with a z index the coefficient need not vanish.
        frames = {"x": np.array([1.0, 0.0, 0.0]),
                  "y": np.array([0.0, 1.0, 0.0]),
                  "z": np.array([0.0, 0.0, 1.0])}
        val = s2c_coefficient([0.0, 1.0, 0.0], "z", "y", "x", "y",
                              frames=frames)
        assert abs(val) > 0.0

    def test_s2d_quartic_weights(self):
        basis = PolarizedModeBasis(n_modes=1, k=1.0)
        Q = np.zeros((1, 1, 1, 1, 2))
        Q[0, 0, 0, 0] = (0.5, 2.0)    # (Jz^2-weighted, J^4-weighted)
        T = stokes_second_order_terms(basis, np.array([[1.0]]), 1.0, 0.1, 0.8,
                                      c0=0.3, quartic_weights=Q)
        key = (QX, QX)
        cd = T["S2_D"][key].coeff
        # j=l=x picks only the c0 delta channel.
        assert cd[basis.index(0, "x"), basis.index(0, "x")] == pytest.approx(
            (0.5 * 1.0 * 0.1)**2 * 0.3**2 * 2.0, rel=1e-14)
        # xi_xy * xi_xy channel carries the c1 weight.
        assert cd[basis.index(0, "y"), basis.index(0, "y")] == pytest.approx(
            (0.5 * 1.0 * 0.1)**2 * 0.8**2 * 0.5, rel=1e-14)


class TestSpinTerms:
    def test_first_order_orthogonal_to_axis(self):
        basis = PolarizedModeBasis(n_modes=2, k=1.0)
        Psi = RNG.normal(size=(2, 2)) + 1j * RNG.normal(size=(2, 2))
        J = np.array([0.4, -0.2, 0.3])
        res = spin_first_order(basis, Psi, J, 1.0, 0.1, 0.9)
        assert res.order == 1
        # every operator component along e_z vanishes
        assert np.max(np.abs(res.value[2])) == 0.0

    def test_first_order_single_mode_rotation_generator(self):
        # Real Psi: only the s3 channel contributes.
        basis = PolarizedModeBasis(n_modes=1, k=1.0)
        res = spin_first_order(basis, np.array([[2.0]]), [1.0, 0.0, 0.0],
                               k_L=1.0, beta=0.1, c1=0.5)
        _, _, s3 = stokes_mode_pair(basis, 0, 0)
        expect = -0.1 * 0.5 * 2.0 * np.cross([1.0, 0.0, 0.0], [0.0, 0.0, 1.0])
        assert np.max(np.abs(res.value[1] - expect[1] * s3.coeff)) < 1e-15

    def test_second_order_A_vanishes_for_real_overlaps(self):
        basis = PolarizedModeBasis(n_modes=2, k=1.0)
        Psi = RNG.normal(size=(2, 2))
        res = spin_second_order_A_single_mode(
            basis, Psi.astype(complex), Psi.astype(complex),
            [1.0, 0.0, 0.0], 0.3, 1.0, 1.0, 0.1, 0.9)
        assert np.max(np.abs(res.value)) == 0.0

    def test_second_order_B_direction_transverse(self):
        basis = PolarizedModeBasis(n_modes=1, k=1.0)
        P = np.ones((1, 1, 1, 1), dtype=complex)
        direction, T = spin_second_order_B(basis, P, [0.3, 0.2, 0.9],
                                           1.0, 0.1, 0.8)
        assert direction[2] == 0.0
        assert np.max(np.abs(T)) > 0.0
        # structure: the a*x a*y a_y a_x slot carries twice the weight
        ix, iy = basis.index(0, "x"), basis.index(0, "y")
        assert T[ix, iy, iy, ix] == pytest.approx(-2.0 * T[iy, iy, ix, ix])

    def test_incoherent_isotropic_2_1_1(self):
        rho = 0.7
        A = rho * np.eye(3)
        intensity = np.diag([3.0, 0.0, 0.0])    # x-polarized drive
        J = np.array([0.4, 0.3, -0.2])
        rate = spin_incoherent_rate(A, intensity, J, c0=1.3, c1=0.8, beta=0.05)
        g = 0.05**2 * 0.8**2 * rho * 3.0
        assert rate[0] == pytest.approx(-2.0 * g * J[0], rel=1e-13)
        assert rate[1] == pytest.approx(-g * J[1], rel=1e-13)
        assert rate[2] == pytest.approx(-g * J[2], rel=1e-13)

    def test_incoherent_cross_terms_cancel_isotropically(self):
        # The c0*c1 channel must vanish for any isotropic A.
        A = 1.3 * np.eye(3)
        intensity = RNG.normal(size=(3, 3))
        intensity = intensity @ intensity.T
        J = RNG.normal(size=3)
        with_cross = spin_incoherent_rate(A, intensity, J, 2.0, 0.8, 0.05)
        without = spin_incoherent_rate(A, intensity, J, 0.0, 0.8, 0.05)
        assert np.max(np.abs(with_cross - without)) < 1e-12
