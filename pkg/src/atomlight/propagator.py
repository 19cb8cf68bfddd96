"""Field propagators inside and outside the ensemble.

Covers the equal-position delta-in-time ("infinitely short") propagator
of the polarized medium, both as closed forms and as a Gauss-Legendre
quadrature oracle, the classic radiating-dipole propagator, truncated
mode-sum Green's functions with a reciprocity residual, and the light
and spin decay coefficients the short propagator feeds.

Conventions: c = hbar = 1.  The short propagator is reported through
the coefficient triple (rho_par, rho_perp, rho_gamma); the full matrix
is -i*delta(t-t') times the assembled 3x3 form.  Lamb-shift (principal
value) contributions are dropped; only the delta-in-time dissipative
part is kept.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import OutsideDomain, ZeroSeparation
from .medium import cross_matrix

NEAR_SINGULAR_FRACTION = 0.05


@dataclass(frozen=True)
class ShortPropagatorCoeffs:
    """Triple (rho_par, rho_perp, rho_gamma), units of k_L^3.

    near_singular flags parameter sets with a0 - a1 < 0.05*a0, where
    the closed forms remain finite but are poorly conditioned.
    """

    rho_par: float
    rho_perp: float
    rho_gamma: float
    near_singular: bool = False


def _check_domain(a0: float, a1: float) -> bool:
    if a1 < 0:
        raise OutsideDomain("need a1 >= 0")
    if a0 - a1 <= 0:
        raise OutsideDomain(f"need a0 - a1 > 0, got {a0 - a1}")
    return a0 - a1 < NEAR_SINGULAR_FRACTION * a0


def short_propagator_closed(a0: float, a1: float, k_L: float) -> ShortPropagatorCoeffs:
    """Closed-form short-propagator coefficients for a0 - a1 > 0.

    The isotropic point a1 = 0 is taken on a dedicated branch where all
    three expressions collapse to rho_par = rho_perp = k_L^3/(3 pi) *
    a0^(-5/2), rho_gamma = 0.
    """
    near = _check_domain(a0, a1)
    k3 = k_L**3
    if a1 == 0.0:
        iso = k3 / (3.0 * np.pi) * a0**-2.5
        return ShortPropagatorCoeffs(iso, iso, 0.0, near)
    sm = np.sqrt(a0 - a1)
    sp = np.sqrt(a0 + a1)
    rho_par = (-k3 / (3.0 * np.pi * a1**3)) * (
        (-4.0 * a0 + 2.0 * a1) / sm + (4.0 * a0 + 2.0 * a1) / sp)
    rho_perp = (-k3 / (3.0 * np.pi * a1**3)) * (
        (2.0 * a0**2 - 3.0 * a0 * a1 + 0.5 * a1**2) / sm**3
        - (2.0 * a0**2 + 3.0 * a0 * a1 + 0.5 * a1**2) / sp**3)
    rho_gamma = (k3 / (6.0 * np.pi * a1**2)) * (
        (2.0 * a0 - 3.0 * a1) / sm**3 - (2.0 * a0 + 3.0 * a1) / sp**3)
    return ShortPropagatorCoeffs(rho_par, rho_perp, rho_gamma, near)


def short_propagator_quadrature(a0: float, a1: float, k_L: float,
                                n_points: int = 128) -> ShortPropagatorCoeffs:
    """Gauss-Legendre evaluation of the angular integral behind the triple.

    The coefficients are moments of (a0 + a1 x)^(-5/2) over x in [-1,1]:
        rho_par   = k^3/(8 pi) * int 2(1-x^2) f dx
        rho_perp  = k^3/(8 pi) * int (1+x^2)  f dx
        rho_gamma = k^3/(4 pi) * int x        f dx
    with the sign of rho_gamma fixed to agree with the closed forms.
    """
    if n_points < 64:
        raise ValueError("n_points must be at least 64")
    near = _check_domain(a0, a1)
    x, w = np.polynomial.legendre.leggauss(n_points)
    f = (a0 + a1 * x)**-2.5
    pref = k_L**3 / (8.0 * np.pi)
    rho_par = pref * float(np.sum(w * 2.0 * (1.0 - x**2) * f))
    rho_perp = pref * float(np.sum(w * (1.0 + x**2) * f))
    rho_gamma = 2.0 * pref * float(np.sum(w * x * f))
    return ShortPropagatorCoeffs(rho_par, rho_perp, rho_gamma, near)


def coordinate_free_short_propagator(coeffs: ShortPropagatorCoeffs,
                                     j_hat) -> np.ndarray:
    """Short-propagator matrix for an arbitrary spin direction.

    rho_perp*I - i*rho_gamma*[j]_x + (rho_par - rho_perp)*j j^T; the
    matrix rotates covariantly with j_hat.
    """
    j = np.asarray(j_hat, dtype=float)
    j = j / np.linalg.norm(j)
    return (coeffs.rho_perp * np.eye(3, dtype=complex)
            - 1j * coeffs.rho_gamma * cross_matrix(j)
            + (coeffs.rho_par - coeffs.rho_perp) * np.outer(j, j))


def dipole_propagator(n_vec, k_L: float) -> np.ndarray:
    """Radiative part of the free-space dipole propagator at separation n.

    -(k^3/4pi) (e^{ikn}/kn) [ (1 + 3i/kn - 3/(kn)^2) nn^T
                              - (1 + i/kn - 1/(kn)^2) I ].

    The contact self-term (2/3) delta(n) I is NOT included here; it is
    returned separately by dipole_self_term() and must never be smeared
    onto a grid.
    """
    n_vec = np.asarray(n_vec, dtype=float)
    n = np.linalg.norm(n_vec)
    if n == 0:
        raise ZeroSeparation("radiative propagator undefined at zero separation")
    kn = k_L * n
    n_hat = n_vec / n
    trans = 1.0 + 3.0j / kn - 3.0 / kn**2
    lon = 1.0 + 1.0j / kn - 1.0 / kn**2
    return (-(k_L**3 / (4.0 * np.pi)) * np.exp(1j * kn) / kn
            * (trans * np.outer(n_hat, n_hat) - lon * np.eye(3)))


def dipole_self_term() -> float:
    """Coefficient of the delta(n)*I contact term of the dipole propagator."""
    return 2.0 / 3.0


def dipole_propagator_kspace(n_vec, k_L: float, k_max: float = 400.0,
                             n_radial: int = 400_000) -> np.ndarray:
    """Independent k-space route to the radiative dipole propagator.

    Evaluates  int d^3k/(2pi)^3 (I - khat khat) k^2 e^{ik.n} /
    (k^2 - k_L^2 - i eta)  for n != 0.  The angular integral is done
    analytically,

        int dOmega (I - khat khat) e^{ik.n} =
            4 pi [ (2 j0(kn) - j2(kn))/3 * I + j2(kn) * nhat nhat^T ],

    and the radial weight is split as k^4/(k^2-k_L^2) = (k^2 + k_L^2)
    + k_L^4/(k^2-k_L^2).  The polynomial part is evaluated with its
    Abel-regularized moments (int j0 = pi/2n, int k^2 j0 = 0,
    int j2 = pi/4n, int k^2 j2 = 3pi/2n^3); the remainder converges and
    is integrated as a principal value with the outgoing-wave residue
    +i pi g(k_L)/(2 k_L) added.
    """
    n_vec = np.asarray(n_vec, dtype=float)
    n = np.linalg.norm(n_vec)
    if n == 0:
        raise ZeroSeparation("k-space oracle undefined at zero separation")
    n_hat = n_vec / n

    from scipy.special import spherical_jn

    k = np.linspace(0.0, k_max, n_radial)
    kn = k * n
    j0 = spherical_jn(0, kn)
    j2 = spherical_jn(2, kn)
    A = (2.0 * j0 - j2) / 3.0     # coefficient on I
    B = j2                        # coefficient on nhat nhat^T

    denom = k**2 - k_L**2
    knL = k_L * n
    gA = (2.0 * spherical_jn(0, knL) - spherical_jn(2, knL)) / 3.0
    gB = spherical_jn(2, knL)

    def pv_plus_residue(g, gL):
        reg = np.where(np.abs(denom) > 1e-300, (g - gL) / denom, 0.0)
        # second-order hole filling at the pole: derivative of g there
        i0 = np.argmin(np.abs(k - k_L))
        reg[i0] = (reg[i0 - 1] + reg[i0 + 1]) / 2.0
        pv = np.trapezoid(reg, k)
        # int_0^kmax dk/(k^2 - kL^2) (PV) = (1/2kL) ln((kmax-kL)/(kmax+kL))
        pv += gL / (2.0 * k_L) * np.log((k_max - k_L) / (k_max + k_L))
        return pv + 1j * np.pi * gL / (2.0 * k_L)

    pref = k_L**4 / (2.0 * np.pi**2)
    IA = pref * pv_plus_residue(A, gA)
    IB = pref * pv_plus_residue(B, gB)

    # Abel-regularized polynomial-part moments for n > 0.
    int_j0 = np.pi / (2.0 * n)          # int_0^inf j0(kn) dk
    int_k2_j2 = 3.0 * np.pi / (2.0 * n**3)
    int_j2 = np.pi / (4.0 * n)
    poly_j0 = k_L**2 * int_j0           # (k^2 + k_L^2) channel, j0 part
    poly_j2 = int_k2_j2 + k_L**2 * int_j2
    IA += (1.0 / (2.0 * np.pi**2)) * (2.0 * poly_j0 - poly_j2) / 3.0
    IB += (1.0 / (2.0 * np.pi**2)) * poly_j2
    return IA * np.eye(3) + IB * np.outer(n_hat, n_hat)


@dataclass(frozen=True)
class GreensSum:
    """Truncated vacuum mode-sum Green's function (scalar medium).

    k_grid: (N,3) wavevectors; weights: (N,) quadrature weights;
    omega_L: carrier frequency.  The kernel is

        G(r,t|r',t') = Theta(t-t') * (-i/(2 omega_L)) *
            sum_k w_k f_k^*(r) f_k(r')
                  exp(i (omega_k^2 - omega_L^2)(t-t') / (2 omega_L))

    with f_k(r) = e^{i k.r} / (2 pi)^{3/2} and omega_k = |k| (c = 1).
    """

    k_grid: np.ndarray
    weights: np.ndarray
    omega_L: float

    def evaluate(self, r, t, r_prime, t_prime) -> complex:
        dt = t - t_prime
        if dt < 0:
            return 0.0 + 0.0j
        r = np.asarray(r, dtype=float)
        rp = np.asarray(r_prime, dtype=float)
        kdotr = self.k_grid @ r
        kdotrp = self.k_grid @ rp
        omega2 = np.sum(self.k_grid**2, axis=1)
        phase = np.exp(1j * (kdotrp - kdotr)
                       + 1j * (omega2 - self.omega_L**2) * dt
                       / (2.0 * self.omega_L))
        return complex(-1j / (2.0 * self.omega_L)
                       * np.sum(self.weights * phase) / (2.0 * np.pi)**3)


def symmetric_k_grid(n_per_axis: int, k_max: float) -> tuple[np.ndarray, np.ndarray]:
    """Cubic k-grid symmetric under k -> -k with uniform weights."""
    axis = np.linspace(-k_max, k_max, n_per_axis)
    dk = axis[1] - axis[0]
    KX, KY, KZ = np.meshgrid(axis, axis, axis, indexing="ij")
    grid = np.stack([KX.ravel(), KY.ravel(), KZ.ravel()], axis=1)
    weights = np.full(grid.shape[0], dk**3)
    return grid, weights


def greens_reciprocity_residual(gsum: GreensSum, pairs) -> float:
    """Max deviation from G(r,t|r',t') = G(r',-t'|r,-t) over the pairs."""
    worst = 0.0
    for (r, t, rp, tp) in pairs:
        lhs = gsum.evaluate(r, t, rp, tp)
        rhs = gsum.evaluate(rp, -tp, r, -t)
        worst = max(worst, abs(lhs - rhs))
    return worst


@dataclass(frozen=True)
class LightDecayMatrix:
    """Decay coefficients of the light polarization (spin mean along x)."""

    Gamma_par: float
    Gamma_perp1: float
    Gamma_perp2: float
    Gamma_Gamma: float

    @property
    def matrix(self) -> np.ndarray:
        return np.array([
            [self.Gamma_par, 0.0, 0.0],
            [0.0, self.Gamma_perp1, 1j * self.Gamma_Gamma],
            [0.0, -1j * self.Gamma_Gamma, self.Gamma_perp2],
        ], dtype=complex)


def light_decay_matrix(coeffs: ShortPropagatorCoeffs, c0: float, c1: float,
                       J, J_sq: float | None = None) -> LightDecayMatrix:
    """Decay coefficients for mean spin J given in the x-aligned basis.

    J_sq optionally overrides the scalar J^2 appearing in the J^2 and
    J^4 = (J^2)^2 factors (quantum value for low spin).
    """
    Jx, Jy, Jz = (float(c) for c in np.asarray(J, dtype=float))
    jsq = Jx**2 + Jy**2 + Jz**2 if J_sq is None else float(J_sq)
    j4 = jsq**2
    rp, rt, rg = coeffs.rho_par, coeffs.rho_perp, coeffs.rho_gamma
    g_par = c0**2 * j4 * rp + c1**2 * rt * (Jz**2 + Jy**2)
    g_p1 = (c0**2 * j4 * rt + 2.0 * c0 * c1 * rg * jsq * Jx
            + c1**2 * (rp * Jz**2 + rt * Jx**2))
    g_p2 = (c0**2 * j4 * rt + 2.0 * c0 * c1 * rg * jsq * Jx
            + c1**2 * (rp * Jy**2 + rt * Jx**2))
    g_g = (rt * 2.0 * c1 * c0 * jsq * Jx - rp * 0.5 * c1**2 * Jx
           + rg * (c0**2 * jsq + c1**2 * Jx**2))
    return LightDecayMatrix(g_par, g_p1, g_p2, g_g)


def spin_decay_rates(coeffs: ShortPropagatorCoeffs, c1: float, beta: float,
                     D_intensity: float) -> tuple[float, float, float]:
    """Spin damping rates for x-polarized driving light.

    Uses the isotropic branch rho = rho_perp (valid when rho_gamma ~ 0
    and rho_par ~ rho_perp); the rate along the light polarization is
    twice the transverse rates: (2 Gamma_D, Gamma_D, Gamma_D).
    """
    gamma_d = beta**2 * c1**2 * coeffs.rho_perp * D_intensity
    return (2.0 * gamma_d, gamma_d, gamma_d)
