"""Optical mode families for the magnetized ensemble.

Two bases are provided.  Dressed plane waves diagonalize the wave
operator of the homogeneous polarized medium, whose response matrix is

    M = a0 * I + i * a1 * [j_hat]_x ,

and carry the modified dispersion w^2 = c^2 k^2 (a0 +- a1 (j.k)).
Hermite-Gaussian paraxial modes serve as the transverse basis for the
input-output maps.  Overlap fields Psi[m,n](r) = U_m^*(r) U_n(r) are the
weights through which the atoms see mode interference.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import eval_hermite

from .errors import DegenerateGeometry, MixedWavenumbers
from .medium import cross_matrix

DEGENERACY_TOL = 1e-12


def medium_matrix(a0: float, a1: float, j_hat) -> np.ndarray:
    """Response matrix M = a0*I + i*a1*[j_hat]_x of the polarized medium."""
    return a0 * np.eye(3, dtype=complex) + 1j * a1 * cross_matrix(np.asarray(j_hat))


def medium_inner(phi, psi, M) -> complex:
    """Inner product <phi|psi> = phi^* . M . psi weighted by the medium."""
    return complex(np.conj(phi) @ M @ psi)


@dataclass(frozen=True)
class DressedPlaneWave:
    """One helicity branch of the dressed plane-wave pair."""

    k_hat: np.ndarray
    s: int                       # +1 or -1 helicity branch
    polarization: np.ndarray     # complex 3-vector, unit under medium inner product
    omega2: float                # squared frequency for wavenumber k (c = 1)
    norm: float                  # (2*(a0 + s*a1*(j.k)))^(-1/2) mode-function prefactor


def dressed_modes(k_hat, j_hat, a0: float, a1: float, k: float = 1.0,
                  gauge=None) -> tuple[DressedPlaneWave, DressedPlaneWave]:
    """Dressed polarization pair for propagation direction k_hat.

    The transverse frame is v1 = j x k / |j x k|, v2 = k x v1, and the
    branches are eps_s ~ (v1 + i*s*v2), normalized to unity under the
    medium inner product.  When j_hat is parallel to k_hat the frame is
    gauge: pass any vector with a transverse component as `gauge` to fix
    v1, otherwise DegenerateGeometry is raised.  Dispersion:
    omega2 = k^2 (a0 + s*a1*(j.k)) with c = 1.
    """
    k_hat = np.asarray(k_hat, dtype=float)
    j_hat = np.asarray(j_hat, dtype=float)
    k_hat = k_hat / np.linalg.norm(k_hat)
    j_hat = j_hat / np.linalg.norm(j_hat)
    jk = float(j_hat @ k_hat)
    for s in (+1, -1):
        if a0 + s * a1 * jk <= 0:
            raise ValueError("need a0 +- a1*(j.k) > 0 for both branches")

    v1 = np.cross(j_hat, k_hat)
    n1 = np.linalg.norm(v1)
    if n1 < DEGENERACY_TOL:
        if gauge is None:
            raise DegenerateGeometry(
                "j_hat parallel to k_hat; supply a gauge vector for the "
                "transverse frame")
        g = np.asarray(gauge, dtype=float)
        v1 = g - (g @ k_hat) * k_hat
        n1 = np.linalg.norm(v1)
        if n1 < DEGENERACY_TOL:
            raise DegenerateGeometry("gauge vector has no transverse component")
    v1 = v1 / n1
    v2 = np.cross(k_hat, v1)

    M = medium_matrix(a0, a1, j_hat)
    branches = []
    for s in (+1, -1):
        eps = (v1 + 1j * s * v2).astype(complex)
        raw = medium_inner(eps, eps, M).real
        eps = eps / np.sqrt(raw)
        omega2 = k * k * (a0 + s * a1 * jk)
        norm = 1.0 / np.sqrt(2.0 * (a0 + s * a1 * jk))
        branches.append(DressedPlaneWave(k_hat=k_hat, s=s, polarization=eps,
                                         omega2=omega2, norm=norm))
    return branches[0], branches[1]


@dataclass(frozen=True)
class HermiteGaussMode:
    """Paraxial Hermite-Gaussian beam U_mn with waist w0 at z = 0."""

    m: int
    n: int
    k: float
    w0: float

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise ValueError("mode indices must be nonnegative")
        if self.w0 <= 0 or self.k <= 0:
            raise ValueError("w0 and k must be positive")

    @property
    def z0(self) -> float:
        """Rayleigh range pi*w0^2/lambda = k*w0^2/2."""
        return 0.5 * self.k * self.w0**2

    @property
    def B(self) -> float:
        """Peak normalization giving unit transverse L2 norm at every z."""
        m, n = self.m, self.n
        return math.sqrt(2.0 / (np.pi * 2.0**(m + n)
                                * math.factorial(m) * math.factorial(n))) / self.w0

    def waist(self, z: float) -> float:
        return self.w0 * np.sqrt(1.0 + (z / self.z0)**2)


def hermite_gauss_eval(mode: HermiteGaussMode, x, y, z):
    """Evaluate U_mn at (x, y, z); x and y may be arrays, z a scalar.

    Gouy phase (m+n+1)*arctan(z/z0); wavefront curvature
    R(z) = z + z0^2/z, taken flat at the waist (the 1/R phase vanishes
    continuously as z -> 0).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    z = float(z)
    z0 = mode.z0
    w = mode.waist(z)
    rsq = x**2 + y**2
    gouy = (mode.m + mode.n + 1) * np.arctan(z / z0)
    phase = mode.k * z - gouy
    if z != 0.0:
        R = z + z0**2 / z
        phase = phase + mode.k * rsq / (2.0 * R)
    amp = (mode.B * (mode.w0 / w)
           * eval_hermite(mode.m, np.sqrt(2.0) * x / w)
           * eval_hermite(mode.n, np.sqrt(2.0) * y / w)
           * np.exp(-rsq / w**2))
    return amp * np.exp(1j * phase)


@dataclass(frozen=True)
class TransverseGrid:
    """Uniform tensor-product grid on a transverse plane."""

    x: np.ndarray   # 1D
    y: np.ndarray   # 1D

    @property
    def X(self):
        return self.x[:, None]

    @property
    def Y(self):
        return self.y[None, :]

    def integrate(self, field) -> complex:
        """Trapezoid quadrature of a field sampled on the grid."""
        return np.trapezoid(np.trapezoid(field, self.y, axis=1), self.x, axis=0)


def make_grid(w: float, extent_factor: float = 6.0, n: int = 128) -> TransverseGrid:
    """Square grid of half-width extent_factor*w with n points per axis."""
    if n < 2:
        raise ValueError("grid needs at least 2 points per axis")
    x = np.linspace(-extent_factor * w, extent_factor * w, n)
    return TransverseGrid(x=x, y=x.copy())


@dataclass(frozen=True)
class OverlapField:
    """Mode-pair interference weights Psi[m,n](r_perp) = U_m^* U_n at fixed z."""

    Psi: np.ndarray          # shape (n_modes, n_modes, nx, ny)
    grid: TransverseGrid
    z: float

    def __getitem__(self, idx):
        m, n = idx
        return self.Psi[m, n]


def overlap_field(basis: list, grid: TransverseGrid, z: float = 0.0) -> OverlapField:
    """Overlap fields for every pair in a shared-k Hermite-Gauss basis.

    Hermitian in (m, n) by construction; the transverse integral of
    Psi[m,n] is delta_mn up to quadrature error.
    """
    ks = {mode.k for mode in basis}
    if len(ks) > 1:
        raise MixedWavenumbers(f"basis mixes wavenumbers {sorted(ks)}")
    fields = [hermite_gauss_eval(mode, grid.X, grid.Y, z) for mode in basis]
    nb = len(basis)
    Psi = np.empty((nb, nb) + fields[0].shape, dtype=complex)
    for m in range(nb):
        Psi[m, m] = np.abs(fields[m])**2
        for n in range(m + 1, nb):
            Psi[m, n] = np.conj(fields[m]) * fields[n]
            Psi[n, m] = np.conj(Psi[m, n])
    return OverlapField(Psi=Psi, grid=grid, z=z)


def completeness_kernel(basis: list, grid: TransverseGrid, r_prime,
                        z: float = 0.0) -> np.ndarray:
    """Truncated kernel sum_n U_n^*(r_perp) U_n(r') on the grid.

    As the truncation grows the kernel approaches a transverse delta at
    r'; callers compare against a discrete delta or use it to resum test
    functions.
    """
    xp, yp = r_prime
    K = np.zeros((grid.x.size, grid.y.size), dtype=complex)
    for mode in basis:
        K += np.conj(hermite_gauss_eval(mode, grid.X, grid.Y, z)) \
            * hermite_gauss_eval(mode, np.array(xp), np.array(yp), z)
    return K


def expand_function(basis: list, grid: TransverseGrid, f,
                    z: float = 0.0):
    """Project a transverse field onto the basis and resum it.

    Returns (coefficients, reconstruction) with c_n = int U_n^* f d2r.
    The L2 error of the reconstruction measures completeness of the
    truncated basis for that function.
    """
    coeffs = []
    recon = np.zeros_like(np.asarray(f, dtype=complex))
    for mode in basis:
        U = hermite_gauss_eval(mode, grid.X, grid.Y, z)
        c = grid.integrate(np.conj(U) * f)
        coeffs.append(c)
        recon += c * U
    return np.array(coeffs), recon


def export_field_csv(path, grid: TransverseGrid, field) -> None:
    """Write a complex grid field as CSV rows (x, y, Re, Im)."""
    field = np.asarray(field)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "y", "Re", "Im"])
        for i, xv in enumerate(grid.x):
            for j, yv in enumerate(grid.y):
                v = field[i, j]
                writer.writerow([repr(float(xv)), repr(float(yv)),
                                 repr(float(np.real(v))), repr(float(np.imag(v)))])
