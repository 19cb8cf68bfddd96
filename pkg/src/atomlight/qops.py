"""Operator algebra for polarization observables on a truncated mode basis.

Light operators are quadratic forms sum a^dag M a over a basis indexed
by (transverse mode, polarization) at a common wavenumber.  The module
provides the Stokes operators and their su(2) algebra, the first and
second perturbative orders of the Stokes generator (in the coupling
beta), and the corresponding first and second order spin terms,
including the incoherent (spontaneous-emission) piece.

The ensemble enters through volume-integrated overlap weights

    W[m, n] = int d3r rho(r) Psi[m,n](r) ((0, Jy, Jz) . e_z(r)),

with Psi[m,n] = U_m^* U_n; in the paraxial frames used here the local
e_z projection is just Jz(r).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import BasisMismatch
from .modes import TransverseGrid, hermite_gauss_eval

HERMITICITY_TOL = 1e-13

POLS = ("x", "y")


@dataclass(frozen=True)
class PolarizedModeBasis:
    """Basis of n_modes transverse modes times two polarizations at one k."""

    n_modes: int
    k: float

    @property
    def dim(self) -> int:
        return 2 * self.n_modes

    def index(self, m: int, pol: str) -> int:
        if pol not in POLS:
            raise ValueError(f"polarization must be x or y, got {pol}")
        if not 0 <= m < self.n_modes:
            raise ValueError(f"mode index {m} out of range")
        return 2 * m + POLS.index(pol)

    def labels(self):
        return [(m, pol) for m in range(self.n_modes) for pol in POLS]


@dataclass(frozen=True)
class QuadraticOperator:
    """Operator sum_{pq} coeff[p,q] a^dag_p a_q with Hermitian coeff."""

    basis: PolarizedModeBasis
    coeff: np.ndarray
    label: str = ""

    def __post_init__(self):
        c = np.asarray(self.coeff, dtype=complex)
        object.__setattr__(self, "coeff", c)
        if c.shape != (self.basis.dim, self.basis.dim):
            raise ValueError("coefficient matrix does not match basis dim")

    def is_hermitian(self, tol: float = HERMITICITY_TOL) -> bool:
        return bool(np.max(np.abs(self.coeff - self.coeff.conj().T)) <= tol)

    def __add__(self, other: "QuadraticOperator") -> "QuadraticOperator":
        if other.basis != self.basis:
            raise BasisMismatch("cannot add operators on different bases")
        return QuadraticOperator(self.basis, self.coeff + other.coeff,
                                 label=self.label)

    def __sub__(self, other: "QuadraticOperator") -> "QuadraticOperator":
        if other.basis != self.basis:
            raise BasisMismatch("cannot subtract operators on different bases")
        return QuadraticOperator(self.basis, self.coeff - other.coeff,
                                 label=self.label)

    def __mul__(self, scalar) -> "QuadraticOperator":
        return QuadraticOperator(self.basis, scalar * self.coeff, label=self.label)

    __rmul__ = __mul__

    def expectation_number(self, occupations) -> float:
        """Expectation in a product Fock state with the given occupations."""
        occ = np.asarray(occupations, dtype=float)
        return float(np.real(np.sum(np.diag(self.coeff) * occ)))

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeff))


def commutator(A: QuadraticOperator, B: QuadraticOperator) -> QuadraticOperator:
    """[a^dag M a, a^dag N a] = a^dag [M, N] a."""
    if A.basis != B.basis:
        raise BasisMismatch("commutator requires a common basis")
    M, N = A.coeff, B.coeff
    return QuadraticOperator(A.basis, M @ N - N @ M,
                             label=f"[{A.label},{B.label}]")


def _elementary(basis: PolarizedModeBasis, p: int, q: int) -> np.ndarray:
    c = np.zeros((basis.dim, basis.dim), dtype=complex)
    c[p, q] = 1.0
    return c


def stokes_mode_pair(basis: PolarizedModeBasis, m: int, m_prime: int):
    """Zeroth-order Stokes triple for the pair (m, x) and (m', y).

    s1 = (a^dag_mx a_mx - a^dag_m'y a_m'y)/2,
    s2 = (a^dag_mx a_m'y + a^dag_m'y a_mx)/2,
    s3 = (a^dag_mx a_m'y - a^dag_m'y a_mx)/(2i).
    """
    px = basis.index(m, "x")
    py = basis.index(m_prime, "y")
    s1 = 0.5 * (_elementary(basis, px, px) - _elementary(basis, py, py))
    s2 = 0.5 * (_elementary(basis, px, py) + _elementary(basis, py, px))
    s3 = (0.5 / 1j) * (_elementary(basis, px, py) - _elementary(basis, py, px))
    return (QuadraticOperator(basis, s1, f"s1^{m}{m_prime}"),
            QuadraticOperator(basis, s2, f"s2^{m}{m_prime}"),
            QuadraticOperator(basis, s3, f"s3^{m}{m_prime}"))


@dataclass(frozen=True)
class StokesField:
    """Position-dependent Stokes operators on a detector-plane grid.

    Each field has shape (nx, ny, dim, dim): a quadratic-operator
    coefficient matrix at every transverse point.
    """

    basis: PolarizedModeBasis
    grid: TransverseGrid
    s0: np.ndarray
    s1: np.ndarray
    s2: np.ndarray
    s3: np.ndarray

    def integrate(self, which: str) -> QuadraticOperator:
        """Transverse integral int s_i(r_perp) d2r as a single operator."""
        f = getattr(self, which)
        coeff = np.trapezoid(np.trapezoid(f, self.grid.y, axis=1),
                             self.grid.x, axis=0)
        return QuadraticOperator(self.basis, coeff, label=f"int {which}")


def stokes_field(basis: PolarizedModeBasis, modes, grid: TransverseGrid,
                 z: float = 0.0) -> StokesField:
    """Pointwise Stokes operators built from mode profiles at plane z.

    modes: list of HermiteGaussMode, one per transverse index of basis.
    """
    if len(modes) != basis.n_modes:
        raise BasisMismatch("mode list length does not match basis")
    U = np.stack([hermite_gauss_eval(md, grid.X, grid.Y, z) for md in modes])
    nx, ny = grid.x.size, grid.y.size
    D = basis.dim
    s0 = np.zeros((nx, ny, D, D), dtype=complex)
    s1 = np.zeros_like(s0)
    s2 = np.zeros_like(s0)
    s3 = np.zeros_like(s0)
    for m in range(basis.n_modes):
        for mp in range(basis.n_modes):
            w = np.conj(U[m]) * U[mp]            # Psi[m, mp] on the grid
            mx, my = basis.index(m, "x"), basis.index(m, "y")
            px, py = basis.index(mp, "x"), basis.index(mp, "y")
            s0[:, :, mx, px] += 0.5 * w
            s0[:, :, my, py] += 0.5 * w
            s1[:, :, mx, px] += 0.5 * w
            s1[:, :, my, py] -= 0.5 * w
            s2[:, :, mx, py] += 0.5 * w
            s2[:, :, my, px] += 0.5 * w
            s3[:, :, mx, py] += 0.5 / 1j * w
            s3[:, :, my, px] -= 0.5 / 1j * w
    return StokesField(basis=basis, grid=grid, s0=s0, s1=s1, s2=s2, s3=s3)


@dataclass(frozen=True)
class SpinTermResult:
    """Spin increment: 3-vector of quadratic-operator coefficient arrays."""

    basis: PolarizedModeBasis
    value: np.ndarray       # shape (3, dim, dim)
    order: int
    label: str = ""


def _xi(j: str, l: str) -> float:
    """Antisymmetric polarization factor delta_lx delta_jy - delta_jx delta_ly."""
    return (1.0 if (l, j) == ("x", "y") else 0.0) \
        - (1.0 if (j, l) == ("x", "y") else 0.0)


def stokes_first_order(basis: PolarizedModeBasis, W: np.ndarray,
                       k_L: float, beta: float, c1: float) -> dict:
    """First-order Stokes-generator matrix elements.

    W[m, n] is the ensemble overlap weight defined in the module
    docstring.  Returns a dict mapping ((m, j), (m', j')) to the
    QuadraticOperator increment of K<f_q|S^(1)|f_q'>.
    """
    W = np.asarray(W, dtype=complex)
    pref = k_L * c1 * beta * 0.5
    out = {}
    for (m, j) in basis.labels():
        for (mp, jp) in basis.labels():
            coeff = np.zeros((basis.dim, basis.dim), dtype=complex)
            for n in range(basis.n_modes):
                for l in POLS:
                    f1 = _xi(j, l)
                    if f1 != 0.0:
                        coeff[basis.index(n, l), basis.index(mp, jp)] += \
                            pref * np.conj(W[m, n]) * f1
                    f2 = _xi(jp, l)
                    if f2 != 0.0:
                        coeff[basis.index(m, j), basis.index(n, l)] += \
                            pref * W[mp, n] * f2
            out[((m, j), (mp, jp))] = QuadraticOperator(
                basis, coeff, label=f"S1[{m}{j},{mp}{jp}]")
    return out


def stokes_second_order_terms(basis: PolarizedModeBasis, W: np.ndarray,
                              k_L: float, beta: float, c1: float,
                              c0: float = 0.0,
                              quartic_weights: np.ndarray | None = None) -> dict:
    """Labelled second-order Stokes-generator terms {S2_A, S2_B, S2_D}.

    S2_A and S2_B are separable in the overlap weights W (double volume
    integrals factorize).  S2_D needs the quartic mode weights
    Q[n, m, m', n', a] = int rho Psi[n,m]^* -like products; it is only
    evaluated when quartic_weights of shape (M, M, M, M, 2) is given,
    where the last axis holds the (Jz^2-weighted, J^4-weighted) volume
    integrals of Psi^{nm} Psi^{m'n'}.

    The S2_C term (spin response along e_z) has coefficients that vanish
    identically for polarization indices in {x, y}; see s2c_coefficient.
    """
    W = np.asarray(W, dtype=complex)
    A = {}
    B = {}
    D = {}
    for (m, j) in basis.labels():
        for (mp, jp) in basis.labels():
            key = ((m, j), (mp, jp))
            ca = np.zeros((basis.dim, basis.dim), dtype=complex)
            cb = np.zeros_like(ca)
            for n in range(basis.n_modes):
                for l in POLS:
                    for n2 in range(basis.n_modes):
                        for l2 in POLS:
                            fa = _xi(j, l) * _xi(jp, l2)
                            if fa != 0.0:
                                ca[basis.index(n, l), basis.index(n2, l2)] += \
                                    (0.5 * k_L * beta * c1)**2 * fa \
                                    * np.conj(W[m, n]) * W[mp, n2]
                            fb1 = _xi(j, l) * _xi(l, l2)
                            if fb1 != 0.0:
                                cb[basis.index(n2, l2), basis.index(mp, jp)] += \
                                    0.125 * (k_L * beta * c1)**2 * fb1 \
                                    * np.conj(W[m, n]) * np.conj(W[n, n2])
                            fb2 = _xi(jp, l) * _xi(l, l2)
                            if fb2 != 0.0:
                                cb[basis.index(m, j), basis.index(n2, l2)] += \
                                    0.125 * (k_L * beta * c1)**2 * fb2 \
                                    * W[mp, n] * W[n, n2]
            A[key] = QuadraticOperator(basis, ca, label=f"S2_A[{m}{j},{mp}{jp}]")
            B[key] = QuadraticOperator(basis, cb, label=f"S2_B[{m}{j},{mp}{jp}]")
            if quartic_weights is not None:
                cd = np.zeros_like(ca)
                Q = quartic_weights
                for n in range(basis.n_modes):
                    for l in POLS:
                        for n2 in range(basis.n_modes):
                            for l2 in POLS:
                                wz, w4 = Q[n, m, mp, n2]
                                val = (c1**2 * wz * _xi(j, l) * _xi(jp, l2)
                                       + c0**2 * w4
                                       * (1.0 if j == l else 0.0)
                                       * (1.0 if jp == l2 else 0.0))
                                cd[basis.index(n, l), basis.index(n2, l2)] += \
                                    (0.5 * k_L * beta)**2 * val
                D[key] = QuadraticOperator(basis, cd,
                                           label=f"S2_D[{m}{j},{mp}{jp}]")
    out = {"S2_A": A, "S2_B": B}
    if quartic_weights is not None:
        out["S2_D"] = D
    return out


def s2c_coefficient(J_bar, j: str, l: str, lp: str, lpp: str,
                    frames=None) -> float:
    """Coefficient C^{l'l''}_{jl} = e_j . {(J x [e_l' x e_l'']) x e_l}.

    frames: optional dict mapping 'x','y' to polarization 3-vectors
    (defaults to the global Cartesian frame).  For indices restricted to
    {x, y} with orthonormal transverse frames the value is identically
    zero: e_l' x e_l'' is along e_z, J x e_z lies in the transverse
    plane, crossing with e_l gives a vector along e_z again, orthogonal
    to e_j.
    """
    if frames is None:
        frames = {"x": np.array([1.0, 0.0, 0.0]), "y": np.array([0.0, 1.0, 0.0])}
    J_bar = np.asarray(J_bar, dtype=float)
    inner = np.cross(frames[lp], frames[lpp])
    vec = np.cross(np.cross(J_bar, inner), frames[l])
    return float(frames[j] @ vec)


def spin_first_order(basis: PolarizedModeBasis, Psi_at_r: np.ndarray,
                     J_at_r, k_L: float, beta: float, c1: float,
                     e_z=(0.0, 0.0, 1.0)) -> SpinTermResult:
    """Local first-order spin increment at a point r.

    J^(1)(r) = -beta c1 k_L sum_{mm'} (J x e_z)
               { Re[Psi^{mm'}] s3^{mm'} + Im[Psi^{mm'}] s2^{mm'} }.
    The result is orthogonal to e_z(r) by construction.
    """
    Psi_at_r = np.asarray(Psi_at_r, dtype=complex)
    direction = np.cross(np.asarray(J_at_r, dtype=float),
                         np.asarray(e_z, dtype=float))
    total = np.zeros((basis.dim, basis.dim), dtype=complex)
    for m in range(basis.n_modes):
        for mp in range(basis.n_modes):
            _, s2, s3 = stokes_mode_pair(basis, m, mp)
            total += (np.real(Psi_at_r[m, mp]) * s3.coeff
                      + np.imag(Psi_at_r[m, mp]) * s2.coeff)
    value = -beta * c1 * k_L * direction[:, None, None] * total[None, :, :]
    return SpinTermResult(basis=basis, value=value, order=1, label="J1")


def spin_second_order_A_single_mode(basis: PolarizedModeBasis,
                                    Psi_r: np.ndarray, Psi_rp: np.ndarray,
                                    J_at_r, Jz_local_rp: float, rho_rp: float,
                                    k_L: float, beta: float, c1: float,
                                    o: int = 0,
                                    e_z=(0.0, 0.0, 1.0)) -> SpinTermResult:
    """Single-classical-mode reduction of the dipole-dipole spin term.

    Retains the Im[Psi^{mo}(r) Psi^{om}(r')] weights summed over the
    intermediate mode m; vanishes identically when all Psi are real.
    """
    Psi_r = np.asarray(Psi_r, dtype=complex)
    Psi_rp = np.asarray(Psi_rp, dtype=complex)
    direction = np.cross(np.asarray(J_at_r, dtype=float),
                         np.asarray(e_z, dtype=float))
    # sum_m Im[Psi^{mo}(r) Psi^{om}(r')]
    weight = float(np.sum(np.imag(Psi_r[:, o] * Psi_rp[o, :])))
    coeff = np.zeros((basis.dim, basis.dim), dtype=complex)
    for pol in POLS:
        p = basis.index(o, pol)
        coeff[p, p] += 1.0
    pref = (0.5 * beta * c1 * k_L)**2 * rho_rp * Jz_local_rp * weight
    value = pref * direction[:, None, None] * coeff[None, :, :]
    return SpinTermResult(basis=basis, value=value, order=2, label="J2_A")


def spin_second_order_B(basis: PolarizedModeBasis, Psi_products: np.ndarray,
                        J_bar, k_L: float, beta: float, c1: float,
                        e_z=(0.0, 0.0, 1.0)):
    """Quartic second-order spin rotation term.

    Psi_products[m, n, m', n'] = Psi^{mn} Psi^{m'n'} at the evaluation
    point (single common k).  Returns (direction, tensor) where
    direction = J - e_z (J . e_z) and tensor[p, q, r, s] multiplies
    a^dag_p a^dag_q a_r a_s with the structure
    { 2 a*_mx a*_m'y a_ny a_n'x - a*_my a*_m'y a_nx a_n'x
      - a*_mx a*_m'x a_ny a_n'y }.
    """
    P = np.asarray(Psi_products, dtype=complex)
    J_bar = np.asarray(J_bar, dtype=float)
    e_z = np.asarray(e_z, dtype=float)
    direction = J_bar - e_z * float(J_bar @ e_z)
    D = basis.dim
    M = basis.n_modes
    T = np.zeros((D, D, D, D), dtype=complex)
    pref = -0.5 * (0.5 * beta * c1 * k_L)**2
    for m in range(M):
        for n in range(M):
            for mp in range(M):
                for np_ in range(M):
                    w = pref * P[m, n, mp, np_]
                    T[basis.index(m, "x"), basis.index(mp, "y"),
                      basis.index(n, "y"), basis.index(np_, "x")] += 2.0 * w
                    T[basis.index(m, "y"), basis.index(mp, "y"),
                      basis.index(n, "x"), basis.index(np_, "x")] -= w
                    T[basis.index(m, "x"), basis.index(mp, "x"),
                      basis.index(n, "y"), basis.index(np_, "y")] -= w
    return direction, T


def spin_incoherent_rate(A_minus: np.ndarray, intensity: np.ndarray,
                         J_bar, c0: float, c1: float, beta: float,
                         J_sq: float | None = None) -> np.ndarray:
    """Mean spin rate from the incoherent second-order interaction.

    A_minus: 3x3 short-propagator matrix (coordinate-free assembly);
    intensity: Hermitian matrix I_ij = <D^-_i D^+_j> of the driving
    field; returns dJ/dt as a real 3-vector.  In the isotropic limit
    A ~ rho*Id the c0 c1 cross terms cancel and the rate reduces to
    -(beta^2 c1^2 rho / 2) [ Tr(I) J + I J + H.c. ], giving the 2:1:1
    anisotropy for linearly polarized light.
    """
    A = np.asarray(A_minus, dtype=complex)
    Ap = A.conj()
    I = np.asarray(intensity, dtype=complex)
    J = np.asarray(J_bar, dtype=float)
    jsq = float(J @ J) if J_sq is None else float(J_sq)

    IJ = I @ J
    cross = jsq * (A @ IJ - I @ (Ap.T @ J))
    diag = (Ap @ IJ - np.trace(I) * (A @ J) - np.trace(A) * IJ
            + I @ (A.T @ J))
    total = beta**2 * (c1 * c0 * cross + 0.5 * c1**2 * diag)
    total = total + np.conj(total)      # + H.c.
    return np.real(total)


def export_operator_csv(path, op: QuadraticOperator) -> None:
    """Dump a quadratic operator's coefficient matrix as CSV (p,q,Re,Im)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["row", "col", "Re", "Im"])
        D = op.basis.dim
        for p in range(D):
            for q in range(D):
                v = op.coeff[p, q]
                writer.writerow([p, q, repr(float(v.real)), repr(float(v.imag))])
