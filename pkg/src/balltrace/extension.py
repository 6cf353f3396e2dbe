"""Polyharmonic extensions of zonal data into the unit ball.

Per mode k, the order-2m extension is f_k(r) = sum_j c_j(k) r^{k+2j} with
L_k^m f_k = 0 for L_k g = g'' + (n/r) g' - k(n-1+k) g / r^2.  The m radial
derivative values at r = 1 are prescribed by the Neumann data, which pins
the c_j(k) as the solution of an m x m linear system; the system matrix is
Vandermonde-like with a constant determinant, so the c_j(k) are polynomials
in (k, n) and every interior energy reduces, exactly, to a bivariate
polynomial S_{2m}(k, n) against the mode norms.
"""

from __future__ import annotations

import functools
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import roots_legendre

from .exact import (K_EIGEN, K_SYM, N_SYM, RationalPoly, divmod_in_k)
from .sphere import UnderResolvedWarning, ZonalFunction

__all__ = [
    "BoundaryConditionSet",
    "PolyharmonicExtension",
    "boundary_conditions",
    "radial_coefficients",
    "extend_zonal",
    "verify_boundary",
    "interior_energy_coefficient",
    "interior_energy_quadrature",
]

SUPPORTED_ORDERS = (1, 2, 3, 4)


@dataclass(frozen=True)
class BoundaryConditionSet:
    """Per-derivative boundary forms d_i(K) = u_i + v_i K, i = 0..m-1.

    d_i prescribes the i-th radial derivative of f_k at r = 1, with
    K = k(n-1+k); the K-terms carry the sign flip from Lap Y_k = -K Y_k.
    """

    m: int
    n: int
    forms: tuple  # ((u_0, v_0), ..., (u_{m-1}, v_{m-1})) as Fractions

    def value(self, i: int, k: int) -> Fraction:
        u, v = self.forms[i]
        K = Fraction(k * (self.n - 1 + k))
        return u + v * K


def _symbolic_forms(m: int):
    """Boundary forms with n symbolic: list of (u_i(n), v_i(n))."""
    n = N_SYM
    one = RationalPoly.const(1)
    zero = RationalPoly.zero()
    if m == 1:
        return [(one, zero)]
    if m == 2:
        return [(one, zero), (-(n - 3) * Fraction(1, 2), zero)]
    if m == 3:
        return [
            (one, zero),
            (-(n - 5) * Fraction(1, 2), zero),
            ((n - 5) * (n - 6) * Fraction(1, 6), RationalPoly.const(Fraction(-1, 3))),
        ]
    if m == 4:
        return [
            (one, zero),
            (-(n - 7) * Fraction(1, 2), zero),
            ((n - 7) * (2 * n - 15) * Fraction(1, 10), RationalPoly.const(Fraction(-1, 5))),
            (-(n - 5) * (n - 7) * (n - 15) * Fraction(1, 20), (n - 5) * Fraction(3, 10)),
        ]
    raise ValueError(f"unsupported order m={m}; supported: {SUPPORTED_ORDERS}")


def boundary_conditions(m: int, n: int) -> BoundaryConditionSet:
    """Neumann boundary forms of the order-2m trace inequality at dimension n.

    Requires n > 2m-1, or n = 2m-1 for the Lebedev-Milin specialization
    (where all f-proportional terms vanish).
    """
    if m not in SUPPORTED_ORDERS:
        raise ValueError(f"unsupported order m={m}; supported: {SUPPORTED_ORDERS}")
    if n < 2 * m - 1:
        raise ValueError(f"need n >= 2m-1 = {2 * m - 1}, got n={n}")
    forms = tuple(
        (u.eval(n=n), v.eval(n=n)) for u, v in _symbolic_forms(m)
    )
    return BoundaryConditionSet(m, n, forms)


def _falling(x, i: int):
    """x (x-1) ... (x-i+1); works for Fractions and RationalPoly alike."""
    out = x * 0 + 1 if isinstance(x, RationalPoly) else Fraction(1)
    for t in range(i):
        out = out * (x - t)
    return out


def radial_coefficients(m: int, n: int, k: int) -> list:
    """Exact c_j(k) solving f_k^{(i)}(1) = d_i(K) by Gaussian elimination."""
    bcs = boundary_conditions(m, n)
    A = [[_falling(Fraction(k + 2 * j), i) for j in range(m)] for i in range(m)]
    rhs = [bcs.value(i, k) for i in range(m)]
    # fraction-exact Gaussian elimination with partial pivoting
    for col in range(m):
        piv = next(r for r in range(col, m) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        rhs[col], rhs[piv] = rhs[piv], rhs[col]
        inv = Fraction(1) / A[col][col]
        A[col] = [a * inv for a in A[col]]
        rhs[col] = rhs[col] * inv
        for r in range(m):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
                rhs[r] = rhs[r] - f * rhs[col]
    return rhs


def _det(mat):
    """Laplace-expansion determinant of a small RationalPoly matrix."""
    size = len(mat)
    if size == 1:
        return mat[0][0]
    total = RationalPoly.zero()
    for j in range(size):
        minor = [row[:j] + row[j + 1:] for row in mat[1:]]
        piece = mat[0][j] * _det(minor)
        total = total + (piece if j % 2 == 0 else -piece)
    return total


@functools.lru_cache(maxsize=None)
def _radial_coefficients_sym(m: int) -> tuple:
    """The c_j as polynomials in (k, n), via Cramer's rule.

    The boundary matrix [falling(k+2j, i)]_{ij} has rows that are monic
    degree-i polynomials of x_j = k+2j, so its determinant is the constant
    Vandermonde product prod_{i<j} 2(j-i); Cramer therefore yields
    polynomial coefficients.
    """
    mat = [[_falling(K_SYM + 2 * j, i) for j in range(m)] for i in range(m)]
    rhs = [u + v * K_EIGEN for u, v in _symbolic_forms(m)]
    det = _det(mat)
    assert not det.variables(), "boundary system determinant must be constant"
    det_c = det.terms.get((0, 0, 0), Fraction(0))
    out = []
    for j in range(m):
        mat_j = [[rhs[i] if jj == j else mat[i][jj] for jj in range(m)]
                 for i in range(m)]
        out.append(_det(mat_j) * (Fraction(1) / det_c))
    return tuple(out)


def _mu(j: int) -> RationalPoly:
    """L_k r^{k+2j} = mu_j r^{k+2j-2} with mu_j = 2j(2k+2j-1+n)."""
    return RationalPoly.const(2 * j) * (2 * K_SYM + 2 * j - 1 + N_SYM)


def _apply_L(coeffs):
    """Coefficient list of L_k applied to sum_j a_j r^{k+2j}."""
    return [coeffs[j] * _mu(j) for j in range(1, len(coeffs))]


def _divide_out(numer: RationalPoly, factors) -> RationalPoly:
    for d in factors:
        numer, rem = divmod_in_k(numer, d)
        if not rem.is_zero():
            raise ArithmeticError("radial energy did not reduce to a polynomial")
    return numer


def _gradient_energy_sym(coeffs) -> RationalPoly:
    """int_0^1 (g'^2 + K g^2 / r^2) r^n dr for g = sum_j a_j r^{k+2j}, exact.

    Each term integrates to a rational function with linear denominators
    2k + 2s + n - 1; the combined numerator is divisible by all of them.
    """
    smax = 2 * (len(coeffs) - 1)
    dens = [2 * K_SYM + 2 * s + N_SYM - 1 for s in range(smax + 1)]
    numer = RationalPoly.zero()
    for i, ai in enumerate(coeffs):
        for j, aj in enumerate(coeffs):
            s = i + j
            piece = ai * aj * ((K_SYM + 2 * i) * (K_SYM + 2 * j) + K_EIGEN)
            for s2 in range(smax + 1):
                if s2 != s:
                    piece = piece * dens[s2]
            numer = numer + piece
    return _divide_out(numer, dens)


def _square_energy_sym(coeffs) -> RationalPoly:
    """int_0^1 g^2 r^n dr for g = sum_j a_j r^{k+2j}, exact."""
    smax = 2 * (len(coeffs) - 1)
    dens = [2 * K_SYM + 2 * s + N_SYM + 1 for s in range(smax + 1)]
    numer = RationalPoly.zero()
    for i, ai in enumerate(coeffs):
        for j, aj in enumerate(coeffs):
            s = i + j
            piece = ai * aj
            for s2 in range(smax + 1):
                if s2 != s:
                    piece = piece * dens[s2]
            numer = numer + piece
    return _divide_out(numer, dens)


@functools.lru_cache(maxsize=None)
def interior_energy_coefficient(m: int) -> RationalPoly:
    """Spectral coefficient S_{2m}(k, n) of the order-2m interior energy.

    The energy (int |grad u|^2, int (Lap u)^2, int |grad Lap u|^2,
    int (Lap^2 u)^2 for m = 1..4) of the boundary-conditioned extension
    equals sum_k S_{2m}(k, n) int |Y_k|^2.  Computed by exact term-wise
    radial integration of the polynomial densities.
    """
    if m not in SUPPORTED_ORDERS:
        raise ValueError(f"unsupported order m={m}; supported: {SUPPORTED_ORDERS}")
    coeffs = list(_radial_coefficients_sym(m))
    if m == 1:
        return _gradient_energy_sym(coeffs)
    if m == 2:
        return _square_energy_sym(_apply_L(coeffs))
    if m == 3:
        return _gradient_energy_sym(_apply_L(coeffs))
    return _square_energy_sym(_apply_L(_apply_L(coeffs)))


@dataclass(frozen=True)
class PolyharmonicExtension:
    """Mode-wise polyharmonic extension of a zonal boundary datum."""

    m: int
    n: int
    zonal: ZonalFunction
    mode_coeffs: tuple  # tuple over k of tuple[Fraction] c_j(k)

    @property
    def kmax(self) -> int:
        return self.zonal.kmax


def extend_zonal(f: ZonalFunction, m: int) -> PolyharmonicExtension:
    """The order-2m extension of f with the trace boundary conditions."""
    coeffs = tuple(tuple(radial_coefficients(m, f.n, k))
                   for k in range(f.kmax + 1))
    return PolyharmonicExtension(m, f.n, f, coeffs)


def verify_boundary(ext: PolyharmonicExtension) -> bool:
    """Exact check of f_k^{(i)}(1) = d_i(K) for every mode and i < m."""
    bcs = boundary_conditions(ext.m, ext.n)
    for k, cj in enumerate(ext.mode_coeffs):
        for i in range(ext.m):
            lhs = sum(c * _falling(Fraction(k + 2 * j), i)
                      for j, c in enumerate(cj))
            if lhs != bcs.value(i, k):
                return False
    return True


def _mode_density_powers(ext: PolyharmonicExtension, k: int):
    """(powers, coeffs) of the order-appropriate radial energy density,
    before the r^n factor, for mode k."""
    m, n = ext.m, ext.n
    cj = [Fraction(c) for c in ext.mode_coeffs[k]]
    K = Fraction(k * (n - 1 + k))

    def lk(coeffs):
        return [coeffs[j] * Fraction(2 * j * (2 * k + 2 * j - 1 + n))
                for j in range(1, len(coeffs))]

    def square(coeffs, base):
        pows, cfs = [], []
        for i, ai in enumerate(coeffs):
            for j, aj in enumerate(coeffs):
                pows.append(2 * base + 2 * (i + j))
                cfs.append(ai * aj)
        return pows, cfs

    def gradient(coeffs, base):
        pows, cfs = [], []
        for i, ai in enumerate(coeffs):
            for j, aj in enumerate(coeffs):
                pows.append(2 * base + 2 * (i + j) - 2)
                cfs.append(ai * aj * (Fraction((base + 2 * i) * (base + 2 * j)) + K))
        return pows, cfs

    if m == 1:
        return gradient(cj, k)
    if m == 2:
        return square(lk(cj), k)
    if m == 3:
        return gradient(lk(cj), k)
    return square(lk(lk(cj)), k)


def interior_energy_quadrature(ext: PolyharmonicExtension,
                               quad_degree: int | None = None,
                               check: bool = True) -> float:
    """Interior energy by per-mode radial Gauss-Legendre integration.

    Numerical cross-check of the exact spectral sum
    sum_k S_{2m}(k, n) int |Y_k|^2.
    """
    if quad_degree is None:
        quad_degree = ext.kmax + 2 * ext.m + ext.n + 8

    def compute(npts):
        x, w = roots_legendre(npts)
        r = 0.5 * (x + 1.0)
        wr = 0.5 * w
        total = 0.0
        for k in range(ext.kmax + 1):
            nu = ext.zonal.mode_norms[k]
            if nu == 0.0:
                continue
            pows, cfs = _mode_density_powers(ext, k)
            dens = np.zeros_like(r)
            for p, c in zip(pows, cfs):
                if c != 0:
                    dens += float(c) * r ** (p + ext.n)
            total += float(np.sum(wr * dens)) * nu
        return total

    out = compute(quad_degree)
    if check:
        refined = compute(2 * quad_degree)
        if abs(refined - out) > 1e-9 * max(abs(out), 1e-300):
            warnings.warn("interior energy moved under node doubling",
                          UnderResolvedWarning, stacklevel=2)
        out = refined
    return out
