"""Fourier-side profiles for the half-space trace inequalities.

For each frequency, the bounded solution of (d^2/dy^2 - 1)^m phi = 0 with
phi(0) = 1, phi'(0) = 0 (plus phi''(0) = -lambda for m >= 3 and
phi'''(0) = 0 for m = 4) is p(y) e^{-y} with deg p = m - 1; the trace
constants are the exact energies of these profiles.  The polynomial p is
solved with lambda symbolic, so profile energies come out as exact
quadratics in lambda.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import LAM_SYM, RationalPoly, exppoly_integral, gamma_half, pochhammer

__all__ = [
    "ExpPolyProfile",
    "profile",
    "profile_energy",
    "profile_energy_poly",
    "optimal_lambda",
    "halfspace_prefactor",
]

PROFILE_ORDERS = (2, 3, 4)


@dataclass(frozen=True)
class ExpPolyProfile:
    """Profile phi(y) = p(y) e^{-y} with exact rational coefficients."""

    m: int
    lam: Fraction
    poly: tuple  # coefficients of p, degree m-1

    def value(self, y: float) -> float:
        import math
        p = sum(float(c) * y ** j for j, c in enumerate(self.poly))
        return p * math.exp(-y)


def _dpoly(coeffs):
    return [c * (j + 1) for j, c in enumerate(coeffs[1:])]


def _padd(a, b):
    out = list(a) + [a[0] * 0] * max(0, len(b) - len(a))
    for j, c in enumerate(b):
        out[j] = out[j] + c
    return out


def _pscale(a, s):
    return [c * s for c in a]


def _pmul(a, b):
    out = [a[0] * 0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] = out[i + j] + ai * bj
    return out


def _T(coeffs):
    """p -> p' - p: one d/dy applied to p(y) e^{-y}."""
    return _padd(_dpoly(coeffs) + [coeffs[0] * 0], _pscale(coeffs, -1))


def _U(coeffs):
    """p -> p'' - 2p': (d^2/dy^2 - 1) applied to p(y) e^{-y}."""
    d1 = _dpoly(coeffs)
    d2 = _dpoly(d1)
    return _padd(d2 + [coeffs[0] * 0] * 2, _pscale(d1 + [coeffs[0] * 0], -2))[:max(1, len(coeffs) - 1)]


def _profile_poly(m: int, lam):
    """Coefficients of p solving the initial conditions, over any ring
    containing lam (Fraction or RationalPoly)."""
    if m not in PROFILE_ORDERS:
        raise ValueError(f"order m must be in {PROFILE_ORDERS}, got {m}")
    one = lam * 0 + 1
    # phi^{(i)}(0) = (T^i p)(0); forward-substitute p_0..p_{m-1}
    p = [one, one]  # phi(0)=1, phi'(0) = p1 - p0 = 0
    if m >= 3:
        # phi''(0) = 2 p2 - 2 p1 + p0 = -lam
        p.append((one * 2 - one - lam) * Fraction(1, 2))
    if m == 4:
        # phi'''(0) = 6 p3 - 6 p2 + 3 p1 - p0 = 0
        p.append((p[2] * 6 - one * 3 + one) * Fraction(1, 6))
    return p


def profile(m: int, lam=Fraction(0)) -> ExpPolyProfile:
    """The unique bounded profile with the stated initial data (exact)."""
    lam = Fraction(lam)
    return ExpPolyProfile(m, lam, tuple(_profile_poly(m, lam)))


def profile_energy_poly(m: int) -> RationalPoly:
    """Profile energy as an exact polynomial in lambda.

    m=2: int (phi'' - phi)^2 = 2 (lambda-free);
    m=3: int [(phi''-phi)^2 + (phi'''-phi')^2] = 3 lam^2 - 2 lam + 3;
    m=4: int (phi'''' - 2 phi'' + phi)^2 = 20 lam^2 - 8 lam + 4.
    """
    p = _profile_poly(m, LAM_SYM)
    u = _U(p)
    if m == 2:
        dens = _pmul(u, u)
    elif m == 3:
        tu = _T(u)
        dens = _padd(_pmul(u, u), _pmul(tu, tu))
    else:
        uu = _U(u)
        dens = _pmul(uu, uu)
    total = exppoly_integral(dens, 2)
    return total if isinstance(total, RationalPoly) else RationalPoly.const(total)


def profile_energy(m: int, lam=Fraction(0)) -> Fraction:
    """Exact profile energy at a concrete lambda."""
    e = profile_energy_poly(m)
    return e.eval(lam=Fraction(lam))


def optimal_lambda(m: int) -> tuple:
    """Vertex of the quadratic energy: (minimizer, minimum), exact."""
    if m not in (3, 4):
        raise ValueError("only orders 3 and 4 carry a free lambda")
    e = profile_energy_poly(m)
    a = e.terms.get((0, 0, 2), Fraction(0))
    b = e.terms.get((0, 0, 1), Fraction(0))
    c = e.terms.get((0, 0, 0), Fraction(0))
    lam_star = -b / (2 * a)
    return lam_star, c - b * b / (4 * a)


def halfspace_prefactor(m: int) -> Fraction:
    """n-independent factor sqrt(pi) Gamma(m) / Gamma(m - 1/2) of the
    half-space trace constant c_m; equals 1, 2, 8/3, 16/5 for m = 1..4."""
    if m < 1:
        raise ValueError("m must be >= 1")
    ratio = gamma_half(m) / gamma_half(Fraction(2 * m - 1, 2))
    # sqrt(pi) * [Gamma(m)/Gamma(m-1/2)] is rational
    assert ratio.sqrt_pi_exponent == -1
    return ratio.rational


def c_alpha(m: int, n: int) -> Fraction:
    """The half-space constant c_alpha at alpha = m for dimension n:
    sqrt(pi) Gamma(m) Gamma((n-1)/2 + m) / (Gamma((n+1)/2 - m) Gamma(m - 1/2)).

    Exact; requires n > 2m - 1 so all Gamma arguments are positive.
    """
    num = gamma_half(m) * gamma_half(Fraction(n - 1, 2) + m)
    den = gamma_half(Fraction(n + 1, 2) - m) * gamma_half(Fraction(2 * m - 1, 2))
    ratio = num / den
    assert ratio.sqrt_pi_exponent == -1
    return ratio.rational
