"""Floating-point special functions: Gamma, the Gauss hypergeometric series,
and the weighted-extension limit constant A(b, k) with its independent
extrapolation oracle.

The limit r -> 1 of ((1-r^2)/2)^b f_k'(r) is computed two ways on purpose:
the closed form uses the Gamma product, while weighted_limit climbs a
geometric ladder of radii and extrapolates, so agreement between the two is
a real test rather than a tautology.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels
from ._kernels._purepy import dd_add, dd_mul

__all__ = [
    "SeriesNonConvergence",
    "gamma_float",
    "gauss_2f1",
    "HypergeometricParams",
    "beckner_A",
    "weighted_radial",
    "weighted_radial_derivative",
    "weighted_limit",
    "LimitEstimate",
]


class SeriesNonConvergence(RuntimeError):
    """Raised when the hypergeometric series exceeds its term budget."""


def gamma_float(x: float) -> float:
    """Gamma(x) for x > 0 (platform Lanczos-type implementation)."""
    if x <= 0:
        raise ValueError(f"gamma_float requires x > 0, got {x}")
    return math.gamma(x)


def gauss_2f1(a: float, b: float, c: float, t: float,
              tol: float = 1e-14, maxterms: int = 1000000) -> float:
    """Gauss series 2F1(a, b; c; t) for t in [0, 1).

    Summation stops once a running geometric tail bound falls below ``tol``
    of the partial sum.  Raises SeriesNonConvergence past ``maxterms``.
    """
    if c <= 0 and float(c).is_integer():
        raise ValueError("c must not be a non-positive integer")
    if not 0.0 <= t < 1.0:
        raise ValueError(f"t must lie in [0, 1), got {t}")
    value, terms, converged = _kernels.hyp2f1(a, b, c, t, tol, maxterms)
    if not converged:
        raise SeriesNonConvergence(
            f"2F1({a},{b};{c};{t}) did not converge within {maxterms} terms")
    return value


@dataclass(frozen=True)
class HypergeometricParams:
    """Parameters (alpha_k, beta_k; gamma_k) of the weighted radial ODE.

    alpha_k and beta_k are the roots of X^2 - ((n-1)/2 + k + b) X + kb/2.
    """

    alpha_k: float
    beta_k: float
    gamma_k: float
    b: float
    k: int
    n: int

    def __post_init__(self):
        s = (self.n + 2 * self.k - 1 + 2 * self.b) / 2
        p = self.b * self.k / 2
        scale = max(abs(s), abs(p), 1.0)
        if abs(self.alpha_k + self.beta_k - s) > 8e-16 * scale:
            raise ValueError("alpha+beta invariant violated")
        if abs(self.alpha_k * self.beta_k - p) > 8e-16 * scale:
            raise ValueError("alpha*beta invariant violated")
        if self.gamma_k != (self.n + 2 * self.k + 1) / 2:
            raise ValueError("gamma invariant violated")

    @classmethod
    def from_parameters(cls, b: float, k: int, n: int) -> "HypergeometricParams":
        if abs(b) >= 1:
            raise ValueError(f"|b| must be < 1, got {b}")
        if k < 0:
            raise ValueError("k must be nonnegative")
        s = (n - 1) / 2 + k + b
        p = b * k / 2
        if p == 0.0:
            alpha, beta = (s, 0.0) if s >= 0 else (0.0, s)
        else:
            disc = math.sqrt(s * s - 4 * p)
            alpha = (s + disc) / 2
            beta = p / alpha  # stable small root
        return cls(alpha, beta, (n + 2 * k + 1) / 2, b, k, n)


def beckner_A(b: float, k: int, n: int) -> float:
    """Closed-form boundary limit A(b, k) of the weighted extension.

    A(b,0) = 0; otherwise 2^{-b} Gamma(b+1)/Gamma(1-b) times the Gamma
    product in (alpha_k, beta_k), times k.
    """
    if abs(b) >= 1:
        raise ValueError(f"|b| must be < 1, got {b}")
    if k == 0:
        return 0.0
    par = HypergeometricParams.from_parameters(b, k, n)
    al, be = par.alpha_k, par.beta_k
    lg = math.lgamma
    return (2.0 ** (-b) * math.exp(
        lg(b + 1) - lg(1 - b)
        + lg(be + 1 - b) + lg(al + 1 - b) - lg(al + 1) - lg(be + 1)) * k)


def _norm_const(par: HypergeometricParams) -> float:
    """1 / F(alpha, beta; gamma; 1) via the Gauss summation formula."""
    lg = math.lgamma
    al, be, ga = par.alpha_k, par.beta_k, par.gamma_k
    return math.exp(lg(ga - al) + lg(ga - be) - lg(ga) - lg(ga - al - be))


def weighted_radial(b: float, k: int, n: int, r: float) -> float:
    """Radial profile f_k(r) of the weighted harmonic extension, f_k(1)=1."""
    if not 0.0 <= r < 1.0:
        raise ValueError(f"r must lie in [0, 1), got {r}")
    if k == 0:
        return 1.0
    par = HypergeometricParams.from_parameters(b, k, n)
    F = gauss_2f1(par.alpha_k, par.beta_k, par.gamma_k, r * r)
    return _norm_const(par) * r ** k * F


def weighted_radial_derivative(b: float, k: int, n: int, r: float,
                               extended: bool = False) -> float:
    """f_k'(r) by term-wise differentiation of the hypergeometric series.

    ``extended`` switches to double-double accumulation: for b < 0 the two
    series terms cancel as r -> 1 and standard precision loses digits.
    """
    if not 0.0 <= r < 1.0:
        raise ValueError(f"r must lie in [0, 1), got {r}")
    if k == 0:
        return 0.0
    par = HypergeometricParams.from_parameters(b, k, n)
    al, be, ga = par.alpha_k, par.beta_k, par.gamma_k
    t = r * r
    c1 = _norm_const(par)
    ca = c1 * k * r ** (k - 1)
    cb = c1 * 2.0 * al * be / ga * r ** (k + 1)
    if not extended:
        f1 = gauss_2f1(al, be, ga, t)
        f2 = gauss_2f1(al + 1, be + 1, ga + 1, t)
        return ca * f1 + cb * f2
    h1, l1, m1, ok1 = _kernels.hyp2f1_dd(al, be, ga, t)
    h2, l2, m2, ok2 = _kernels.hyp2f1_dd(al + 1, be + 1, ga + 1, t)
    if not (ok1 and ok2):
        raise SeriesNonConvergence("extended-precision series did not converge")
    ah, al_ = dd_mul(h1, l1, ca, 0.0)
    bh, bl = dd_mul(h2, l2, cb, 0.0)
    sh, sl = dd_add(ah, al_, bh, bl)
    return sh + sl


class LimitEstimate(NamedTuple):
    value: float
    error: float


def _correction_exponents(b: float, count: int = 5) -> list:
    """Leading exponents of the boundary expansion of the scaled derivative.

    The error at radius r behaves like a combination of (1-r^2)^q with
    q in the lattice {i + m(1 - |b|)}; the smallest few drive Richardson.
    """
    base = 1.0 - abs(b)
    qs = sorted({i + m * base for i in range(4) for m in range(4)} - {0.0})
    return [q for q in qs if q > 1e-12][:count]


def weighted_limit(b: float, k: int, n: int, tol: float = 1e-4,
                   jmax: int = 40, extended: bool = False) -> LimitEstimate:
    """Extrapolated limit of ((1-r^2)/2)^b f_k'(r) as r -> 1.

    Evaluates the scaled derivative on the ladder r_j = 1 - 2^{-j} and fits
    the known endpoint expansion; independent of the closed form beckner_A.
    Raises if the ladder has not stabilized to ``tol`` by j = jmax.
    """
    if abs(b) >= 1:
        raise ValueError(f"|b| must be < 1, got {b}")
    if k < 1:
        raise ValueError("weighted_limit requires k >= 1")
    qs = _correction_exponents(b)
    xs: list = []
    vs: list = []
    estimates: list = []
    for j in range(4, jmax + 1):
        r = 1.0 - 2.0 ** (-j)
        try:
            fp = weighted_radial_derivative(b, k, n, r, extended=extended)
        except SeriesNonConvergence:
            break  # deeper rungs exceed the series budget; extrapolate from here
        t = 1.0 - r * r
        xs.append(t)
        vs.append((t / 2.0) ** b * fp)
        if len(vs) <= len(qs):
            continue
        rows = min(len(vs), len(qs) + 3)
        x = np.array(xs[-rows:])
        v = np.array(vs[-rows:])
        design = np.column_stack([np.ones(rows)] + [x ** q for q in qs])
        sol, *_ = np.linalg.lstsq(design, v, rcond=None)
        estimates.append(float(sol[0]))
        # stop climbing once two successive extrapolations agree with a
        # 100x margin on the requested tolerance (deeper rungs double cost)
        if len(estimates) >= 3:
            d1 = abs(estimates[-1] - estimates[-2])
            d2 = abs(estimates[-2] - estimates[-3])
            if max(d1, d2) < 1e-2 * tol * max(1.0, abs(estimates[-1])):
                break
    if len(estimates) < 2:
        raise SeriesNonConvergence(
            f"weighted limit ladder too short by j={jmax}")
    err = abs(estimates[-1] - estimates[-2])
    value = estimates[-1]
    if err > tol * max(1.0, abs(value)):
        raise SeriesNonConvergence(
            f"weighted limit ladder did not stabilize to {tol} by j={jmax}: "
            f"last difference {err:.2e}")
    return LimitEstimate(value, err)
