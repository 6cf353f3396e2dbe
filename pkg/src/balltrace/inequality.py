"""Evaluate both sides of the trace, Beckner, weighted Beckner, sphere
Sobolev and Lebedev-Milin inequalities; verify the exact coefficient
identities; probe sharpness and strictness.

Exact layer first: for each order 2m the multiplier identity

    prefactor(m) * lambda_k((2m-1)/2) = S_{2m}(k, n) + sum_j c_j(n) K^j,

with K = k(n-1+k) and S_{2m} the interior energy coefficient, is decided
over Q by polynomial division.  The derived boundary coefficients c_j(n)
feed every trace report, so sharpness at the extremal family is a theorem
of the exact layer, not a tuning target.

Order 8 caveat, verified here exactly: the published boundary-coefficient
table and the published spectral display are consistent with each other but
not with the published boundary conditions; the energy of the actual
boundary-conditioned extension differs for n > 7 (they coincide at n = 7).
Reports use the coefficients derived from the actual extension energy and
carry a note whenever the published table disagrees.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .exact import (K_EIGEN, N_SYM, RationalPoly, expand_in_K,
                    gamma_ratio_poly, poly_equal)
from .extension import interior_energy_coefficient
from .halfspace import halfspace_prefactor
from .specfun import beckner_A, weighted_radial, weighted_radial_derivative
from .sphere import (UnderResolvedWarning, ZonalFunction, boundary_energy,
                     default_quad_degree, lp_norm, sphere_surface,
                     zonal_quadrature)

__all__ = [
    "InequalityReport",
    "CoefficientIdentity",
    "sharp_constant",
    "coefficient_identity",
    "recast_coefficients",
    "trace_report",
    "beckner_report",
    "weighted_beckner_report",
    "sphere_sobolev_report",
    "lm_report",
    "extremality_scan",
    "lm_constants",
]

EQUALITY_TOL = 1e-6
STRICTNESS_TOL = 1e-9

# spectral-multiplier convention: the quadratic form int f P_{2gamma} f uses
# the eigenvalue Gamma(k+n/2+gamma)/Gamma(k+n/2-gamma), i.e. the operator
# (-Lap)^gamma in quadratic-form sense pairs with the constant of exponent
# 2*gamma/n on the left.
MULTIPLIER_CONVENTION = "lambda_k(gamma) = Gamma(k+n/2+gamma)/Gamma(k+n/2-gamma)"


@dataclass(frozen=True)
class InequalityReport:
    """Evaluated instance of one inequality."""

    theorem: str
    m: int
    n: int
    kmax: int
    quad_degree: int
    lhs: float
    rhs: float
    sharp_constant: float
    slack: float
    rel_slack: float
    equality_expected: bool
    passed: bool
    notes: tuple = ()

    def as_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "order": 2 * self.m,
            "dimension": self.n,
            "kmax": self.kmax,
            "quad_degree": self.quad_degree,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "sharp_constant": self.sharp_constant,
            "slack": self.slack,
            "rel_slack": self.rel_slack,
            "equality_expected": self.equality_expected,
            "pass": self.passed,
            "notes": list(self.notes),
        }


def _make_report(theorem, m, n, kmax, quad_degree, lhs, rhs, sharp,
                 equality_expected, notes=(),
                 equality_tol=EQUALITY_TOL, strictness_tol=STRICTNESS_TOL):
    slack = rhs - lhs
    rel = slack / abs(rhs) if rhs != 0 else slack
    if equality_expected:
        passed = abs(rel) < equality_tol
    else:
        passed = slack > -strictness_tol * abs(rhs)
    return InequalityReport(theorem, m, n, kmax, quad_degree, lhs, rhs,
                            sharp, slack, rel, equality_expected, passed,
                            tuple(notes))


def sharp_constant(n: int, s: float) -> float:
    """Gamma((n+s)/2)/Gamma((n-s)/2) * omega_n^{s/n}, 0 < s < n."""
    if not 0 < s < n:
        raise ValueError(f"need 0 < s < n, got s={s}, n={n}")
    lg = math.lgamma
    return math.exp(lg((n + s) / 2) - lg((n - s) / 2)) * sphere_surface(n) ** (s / n)


# ---------------------------------------------------------------------------
# exact coefficient layer
# ---------------------------------------------------------------------------

def _published_boundary_coeffs(m: int) -> list:
    """Published boundary coefficients, lowest K-power first."""
    n = N_SYM
    if m == 1:
        return [(n - 1) * Fraction(1, 2)]
    if m == 2:
        return [(n + 1) * (n - 3) * Fraction(1, 2), RationalPoly.const(2)]
    if m == 3:
        return [
            (n - 5) * (n - 3) * (n + 3) * (n * n + 4 * n - 9) * Fraction(1, 18),
            (n * n * n + n * n - 21 * n - 9) * Fraction(4, 9),
            (n + 3) * Fraction(8, 9),
        ]
    if m == 4:
        return [
            (n - 7) * (n + 5) * (5 * n ** 5 - 19 * n ** 4 - 74 * n ** 3
                                 - 26 * n ** 2 + 615 * n + 3135) * Fraction(1, 200),
            (15 * n ** 5 - 57 * n ** 4 - 482 * n ** 3 + 582 * n ** 2
             + 4325 * n + 10485) * Fraction(1, 50),
            (30 * n ** 3 - 54 * n ** 2 - 542 * n - 490) * Fraction(1, 25),
            (5 * n + 1) * Fraction(8, 25),
        ]
    raise ValueError(f"unsupported order m={m}")


def _published_s8_display() -> RationalPoly:
    """The published order-8 spectral display (not the extension energy for
    n != 7; kept verbatim for the identity check)."""
    k, n = RationalPoly.var("k"), N_SYM
    bracket = (80 * k ** 5 + 160 * k ** 4 * n + 120 * k ** 3 * n ** 2
               + 40 * k ** 2 * n ** 3 + 5 * k * n ** 4
               - 208 * k ** 4 - 336 * k ** 3 * n - 192 * k ** 2 * n ** 2
               - 44 * k * n ** 3 - 3 * n ** 4
               - 184 * k ** 3 - 136 * k ** 2 * n + 2 * k * n ** 2
               + 12 * n ** 3 + 912 * k ** 2 + 732 * k * n + 138 * n ** 2
               - 375 * k - 285 * n - 1680)
    return (n + 5 + 2 * k) * (n - 7 + 2 * k) * bracket * Fraction(1, 100)


@lru_cache(maxsize=None)
def recast_coefficients(m: int) -> tuple:
    """Boundary coefficients c_j(n) with
    prefactor(m) * lambda_k((2m-1)/2) = S_{2m} + sum_j c_j(n) K^j,
    derived by exact division; the identity is re-verified on return."""
    pref = halfspace_prefactor(m)
    lam = gamma_ratio_poly(2 * m - 1)
    S = interior_energy_coefficient(m)
    rest = lam * pref - S
    coeffs = expand_in_K(rest)
    # re-assemble and confirm the decomposition is exact
    back = RationalPoly.zero()
    for j, c in enumerate(coeffs):
        back = back + c * K_EIGEN ** j
    assert poly_equal(back, rest)
    return tuple(coeffs)


@dataclass(frozen=True)
class CoefficientIdentity:
    """Outcome of the exact multiplier identity check for one order."""

    m: int
    ok: bool
    residual: RationalPoly
    derived: tuple        # c_j(n), lowest K-power first, from the extension energy
    published: tuple      # the coefficient table as commonly stated
    published_matches: bool
    notes: tuple = ()

    def __iter__(self):  # (boolean, residual) unpacking
        return iter((self.ok, self.residual))


@lru_cache(maxsize=None)
def coefficient_identity(m: int) -> CoefficientIdentity:
    """Verify the order-2m recast identity exactly over Q.

    For every order the identity with the *derived* coefficients is exact by
    construction and re-checked; the residual reported is for the published
    closed form, namely: the K-expansion against the published coefficient
    table (and for order 8, the published table against the published
    spectral display, which is the identity actually asserted alongside it).
    """
    if m not in (2, 3, 4):
        raise ValueError("coefficient_identity covers m in {2, 3, 4}")
    pref = halfspace_prefactor(m)
    lam = gamma_ratio_poly(2 * m - 1)
    S_true = interior_energy_coefficient(m)
    derived = recast_coefficients(m)
    published = tuple(_published_boundary_coeffs(m))
    pub_matches = len(published) == len(derived) and all(
        poly_equal(a, b) for a, b in zip(published, derived))

    notes = []
    if m == 4:
        # the asserted identity: pref*lambda = S8_display + sum d_j K^j
        S_pub = _published_s8_display()
        residual = lam * pref - S_pub
        for j, c in enumerate(published):
            residual = residual - c * K_EIGEN ** j
        ok = residual.is_zero()
        if not pub_matches:
            notes.append(
                "published order-8 boundary table is self-consistent with the "
                "published spectral display but does not match the energy of "
                "the boundary-conditioned extension for n != 7; derived "
                "coefficients (equal at n = 7) are used in reports")
    else:
        residual = lam * pref - S_true
        for j, c in enumerate(published):
            residual = residual - c * K_EIGEN ** j
        ok = residual.is_zero()
        if m == 2:
            # decides the /4-vs-/2 display question: the k-free term must be
            # the theorem constant (n+1)(n-3)/2
            const = derived[0]
            b_n = (N_SYM + 1) * (N_SYM - 3) * Fraction(1, 2)
            quarter = (N_SYM + 1) * (N_SYM - 3) * Fraction(1, 4)
            if poly_equal(const, b_n):
                notes.append(
                    "k=0 constant verified as (n+1)(n-3)/2, matching the "
                    "order-4 theorem; the (n-3)(n+1)/4 recast display is "
                    "inconsistent and flagged")
            elif poly_equal(const, quarter):
                notes.append("k=0 constant equals the /4 display variant")
    return CoefficientIdentity(m, ok, residual, derived, published,
                               pub_matches, tuple(notes))


def p4_factorization_identity() -> bool:
    """lambda_k(2) = (c_k + n(n-2)/4)(c_k + (n+2)(n-4)/4) with c_k = k(n-1+k)."""
    n = N_SYM
    lhs = gamma_ratio_poly(4)
    rhs = (K_EIGEN + n * (n - 2) * Fraction(1, 4)) \
        * (K_EIGEN + (n + 2) * (n - 4) * Fraction(1, 4))
    return poly_equal(lhs, rhs)


# ---------------------------------------------------------------------------
# spectral helper sums
# ---------------------------------------------------------------------------

def _interior_spectral(m: int, f: ZonalFunction) -> float:
    S = interior_energy_coefficient(m)
    total = 0.0
    for k in range(f.kmax + 1):
        nu = float(f.mode_norms[k])
        if nu:
            total += float(S.eval(k=k, n=f.n)) * nu
    return total


def _boundary_combination(m: int, f: ZonalFunction) -> float:
    coeffs = recast_coefficients(m)
    ks = np.arange(f.kmax + 1, dtype=np.float64)
    K = ks * (f.n - 1 + ks)
    total = 0.0
    for j, c in enumerate(coeffs):
        total += float(c.eval(n=f.n)) * float(np.sum(K ** j * f.mode_norms))
    return total


def _multiplier_sum(two_gamma_half: float, f: ZonalFunction) -> float:
    """sum_k Gamma(k+n/2+g)/Gamma(k+n/2-g) * mode_norms[k] for g real."""
    lg = math.lgamma
    total = 0.0
    half_n = f.n / 2.0
    for k in range(f.kmax + 1):
        nu = float(f.mode_norms[k])
        if nu:
            total += math.exp(lg(k + half_n + two_gamma_half)
                              - lg(k + half_n - two_gamma_half)) * nu
    return total


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

def trace_report(m: int, n: int, f: ZonalFunction, equality_expected: bool,
                 quad_degree: int | None = None,
                 equality_tol: float = EQUALITY_TOL,
                 strictness_tol: float = STRICTNESS_TOL) -> InequalityReport:
    """Order-2m sharp trace inequality on B^{n+1} for boundary datum f.

    lhs = prefactor * Gamma-ratio * omega_n^{(2m-1)/n} * ||f||_p^2 with
    p = 2n/(n-2m+1); rhs = spectral interior energy of the
    boundary-conditioned extension plus the derived boundary combination.
    """
    if n <= 2 * m - 1:
        raise ValueError(f"trace order 2m={2 * m} needs n > {2 * m - 1}")
    if f.n != n:
        raise ValueError("dimension mismatch between f and n")
    if quad_degree is None:
        quad_degree = default_quad_degree(f.kmax)
    s = 2 * m - 1
    pref = float(halfspace_prefactor(m))
    sharp = pref * sharp_constant(n, s)
    lhs = sharp * lp_norm(f, 2 * n / (n - s), quad_degree, check=True) ** 2
    rhs = _interior_spectral(m, f) + _boundary_combination(m, f)
    notes = [MULTIPLIER_CONVENTION]
    if m == 4:
        notes.append("order-8 boundary coefficients derived by the exact "
                     "engine (published table is not sharp for n > 7)")
    return _make_report(f"trace-order-{2 * m}", m, n, f.kmax, quad_degree,
                        lhs, rhs, sharp, equality_expected, notes,
                        equality_tol, strictness_tol)


def beckner_report(m: int, n: int, s: float, f: ZonalFunction,
                   equality_expected: bool,
                   quad_degree: int | None = None,
                   equality_tol: float = EQUALITY_TOL,
                   strictness_tol: float = STRICTNESS_TOL) -> InequalityReport:
    """Order-2m Beckner-type inequality with fractional parameter s."""
    if m not in (1, 2, 3):
        raise ValueError("beckner_report covers m in {1, 2, 3}")
    if not 0 < s < n / (2 * m - 1):
        raise ValueError(f"need 0 < s < n/(2m-1), got s={s}")
    if f.n != n:
        raise ValueError("dimension mismatch between f and n")
    if quad_degree is None:
        quad_degree = default_quad_degree(f.kmax)
    w = 2 * m - 1
    pref = float(halfspace_prefactor(m))
    sharp = pref * sharp_constant(n, w * s)
    lhs = sharp * lp_norm(f, 2 * n / (n - w * s), quad_degree, check=True) ** 2
    interior = _interior_spectral(m, f)
    correction = pref * _multiplier_sum(w * s / 2.0, f) - interior
    rhs = interior + correction
    return _make_report(f"beckner-order-{2 * m}", m, n, f.kmax, quad_degree,
                        lhs, rhs, sharp, equality_expected,
                        [MULTIPLIER_CONVENTION],
                        equality_tol, strictness_tol)


def _weighted_energy_quadrature(b: float, f: ZonalFunction,
                                npoints: int = 160) -> float:
    """int_B |grad u|^2 ((1-|z|^2)/2)^b dz by radial Gauss-Jacobi rules.

    Per mode the integrand blows up like (1-r)^{-|b|} at the boundary
    (carried by f' squared when b > 0, by the angular f^2 term when b < 0);
    that factor is absorbed into the Jacobi weight.
    """
    from scipy.special import roots_jacobi
    n = f.n
    x, wq = roots_jacobi(npoints, -abs(b), 0.0)
    r = 0.5 * (x + 1.0)
    scale = 0.5 ** (1.0 - abs(b))
    smooth_exp = b + abs(b)  # 2b for b > 0, 0 for b < 0
    total = 0.0
    for k in range(1, f.kmax + 1):
        nu = float(f.mode_norms[k])
        if nu == 0.0 or abs(nu) < 1e-18 * float(np.max(f.mode_norms)):
            continue
        ck = k * (n - 1 + k)
        vals = np.empty_like(r)
        for i, ri in enumerate(r):
            fv = weighted_radial(b, k, n, ri)
            fp = weighted_radial_derivative(b, k, n, ri)
            dens = (fp * fp + ck * fv * fv / ri ** 2) * ri ** n
            # integrand = dens * ((1-r)(1+r)/2)^b = (1-r)^{-|b|} * smooth
            vals[i] = dens * ((1.0 + ri) / 2.0) ** b * (1.0 - ri) ** smooth_exp
        total += scale * float(np.sum(wq * vals)) * nu
    return total


def weighted_beckner_report(n: int, s: float, f: ZonalFunction,
                            equality_expected: bool = True,
                            quad_degree: int | None = None,
                            cross_check: bool = True,
                            equality_tol: float = 1e-4,
                            strictness_tol: float = STRICTNESS_TOL) -> InequalityReport:
    """Weighted order-2 Beckner inequality (weight ((1-|z|^2)/2)^{1-s}).

    The weighted energy is evaluated spectrally as sum_k A(1-s,k) |Y_k|^2
    and cross-checked by radial quadrature of the weighted profiles.
    """
    if not 0 < s < min(2, n):
        raise ValueError(f"need 0 < s < min(2, n), got s={s}")
    if f.n != n:
        raise ValueError("dimension mismatch between f and n")
    if quad_degree is None:
        quad_degree = default_quad_degree(f.kmax)
    b = 1.0 - s
    sharp = sharp_constant(n, s)
    lhs = sharp * lp_norm(f, 2 * n / (n - s), quad_degree, check=True) ** 2
    energy_spectral = sum(beckner_A(b, k, n) * float(f.mode_norms[k])
                          for k in range(1, f.kmax + 1))
    notes = [MULTIPLIER_CONVENTION]
    if cross_check and b != 0.0:
        energy_quad = _weighted_energy_quadrature(b, f)
        rel = abs(energy_quad - energy_spectral) / max(abs(energy_spectral), 1e-300)
        if rel > 1e-5:
            raise ArithmeticError(
                f"weighted energy disagreement: spectral {energy_spectral!r} "
                f"vs quadrature {energy_quad!r} ({rel:.2e} relative)")
        notes.append(f"weighted energy spectral/quadrature agreement {rel:.2e}")
    remainder = _multiplier_sum(s / 2.0, f) - sum(
        beckner_A(b, k, n) * float(f.mode_norms[k]) for k in range(f.kmax + 1))
    rhs = energy_spectral + remainder
    return _make_report("weighted-beckner-order-2", 1, n, f.kmax, quad_degree,
                        lhs, rhs, sharp, equality_expected, notes,
                        equality_tol, strictness_tol)


def sphere_sobolev_report(n: int, gamma: float, f: ZonalFunction,
                          equality_expected: bool,
                          quad_degree: int | None = None,
                          equality_tol: float = EQUALITY_TOL,
                          strictness_tol: float = STRICTNESS_TOL) -> InequalityReport:
    """Sharp Sobolev inequality on S^n for the spectral multiplier of order
    2*gamma: lhs with constant Gamma((n+2g)/2)/Gamma((n-2g)/2) omega^{2g/n},
    rhs = sum_k lambda_k(gamma) |Y_k|^2."""
    if not 0 < gamma < n / 2:
        raise ValueError(f"need 0 < gamma < n/2, got {gamma}")
    if f.n != n:
        raise ValueError("dimension mismatch between f and n")
    if quad_degree is None:
        quad_degree = default_quad_degree(f.kmax)
    sharp = sharp_constant(n, 2 * gamma)
    lhs = sharp * lp_norm(f, 2 * n / (n - 2 * gamma), quad_degree, check=True) ** 2
    rhs = _multiplier_sum(gamma, f)
    return _make_report("sphere-sobolev", 1, n, f.kmax, quad_degree,
                        lhs, rhs, sharp, equality_expected,
                        [MULTIPLIER_CONVENTION],
                        equality_tol, strictness_tol)


@lru_cache(maxsize=None)
def lm_constants(m: int) -> tuple:
    """(C_m as Fraction, pi exponent) with the Lebedev-Milin right side
    C_m/pi^e * [interior + boundary combination] at n = 2m-1.

    C_m = (n/2) / (prefactor(m) Gamma(n) omega_n) with the pi power split
    off exactly; reproduces the published 1/(4 pi), 3/(16 pi^2),
    5/(128 pi^3) for orders 2, 4, 6.  For order 8 the exact value is
    7/(1536 pi^4); the published 7/(1728 pi^4) fails at the extremals (the
    exact layer and the equality tests both confirm this).
    """
    n = 2 * m - 1
    # omega_{2m-1} = 2 pi^m / Gamma(m)
    om_rat = Fraction(2) / Fraction(math.factorial(m - 1))
    c = Fraction(n, 2) / (halfspace_prefactor(m)
                          * Fraction(math.factorial(n - 1)) * om_rat)
    return c, m


def lm_report(m: int, f: ZonalFunction, equality_expected: bool,
              quad_degree: int | None = None,
              equality_tol: float = EQUALITY_TOL,
              strictness_tol: float = STRICTNESS_TOL) -> InequalityReport:
    """Lebedev-Milin inequality of order 2m on S^{2m-1}.

    lhs = log(omega_n^{-1} int exp((2m-1)(f - mean f))); rhs is the exact
    constant times the order-2m trace quadratic form of f - mean f.
    """
    n = 2 * m - 1
    if f.n != n:
        raise ValueError(f"Lebedev-Milin order {2 * m} lives on S^{n}")
    if quad_degree is None:
        quad_degree = default_quad_degree(f.kmax) + 32
    g = f.without_mean()
    om = sphere_surface(n)
    om_nm1 = sphere_surface(n - 1) if n > 1 else 2.0
    rule = zonal_quadrature(n, quad_degree)
    vals = g.evaluate(rule.nodes)
    integral = om_nm1 * float(np.sum(rule.weights * np.exp(n * vals)))
    refined_rule = zonal_quadrature(n, 2 * quad_degree)
    refined = om_nm1 * float(np.sum(refined_rule.weights
                                    * np.exp(n * g.evaluate(refined_rule.nodes))))
    notes = [MULTIPLIER_CONVENTION]
    if abs(refined - integral) > 1e-9 * abs(integral):
        warnings.warn("exponential integrand moved under node doubling",
                      UnderResolvedWarning, stacklevel=2)
        notes.append("exponential integrand moved under node doubling")
    lhs = math.log(refined / om)
    c_rat, pi_exp = lm_constants(m)
    C = float(c_rat) / math.pi ** pi_exp
    rhs = C * (_interior_spectral(m, g) + _boundary_combination(m, g))
    if m == 4:
        notes.append("order-8 constant 7/(1536 pi^4) from the exact layer; "
                     "the published 7/(1728 pi^4) combination fails at the "
                     "extremal family")
    return _make_report(f"lebedev-milin-order-{2 * m}", m, n, f.kmax,
                        quad_degree, lhs, rhs, C, equality_expected, notes,
                        equality_tol, strictness_tol)


# ---------------------------------------------------------------------------
# strictness probes
# ---------------------------------------------------------------------------

_REPORTS = {
    "trace": lambda params, f: trace_report(
        params["m"], params["n"], f, equality_expected=False),
    "beckner": lambda params, f: beckner_report(
        params["m"], params["n"], params["s"], f, equality_expected=False),
    "weighted": lambda params, f: weighted_beckner_report(
        params["n"], params["s"], f, equality_expected=False, cross_check=False),
    "sphere": lambda params, f: sphere_sobolev_report(
        params["n"], params["gamma"], f, equality_expected=False),
    "lm": lambda params, f: lm_report(params["m"], f, equality_expected=False),
}


def extremality_scan(report_kind: str, params: dict, f0: ZonalFunction,
                     direction: int, epsilons) -> list:
    """Slack of the chosen report under coefficient perturbations of f0.

    Perturbs the Gegenbauer coefficient of the given mode index by each
    epsilon; at an extremal the slack vanishes at 0 and grows with |eps|.
    """
    if report_kind not in _REPORTS:
        raise ValueError(f"unknown report kind {report_kind!r}")
    run = _REPORTS[report_kind]
    out = []
    for eps in epsilons:
        f = f0.perturbed(direction, eps) if eps != 0.0 else f0
        rep = run(params, f)
        out.append((float(eps), rep.slack))
    return out
