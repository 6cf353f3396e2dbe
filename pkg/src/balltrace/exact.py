"""Exact arithmetic layer: half-integer Gamma values, sparse multivariate
polynomials over the rationals in the symbols k, n, lam, and the
exponential-polynomial integrals used by the half-space profiles.

Every coefficient identity in the package is decided here, over Q, with no
floating point involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, pi, sqrt
from typing import Iterable, Mapping, Sequence, Union

Rat = Fraction
RatLike = Union[int, Fraction]

VARS = ("k", "n", "lam")
_VAR_INDEX = {v: i for i, v in enumerate(VARS)}


def pochhammer(x: RatLike, m: int) -> Fraction:
    """Rising factorial x(x+1)...(x+m-1); 1 for m=0."""
    if m < 0:
        raise ValueError("pochhammer requires m >= 0")
    out = Fraction(1)
    x = Fraction(x)
    for j in range(m):
        out *= x + j
    return out


@dataclass(frozen=True)
class HalfGamma:
    """Exact Gamma value at a positive half-integer: rational * sqrt(pi)^e.

    gamma_half returns e in {0, 1}; products and quotients may carry any
    integer exponent (even exponents could be folded into pi powers, but the
    identities here only ever need the exponent to cancel).
    """

    rational: Fraction
    sqrt_pi_exponent: int

    def __float__(self) -> float:
        return float(self.rational) * sqrt(pi) ** self.sqrt_pi_exponent

    def __mul__(self, other: "HalfGamma") -> "HalfGamma":
        return HalfGamma(self.rational * other.rational,
                         self.sqrt_pi_exponent + other.sqrt_pi_exponent)

    def __truediv__(self, other: "HalfGamma") -> "HalfGamma":
        return HalfGamma(self.rational / other.rational,
                         self.sqrt_pi_exponent - other.sqrt_pi_exponent)

    def as_rational(self) -> Fraction:
        """The value as a Fraction; requires the sqrt(pi) factor to cancel."""
        if self.sqrt_pi_exponent != 0:
            raise ValueError("value carries a sqrt(pi) factor")
        return self.rational


def gamma_half(x: RatLike) -> HalfGamma:
    """Exact Gamma(x) for x a positive integer or half-integer."""
    x = Fraction(x)
    two_x = 2 * x
    if two_x.denominator != 1 or two_x <= 0:
        raise ValueError(f"gamma_half requires positive half-integer, got {x}")
    if x.denominator == 1:
        return HalfGamma(Fraction(factorial(int(x) - 1)), 0)
    # x = j + 1/2: Gamma(x) = (1/2)_j * sqrt(pi)
    j = int(x - Fraction(1, 2))
    return HalfGamma(pochhammer(Fraction(1, 2), j), 1)


class RationalPoly:
    """Sparse polynomial over Q in the symbols k, n, lam.

    Terms map exponent triples to nonzero Fractions; equality is structural.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple, RatLike] | None = None):
        clean = {}
        if terms:
            for exp, c in terms.items():
                c = Fraction(c)
                if c != 0:
                    clean[tuple(exp)] = c
        self.terms: dict = clean

    # -- constructors ------------------------------------------------------
    @staticmethod
    def zero() -> "RationalPoly":
        return RationalPoly()

    @staticmethod
    def const(c: RatLike) -> "RationalPoly":
        return RationalPoly({(0, 0, 0): Fraction(c)})

    @staticmethod
    def var(name: str) -> "RationalPoly":
        exp = [0, 0, 0]
        exp[_VAR_INDEX[name]] = 1
        return RationalPoly({tuple(exp): Fraction(1)})

    # -- basic queries -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def variables(self) -> set:
        used = set()
        for exp in self.terms:
            for i, e in enumerate(exp):
                if e:
                    used.add(VARS[i])
        return used

    def degree(self, name: str) -> int:
        i = _VAR_INDEX[name]
        return max((exp[i] for exp in self.terms), default=0)

    def sorted_terms(self) -> list:
        """Terms in total-degree-then-lex order (canonical presentation)."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    # -- arithmetic --------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, RationalPoly):
            return other
        return RationalPoly.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for exp, c in other.terms.items():
            out[exp] = out.get(exp, Fraction(0)) + c
        return RationalPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return RationalPoly({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                out[exp] = out.get(exp, Fraction(0)) + c1 * c2
        return RationalPoly(out)

    __rmul__ = __mul__

    def __pow__(self, m: int):
        if m < 0:
            raise ValueError("negative power")
        out = RationalPoly.const(1)
        base = self
        while m:
            if m & 1:
                out = out * base
            base = base * base
            m >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalPoly.const(other)
        if not isinstance(other, RationalPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- evaluation --------------------------------------------------------
    def eval(self, **values: RatLike) -> Fraction:
        """Exact evaluation; every symbol that occurs must be supplied."""
        missing = self.variables() - set(values)
        if missing:
            raise ValueError(f"unbound symbols {sorted(missing)}")
        vals = [Fraction(values.get(v, 0)) for v in VARS]
        total = Fraction(0)
        for exp, c in self.terms.items():
            t = c
            for i, e in enumerate(exp):
                if e:
                    t *= vals[i] ** e
            total += t
        return total

    def eval_float(self, **values: float) -> float:
        missing = self.variables() - set(values)
        if missing:
            raise ValueError(f"unbound symbols {sorted(missing)}")
        vals = [float(values.get(v, 0.0)) for v in VARS]
        total = 0.0
        for exp, c in self.terms.items():
            t = float(c)
            for i, e in enumerate(exp):
                if e:
                    t *= vals[i] ** e
            total += t
        return total

    def subs(self, **values: RatLike) -> "RationalPoly":
        """Substitute some symbols by rationals, keeping the rest."""
        out = {}
        for exp, c in self.terms.items():
            newexp = list(exp)
            coeff = c
            for name, val in values.items():
                i = _VAR_INDEX[name]
                if exp[i]:
                    coeff *= Fraction(val) ** exp[i]
                    newexp[i] = 0
            key = tuple(newexp)
            out[key] = out.get(key, Fraction(0)) + coeff
        return RationalPoly(out)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for exp, c in self.sorted_terms():
            mono = "*".join(
                f"{VARS[i]}^{e}" if e > 1 else VARS[i]
                for i, e in enumerate(exp) if e
            )
            bits.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(bits)


def poly_equal(p: RationalPoly, q: RationalPoly) -> bool:
    """Exact structural equality of two polynomials."""
    return p.terms == q.terms


# convenience symbols
K_SYM = RationalPoly.var("k")
N_SYM = RationalPoly.var("n")
LAM_SYM = RationalPoly.var("lam")
# spectral eigenvalue K = k(n-1+k) of -Delta on S^n
K_EIGEN = K_SYM * (N_SYM - 1 + K_SYM)


def gamma_ratio_poly(two_gamma: int) -> RationalPoly:
    """Gamma(k+n/2+g)/Gamma(k+n/2-g) for 2g = two_gamma, as a polynomial in
    (k, n): the product of 2g consecutive shifts starting at k+(n-2g)/2."""
    if two_gamma < 1:
        raise ValueError("two_gamma must be a positive integer")
    out = RationalPoly.const(1)
    for j in range(two_gamma):
        out = out * (K_SYM + Fraction(-two_gamma, 2) + Fraction(1, 2) * N_SYM + j)
    return out


def _k_coeff_layers(p: RationalPoly) -> dict:
    """View p as a polynomial in k with coefficients in Q[n, lam]."""
    layers: dict = {}
    for exp, c in p.terms.items():
        d = exp[0]
        layers.setdefault(d, {})[(0, exp[1], exp[2])] = c
    return {d: RationalPoly(t) for d, t in layers.items()}


def _from_k_layers(layers: Mapping[int, RationalPoly]) -> RationalPoly:
    out = RationalPoly.zero()
    for d, coeff in layers.items():
        out = out + coeff * (K_SYM ** d)
    return out


def divmod_in_k(p: RationalPoly, d: RationalPoly):
    """Polynomial division of p by d in the variable k.

    The leading k-coefficient of d must be a nonzero rational constant, so
    the division is exact over Q[n, lam].  Returns (quotient, remainder).
    """
    dl = _k_coeff_layers(d)
    ddeg = max(dl)
    lead = dl[ddeg]
    if lead.variables():
        raise ValueError("divisor leading k-coefficient must be constant")
    lead_c = lead.terms.get((0, 0, 0), Fraction(0))
    if lead_c == 0:
        raise ZeroDivisionError("zero divisor")
    rem = _k_coeff_layers(p)
    quo: dict = {}
    while rem and max(rem) >= ddeg:
        top = max(rem)
        factor = rem[top] * (Fraction(1) / lead_c)
        quo[top - ddeg] = factor
        for dd, dc in dl.items():
            tgt = top - ddeg + dd
            newc = rem.get(tgt, RationalPoly.zero()) - factor * dc
            if newc.is_zero():
                rem.pop(tgt, None)
            else:
                rem[tgt] = newc
        rem.pop(top, None)
    return _from_k_layers(quo), _from_k_layers(rem)


def expand_in_K(p: RationalPoly) -> list:
    """Write p as sum_j c_j(n) * K^j with K = k(n-1+k).

    Returns [c_0, c_1, ...].  Raises if p is not a polynomial in K, i.e. if
    any division step leaves a k-dependent remainder.
    """
    coeffs = []
    rem = p
    while True:
        q, r = divmod_in_k(rem, K_EIGEN)
        if r.degree("k") > 0:
            raise ValueError("not expressible in powers of k(n-1+k)")
        coeffs.append(r)
        if q.is_zero():
            break
        rem = q
    return coeffs


def exppoly_integral(coeffs: Sequence, rate: RatLike) -> Fraction:
    """Exact integral over [0, inf) of p(y) e^{-rate*y} for polynomial p
    given by its coefficient list: sum_j p_j * j! / rate^(j+1).

    Coefficients may be Fractions or RationalPoly (then the result is one).
    """
    rate = Fraction(rate)
    if rate <= 0:
        raise ValueError("rate must be positive")
    total = None
    for j, c in enumerate(coeffs):
        piece = c * (Fraction(factorial(j)) / rate ** (j + 1))
        total = piece if total is None else total + piece
    if total is None:
        return Fraction(0)
    return total
