"""The conformal map B from the upper half-space onto the unit ball, its
factor Phi, the Jacobian, and finite-difference verification of the
covariance identities.

All identity checks pit a nested finite-difference evaluation against
symbolically differentiated reference fields (polynomials, or a Gaussian
bump where closed-form derivatives exist), never FD against FD.  Stencils
are 4th-order central with a Richardson (h, h/2) pair; an extended
double-double mode is available for the triple-Laplacian check, where
standard precision hits its roundoff floor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernels._purepy import dd_add, dd_mul, dd_div

__all__ = [
    "HalfSpacePoint",
    "PolyField",
    "GaussianField",
    "map_B",
    "phi",
    "jacobian_B",
    "check_orthogonality",
    "check_phi_calculus",
    "check_laplacian_identity",
    "check_conformal_covariance",
    "check_covariant_shift",
    "StepSizeFailure",
]


class StepSizeFailure(RuntimeError):
    """The Richardson pair disagrees: the FD step is unusable here."""


@dataclass(frozen=True)
class HalfSpacePoint:
    """Point (x, y) with x in R^n; interior means y > 0."""

    x: np.ndarray
    y: float

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=np.float64))

    @property
    def n(self) -> int:
        return self.x.size

    def coords(self) -> np.ndarray:
        return np.concatenate([self.x, [self.y]])


def map_B(p: HalfSpacePoint) -> np.ndarray:
    """B(x,y) = (2x, |x|^2 + y^2 - 1) / ((1+y)^2 + |x|^2)."""
    M = (1.0 + p.y) ** 2 + float(p.x @ p.x)
    return np.concatenate([2.0 * p.x / M, [(float(p.x @ p.x) + p.y ** 2 - 1.0) / M]])


def phi(p: HalfSpacePoint) -> float:
    """Conformal factor Phi = 2 / ((1+y)^2 + |x|^2)."""
    return 2.0 / ((1.0 + p.y) ** 2 + float(p.x @ p.x))


def jacobian_B(p: HalfSpacePoint) -> np.ndarray:
    """Jacobian matrix DB; satisfies DB DB^t = Phi^2 I."""
    n = p.n
    x, y = p.x, p.y
    M = (1.0 + y) ** 2 + float(x @ x)
    J = np.zeros((n + 1, n + 1))
    J[:n, :n] = M * np.eye(n) - 2.0 * np.outer(x, x)
    J[:n, n] = -2.0 * x * (1.0 + y)
    J[n, :n] = 2.0 * x * (1.0 + y)
    J[n, n] = (1.0 + y) ** 2 - float(x @ x)
    return (2.0 / M ** 2) * J


def check_orthogonality(p: HalfSpacePoint) -> float:
    """max |DB DB^t - Phi^2 I| relative to Phi^2 (conformality defect)."""
    J = jacobian_B(p)
    f2 = phi(p) ** 2
    return float(np.max(np.abs(J @ J.T - f2 * np.eye(p.n + 1)))) / f2


# ---------------------------------------------------------------------------
# reference fields
# ---------------------------------------------------------------------------

class PolyField:
    """Polynomial on R^{n+1} as a sparse monomial map, with symbolic
    gradient and Laplacian so reference derivatives are exact."""

    tag = "polynomial"

    def __init__(self, dim: int, terms: dict):
        self.dim = dim
        self.terms = {tuple(e): float(c) for e, c in terms.items() if c != 0}

    @classmethod
    def coordinate(cls, dim: int, i: int) -> "PolyField":
        e = [0] * dim
        e[i] = 1
        return cls(dim, {tuple(e): 1.0})

    @classmethod
    def norm_sq(cls, dim: int) -> "PolyField":
        terms = {}
        for i in range(dim):
            e = [0] * dim
            e[i] = 2
            terms[tuple(e)] = 1.0
        return cls(dim, terms)

    @classmethod
    def constant(cls, dim: int, c: float) -> "PolyField":
        return cls(dim, {tuple([0] * dim): c})

    def __mul__(self, other: "PolyField") -> "PolyField":
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0.0) + c1 * c2
        return PolyField(self.dim, out)

    def value(self, z: np.ndarray) -> float:
        total = 0.0
        for e, c in self.terms.items():
            t = c
            for zi, ei in zip(z, e):
                if ei:
                    t *= zi ** ei
            total += t
        return total

    def grad(self, z: np.ndarray) -> np.ndarray:
        g = np.zeros(self.dim)
        for e, c in self.terms.items():
            for i, ei in enumerate(e):
                if ei:
                    t = c * ei
                    for j, ej in enumerate(e):
                        p = ej - 1 if j == i else ej
                        if p:
                            t *= z[j] ** p
                    g[i] += t
        return g

    def laplacian(self) -> "PolyField":
        out: dict = {}
        for e, c in self.terms.items():
            for i, ei in enumerate(e):
                if ei >= 2:
                    e2 = list(e)
                    e2[i] -= 2
                    key = tuple(e2)
                    out[key] = out.get(key, 0.0) + c * ei * (ei - 1)
        return PolyField(self.dim, out)

    def lap_value(self, z: np.ndarray) -> float:
        return self.laplacian().value(z)

    def value_dd(self, zdd):
        """Evaluate with double-double coordinates [(hi, lo), ...]."""
        sh, sl = 0.0, 0.0
        for e, c in self.terms.items():
            th, tl = c, 0.0
            for (zh, zl), ei in zip(zdd, e):
                for _ in range(ei):
                    th, tl = dd_mul(th, tl, zh, zl)
            sh, sl = dd_add(sh, sl, th, tl)
        return sh, sl


class GaussianField:
    """Gaussian bump exp(-a |z - z0|^2) with closed-form derivatives."""

    tag = "gaussian"

    def __init__(self, dim: int, a: float, center: np.ndarray):
        self.dim = dim
        self.a = a
        self.center = np.asarray(center, dtype=np.float64)

    def value(self, z: np.ndarray) -> float:
        d = z - self.center
        return math.exp(-self.a * float(d @ d))

    def grad(self, z: np.ndarray) -> np.ndarray:
        d = z - self.center
        return -2.0 * self.a * d * self.value(z)

    def lap_value(self, z: np.ndarray) -> float:
        d = z - self.center
        r2 = float(d @ d)
        return (-2.0 * self.a * self.dim + 4.0 * self.a ** 2 * r2) * self.value(z)


# ---------------------------------------------------------------------------
# finite differences
# ---------------------------------------------------------------------------

def _fd_gradient(fun, X: np.ndarray, h: float) -> np.ndarray:
    g = np.zeros(X.size)
    for i in range(X.size):
        e = np.zeros(X.size)
        e[i] = h
        g[i] = (-fun(X + 2 * e) + 8 * fun(X + e)
                - 8 * fun(X - e) + fun(X - 2 * e)) / (12.0 * h)
    return g


def _neumaier_sum(values) -> float:
    total = 0.0
    comp = 0.0
    for v in values:
        t = total + v
        if abs(total) >= abs(v):
            comp += (total - t) + v
        else:
            comp += (v - t) + total
        total = t
    return total + comp


def _fd_laplacian(fun, X: np.ndarray, h: float) -> float:
    f0 = fun(X)
    pieces = []
    for i in range(X.size):
        e = np.zeros(X.size)
        e[i] = h
        pieces.extend([-fun(X + 2 * e), 16 * fun(X + e), -30 * f0,
                       16 * fun(X - e), -fun(X - 2 * e)])
    return _neumaier_sum(pieces) / (12.0 * h * h)


# 8th-order second-derivative stencil (offsets -4..4), used where iterated
# Laplacians would otherwise sit at the standard-precision wall
_STENCIL8 = ((-4, -1.0 / 560), (-3, 8.0 / 315), (-2, -1.0 / 5), (-1, 8.0 / 5),
             (0, -205.0 / 72), (1, 8.0 / 5), (2, -1.0 / 5), (3, 8.0 / 315),
             (4, -1.0 / 560))


def _fd_laplacian8(fun, X: np.ndarray, h: float) -> float:
    f0 = fun(X)
    pieces = []
    for i in range(X.size):
        e = np.zeros(X.size)
        e[i] = h
        for off, w in _STENCIL8:
            pieces.append(w * (f0 if off == 0 else fun(X + off * e)))
    return _neumaier_sum(pieces) / (h * h)


def _fd_laplacian_iter(fun, X: np.ndarray, order: int, h: float,
                       base=None) -> float:
    lap = base or _fd_laplacian
    if order == 1:
        return lap(fun, X, h)
    return lap(lambda Z: _fd_laplacian_iter(fun, Z, order - 1, h, base),
               X, h)


def _richardson_pair(fd, h: float, order: int = 4):
    """Evaluate fd(h) and fd(h/2); extrapolate assuming error ~ h^order."""
    v1 = fd(h)
    v2 = fd(h / 2.0)
    w = 2.0 ** order
    return (w * v2 - v1) / (w - 1.0), abs(v2 - v1)


def _richardson_triple(fd, h: float):
    """Two-level extrapolation (h, h/2, h/4) removing the h^4 and h^6 terms
    of the 4th-order stencils; needed where iterated Laplacians sit close to
    the standard-precision wall."""
    v1 = fd(h)
    v2 = fd(h / 2.0)
    v3 = fd(h / 4.0)
    r1 = (16.0 * v2 - v1) / 15.0
    r2 = (16.0 * v3 - v2) / 15.0
    return (64.0 * r2 - r1) / 63.0, abs(r2 - r1)


def default_step(p: HalfSpacePoint) -> float:
    """h = 1e-2 scaled by the local feature size 1/Phi."""
    return 1e-2 / phi(p)


def _as_point(X: np.ndarray) -> HalfSpacePoint:
    return HalfSpacePoint(X[:-1], float(X[-1]))


# ---------------------------------------------------------------------------
# identity checks (relative FD residuals)
# ---------------------------------------------------------------------------

def check_phi_calculus(a: float, p: HalfSpacePoint, h: float | None = None) -> float:
    """Residuals of grad Phi^a = -a Phi^{a+1} (x, 1+y) and
    Lap Phi^a = -a(n-1-2a) Phi^{a+1}; returns the larger, relative."""
    n = p.n
    if h is None:
        h = default_step(p)
    X = p.coords()

    def f(Z):
        return phi(_as_point(Z)) ** a

    ref_grad = -a * phi(p) ** (a + 1) * np.concatenate([p.x, [1.0 + p.y]])
    ref_lap = -a * (n - 1 - 2 * a) * phi(p) ** (a + 1)
    scale = max(abs(a), 1.0) * phi(p) ** (a + 1) * (1.0 + float(np.max(np.abs(X))))

    grad_fd, dg = _richardson_pair(lambda hh: _fd_gradient(f, X, hh), h)
    lap_fd, dl = _richardson_pair(lambda hh: _fd_laplacian(f, X, hh), h)
    if max(float(np.max(dg)), dl) > 0.05 * scale:
        raise StepSizeFailure("Richardson pair disagrees; adjust step")
    res_g = float(np.max(np.abs(grad_fd - ref_grad))) / scale
    res_l = abs(lap_fd - ref_lap) / scale
    return max(res_g, res_l)


def check_laplacian_identity(F, p: HalfSpacePoint, h: float | None = None) -> float:
    """Residual of Phi^{-2} Lap(F o B) = (Lap F)(B) + (n-1) <grad F(B), (-x, 1+y)>."""
    n = p.n
    if h is None:
        h = default_step(p)
    X = p.coords()

    def f(Z):
        q = _as_point(Z)
        return F.value(map_B(q))

    B = map_B(p)
    term1 = F.lap_value(B)
    term2 = (n - 1) * float(F.grad(B) @ np.concatenate([-p.x, [1.0 + p.y]]))
    rhs = term1 + term2
    lap_fd, dl = _richardson_pair(lambda hh: _fd_laplacian(f, X, hh), h)
    lhs = lap_fd / phi(p) ** 2
    scale = max(abs(term1) + abs(term2), abs(lhs), 1e-12)
    if dl / phi(p) ** 2 > 0.05 * max(scale, 1.0):
        raise StepSizeFailure("Richardson pair disagrees; adjust step")
    return abs(lhs - rhs) / scale


def check_gradient_identity(F, p: HalfSpacePoint, h: float | None = None) -> float:
    """Residual of <grad(F o B), (x, 1+y)> = Phi <grad F(B), (-x, 1+y)>."""
    if h is None:
        h = default_step(p)
    X = p.coords()

    def f(Z):
        return F.value(map_B(_as_point(Z)))

    grad_fd, _ = _richardson_pair(lambda hh: _fd_gradient(f, X, hh), h)
    lhs = float(grad_fd @ np.concatenate([p.x, [1.0 + p.y]]))
    rhs = phi(p) * float(F.grad(map_B(p)) @ np.concatenate([-p.x, [1.0 + p.y]]))
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-12)


def check_conformal_covariance(F: PolyField, kk: int, p: HalfSpacePoint,
                               h: float | None = None,
                               extended: bool = False) -> float:
    """Residual of Lap^kk [F(B) Phi^{(n+1-2kk)/2}] = (Lap^kk F)(B) Phi^{(n+1+2kk)/2}.

    The left side is an iterated FD Laplacian; the right side applies the
    symbolic polynomial Laplacian before mapping.  ``extended`` evaluates
    the left side in double-double arithmetic (needed for kk = 3).
    """
    if kk not in (1, 2, 3):
        raise ValueError("kk must be 1, 2, or 3")
    n = p.n
    if n <= 2 * kk:
        raise ValueError(f"need n > 2*kk, got n={n}, kk={kk}")
    if h is None:
        h = default_step(p)
    X = p.coords()
    a_in = (n + 1 - 2 * kk) / 2.0
    a_out = (n + 1 + 2 * kk) / 2.0

    Fk = F
    for _ in range(kk):
        Fk = Fk.laplacian()
    rhs = Fk.value(map_B(p)) * phi(p) ** a_out

    if extended:
        lhs, spread = _covariance_lhs_dd(F, kk, X, h, a_in)
    else:
        def f(Z):
            q = _as_point(Z)
            return F.value(map_B(q)) * phi(q) ** a_in

        if kk == 1:
            lhs, spread = _richardson_pair(
                lambda hh: _fd_laplacian_iter(f, X, kk, hh), h)
        else:
            # 8th-order base stencil: truncation is negligible at this h, so
            # a coarse (2h, h) pair serves as the consistency guard
            lhs = _fd_laplacian_iter(f, X, kk, h, base=_fd_laplacian8)
            coarse = _fd_laplacian_iter(f, X, kk, 2.0 * h, base=_fd_laplacian8)
            spread = abs(lhs - coarse)
    scale = max(abs(lhs), abs(rhs), phi(p) ** a_out)
    if spread > 4.0 * scale:
        raise StepSizeFailure("Richardson pair disagrees; adjust step")
    return abs(lhs - rhs) / scale


def check_covariant_shift(u: PolyField, m: int, p: HalfSpacePoint,
                          h: float | None = None) -> float:
    """Residual of Lap(Phi^{-m-1} Lap^m u) = Phi^{-m} Lap^{m+1}(Phi^{-1} u).

    Phi^{-1} is itself a polynomial, so the inner operators are applied
    symbolically and only the outermost Laplacian on each side is FD.
    """
    if m not in (0, 1, 2):
        raise ValueError("m must be 0, 1, or 2")
    if h is None:
        h = default_step(p)
    n = p.n
    dim = n + 1
    X = p.coords()

    # Phi^{-1} = ((1+y)^2 + |x|^2)/2 = |X|^2/2 + y + 1/2, a polynomial
    half_m = PolyField.norm_sq(dim) * PolyField.constant(dim, 0.5)
    terms = dict(half_m.terms)
    for e, c in ((tuple([0] * (dim - 1) + [1]), 1.0), (tuple([0] * dim), 0.5)):
        terms[e] = terms.get(e, 0.0) + c
    phi_inv = PolyField(dim, terms)

    um = u
    for _ in range(m):
        um = um.laplacian()

    phi_inv_pow = PolyField.constant(dim, 1.0)
    for _ in range(m + 1):
        phi_inv_pow = phi_inv_pow * phi_inv
    left_inner = phi_inv_pow * um           # Phi^{-m-1} Lap^m u, polynomial

    right_inner = phi_inv * u               # Phi^{-1} u, polynomial
    for _ in range(m):
        right_inner = right_inner.laplacian()

    lhs, d1 = _richardson_pair(
        lambda hh: _fd_laplacian(left_inner.value, X, hh), h)
    rhs_fd, d2 = _richardson_pair(
        lambda hh: _fd_laplacian(right_inner.value, X, hh), h)
    rhs = rhs_fd / phi(p) ** m
    scale = max(abs(lhs), abs(rhs), 1e-12)
    if max(d1, d2) > 0.05 * max(scale, 1.0):
        raise StepSizeFailure("Richardson pair disagrees; adjust step")
    return abs(lhs - rhs) / scale


# ---------------------------------------------------------------------------
# double-double path for the triple Laplacian
# ---------------------------------------------------------------------------

def _dd_from(x: float):
    return (float(x), 0.0)


def _dd_sub(a, b):
    return dd_add(a[0], a[1], -b[0], -b[1])


def _dd_scale(a, s: float):
    return dd_mul(a[0], a[1], s, 0.0)


def _dd_pow_int(a, e: int):
    out = (1.0, 0.0)
    base = a
    while e:
        if e & 1:
            out = dd_mul(*out, *base)
        base = dd_mul(*base, *base)
        e >>= 1
    return out


def _field_on_halfspace_dd(F: PolyField, Z, half_exp: int):
    """F(B(Z)) * Phi(Z)^half_exp in double-double; Z is a dd coordinate list."""
    n = len(Z) - 1
    x, y = Z[:-1], Z[-1]
    one_y = dd_add(1.0, 0.0, y[0], y[1])
    M = _dd_pow_int(one_y, 2)
    for xi in x:
        M = dd_add(*M, *dd_mul(*xi, *xi))
    Bdd = []
    for xi in x:
        Bdd.append(dd_div(*_dd_scale(xi, 2.0), *M))
    x2 = (0.0, 0.0)
    for xi in x:
        x2 = dd_add(*x2, *dd_mul(*xi, *xi))
    num = dd_add(*x2, *dd_mul(*y, *y))
    num = dd_add(*num, -1.0, 0.0)
    Bdd.append(dd_div(*num, *M))
    fval = F.value_dd(Bdd)
    phidd = dd_div(2.0, 0.0, *M)
    return dd_mul(*fval, *_dd_pow_int(phidd, half_exp))


def _fd_laplacian_iter_dd(F: PolyField, Z, order: int, h: float, half_exp: int):
    if order == 0:
        return _field_on_halfspace_dd(F, Z, half_exp)
    dim = len(Z)
    total = (0.0, 0.0)
    c0 = _fd_laplacian_iter_dd(F, Z, order - 1, h, half_exp)
    for i in range(dim):
        acc = _dd_scale(c0, -30.0)
        for step, w in ((2, -1.0), (1, 16.0), (-1, 16.0), (-2, -1.0)):
            Z2 = list(Z)
            Z2[i] = dd_add(Z[i][0], Z[i][1], step * h, 0.0)
            acc = dd_add(*acc, *_dd_scale(_fd_laplacian_iter_dd(F, Z2, order - 1, h, half_exp), w))
        total = dd_add(*total, *_dd_scale(acc, 1.0 / (12.0 * h * h)))
    return total


def _covariance_lhs_dd(F: PolyField, kk: int, X: np.ndarray, h: float, a_in: float):
    """Iterated dd Laplacian of F(B) Phi^{a_in}; requires integer a_in."""
    if not float(a_in).is_integer():
        raise ValueError("extended mode requires integer Phi exponent (odd n)")
    half_exp = int(a_in)
    # snap the step to a power of two so offsets stay exactly representable
    h2 = 2.0 ** round(math.log2(h))
    Z = [_dd_from(c) for c in X]
    v1 = _fd_laplacian_iter_dd(F, Z, kk, h2, half_exp)
    v2 = _fd_laplacian_iter_dd(F, Z, kk, h2 / 2.0, half_exp)
    w = 16.0
    val = (w * (v2[0] + v2[1]) - (v1[0] + v1[1])) / (w - 1.0)
    return val, abs((v2[0] + v2[1]) - (v1[0] + v1[1]))
