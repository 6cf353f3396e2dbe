"""Pure-Python/numpy fallback for the hot kernels.

Same call signatures as the compiled extension ``_fast``.  The Gauss series
is evaluated in blocks with vectorized cumulative products; the
double-double variant keeps the running sum and term in unevaluated
(hi, lo) pairs to suppress cancellation when two large series are combined
downstream.
"""

from __future__ import annotations

import numpy as np

_BLOCK = 4096
_SPLITTER = 134217729.0  # 2**27 + 1, Dekker split constant


# ---------------------------------------------------------------------------
# double-double primitives (Dekker/Knuth error-free transforms)
# ---------------------------------------------------------------------------

def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _split(a):
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    ahi, alo = _split(a)
    bhi, blo = _split(b)
    return p, ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo


def dd_add(xh, xl, yh, yl):
    sh, sl = _two_sum(xh, yh)
    sl += xl + yl
    s, e = _two_sum(sh, sl)
    return s, e


def dd_mul(xh, xl, yh, yl):
    ph, pl = _two_prod(xh, yh)
    pl += xh * yl + xl * yh
    s, e = _two_sum(ph, pl)
    return s, e


def dd_div(xh, xl, yh, yl):
    q1 = xh / yh
    rh, rl = dd_mul(q1, 0.0, yh, yl)
    rh, rl = dd_add(xh, xl, -rh, -rl)
    q2 = (rh + rl) / yh
    return _two_sum(q1, q2)


# ---------------------------------------------------------------------------
# Gauss hypergeometric series
# ---------------------------------------------------------------------------

def hyp2f1(a, b, c, t, tol=1e-14, maxterms=1000000):
    """Partial sum of 2F1(a,b;c;t) for t in [0,1).

    Returns (value, terms_used, converged).  Terminates once a geometric
    tail bound drops below ``tol`` of the partial sum (safety factor 10).
    """
    if t == 0.0:
        return 1.0, 0, 1
    s = 1.0
    term = 1.0
    m = 0
    while m < maxterms:
        nblk = min(_BLOCK, maxterms - m)
        ms = m + np.arange(nblk, dtype=np.float64)
        ratios = (a + ms) * (b + ms) / ((c + ms) * (ms + 1.0)) * t
        terms = term * np.cumprod(ratios)
        s += terms.sum()
        term = terms[-1]
        m += nblk
        ratio = abs((a + m) * (b + m) / ((c + m) * (m + 1.0)) * t)
        if ratio < 1.0 and 10.0 * abs(term) * ratio / (1.0 - ratio) < tol * abs(s):
            return s, m, 1
        if term == 0.0:  # terminating (polynomial) case
            return s, m, 1
    return s, m, 0


def hyp2f1_dd(a, b, c, t, tol=1e-30, maxterms=1000000):
    """Like hyp2f1 but with double-double term recurrence and accumulation.

    Returns (value_hi, value_lo, terms_used, converged).
    """
    if t == 0.0:
        return 1.0, 0.0, 0, 1
    sh, sl = 1.0, 0.0
    th, tl = 1.0, 0.0
    m = 0
    while m < maxterms:
        fm = float(m)
        num_h, num_l = dd_mul(*_two_sum(a, fm), *_two_sum(b, fm))
        num_h, num_l = dd_mul(num_h, num_l, t, 0.0)
        den_h, den_l = dd_mul(*_two_sum(c, fm), fm + 1.0, 0.0)
        rh, rl = dd_div(num_h, num_l, den_h, den_l)
        th, tl = dd_mul(th, tl, rh, rl)
        sh, sl = dd_add(sh, sl, th, tl)
        m += 1
        if m % 64 == 0 or abs(th) < 1e-280:
            ratio = abs((a + m) * (b + m) / ((c + m) * (m + 1.0)) * t)
            if ratio < 1.0 and 10.0 * abs(th) * ratio / (1.0 - ratio) < tol * abs(sh):
                return sh, sl, m, 1
            if th == 0.0:
                return sh, sl, m, 1
    return sh, sl, m, 0


# ---------------------------------------------------------------------------
# Gegenbauer recurrence
# ---------------------------------------------------------------------------

def gegenbauer_table(lam, kmax, t):
    """Table C_k^lam(t_i), shape (kmax+1, len(t)).

    lam == 0 selects Chebyshev polynomials of the first kind (the rescaled
    lam -> 0 limit used for the circle).
    """
    t = np.asarray(t, dtype=np.float64)
    out = np.empty((kmax + 1, t.size), dtype=np.float64)
    out[0] = 1.0
    if kmax == 0:
        return out
    if lam == 0.0:
        out[1] = t
        for k in range(2, kmax + 1):
            out[k] = 2.0 * t * out[k - 1] - out[k - 2]
    else:
        out[1] = 2.0 * lam * t
        for k in range(2, kmax + 1):
            out[k] = (2.0 * (k + lam - 1.0) * t * out[k - 1]
                      - (k + 2.0 * lam - 2.0) * out[k - 2]) / k
    return out


def zonal_eval(coeffs, lam, t):
    """sum_k coeffs[k] * C_k^lam(t) evaluated on the array t."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    kmax = coeffs.size - 1
    acc = np.full(t.shape, coeffs[0], dtype=np.float64)
    if kmax == 0:
        return acc
    prev = np.ones_like(t)
    cur = t.copy() if lam == 0.0 else 2.0 * lam * t
    acc += coeffs[1] * cur
    for k in range(2, kmax + 1):
        if lam == 0.0:
            nxt = 2.0 * t * cur - prev
        else:
            nxt = (2.0 * (k + lam - 1.0) * t * cur
                   - (k + 2.0 * lam - 2.0) * prev) / k
        acc += coeffs[k] * nxt
        prev, cur = cur, nxt
    return acc
