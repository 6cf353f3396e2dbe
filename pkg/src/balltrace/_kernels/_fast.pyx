# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: 2F1 series (double and double-double) and
Gegenbauer recurrences.  Mirrors the _purepy module's signatures."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs

DEF SPLITTER = 134217729.0  # 2**27 + 1

# double-double pairs travel by value so the C compiler can keep them in
# registers through the inlined error-free transforms
ctypedef struct dd:
    double hi
    double lo


cdef inline dd two_sum(double a, double b) noexcept nogil:
    cdef dd out
    cdef double bb
    out.hi = a + b
    bb = out.hi - a
    out.lo = (a - (out.hi - bb)) + (b - bb)
    return out


cdef inline dd two_prod(double a, double b) noexcept nogil:
    cdef dd out
    cdef double ah, al, bh, bl, t
    out.hi = a * b
    t = SPLITTER * a
    ah = t - (t - a)
    al = a - ah
    t = SPLITTER * b
    bh = t - (t - b)
    bl = b - bh
    out.lo = ((ah * bh - out.hi) + ah * bl + al * bh) + al * bl
    return out


cdef inline dd dd_add(dd x, dd y) noexcept nogil:
    cdef dd s
    s = two_sum(x.hi, y.hi)
    return two_sum(s.hi, s.lo + x.lo + y.lo)


cdef inline dd dd_mul(dd x, dd y) noexcept nogil:
    cdef dd p
    p = two_prod(x.hi, y.hi)
    return two_sum(p.hi, p.lo + x.hi * y.lo + x.lo * y.hi)


cdef inline dd dd_from(double a) noexcept nogil:
    cdef dd out
    out.hi = a
    out.lo = 0.0
    return out


cdef inline dd dd_div(dd x, dd y) noexcept nogil:
    cdef dd r
    cdef double q1, q2
    q1 = x.hi / y.hi
    r = dd_mul(dd_from(q1), y)
    q2 = ((x.hi - r.hi) + (x.lo - r.lo)) / y.hi
    return two_sum(q1, q2)


def hyp2f1(double a, double b, double c, double t,
           double tol=1e-14, long maxterms=1000000):
    """Partial sum of 2F1(a,b;c;t); returns (value, terms, converged)."""
    cdef double s = 1.0, term = 1.0, ratio
    cdef long m = 0
    if t == 0.0:
        return 1.0, 0, 1
    with nogil:
        while m < maxterms:
            term *= (a + m) * (b + m) / ((c + m) * (m + 1.0)) * t
            s += term
            m += 1
            ratio = fabs((a + m) * (b + m) / ((c + m) * (m + 1.0)) * t)
            if ratio < 1.0 and 10.0 * fabs(term) * ratio / (1.0 - ratio) < tol * fabs(s):
                break
            if term == 0.0:
                break
    if m >= maxterms:
        return s, m, 0
    return s, m, 1


def hyp2f1_dd(double a, double b, double c, double t,
              double tol=1e-30, long maxterms=1000000):
    """Double-double 2F1 partial sum; returns (hi, lo, terms, converged)."""
    cdef dd s, term, num, den
    cdef double ratio, fm
    cdef long m = 0
    cdef int done = 0
    if t == 0.0:
        return 1.0, 0.0, 0, 1
    s = dd_from(1.0)
    term = dd_from(1.0)
    with nogil:
        while m < maxterms:
            fm = <double> m
            num = dd_mul(two_sum(a, fm), two_sum(b, fm))
            num = dd_mul(num, dd_from(t))
            den = dd_mul(two_sum(c, fm), dd_from(fm + 1.0))
            term = dd_mul(term, dd_div(num, den))
            s = dd_add(s, term)
            m += 1
            ratio = fabs((a + m) * (b + m) / ((c + m) * (m + 1.0)) * t)
            if ratio < 1.0 and 10.0 * fabs(term.hi) * ratio / (1.0 - ratio) < tol * fabs(s.hi):
                done = 1
                break
            if term.hi == 0.0:
                done = 1
                break
    return s.hi, s.lo, m, done


def gegenbauer_table(double lam, long kmax, t):
    """Table C_k^lam(t_i), shape (kmax+1, len(t)); lam==0 -> Chebyshev T_k."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] tt = np.ascontiguousarray(t, dtype=np.float64)
    cdef long npts = tt.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((kmax + 1, npts))
    cdef long k, i
    cdef double[:, ::1] o = out
    cdef double[::1] tv = tt
    with nogil:
        for i in range(npts):
            o[0, i] = 1.0
        if kmax >= 1:
            if lam == 0.0:
                for i in range(npts):
                    o[1, i] = tv[i]
                for k in range(2, kmax + 1):
                    for i in range(npts):
                        o[k, i] = 2.0 * tv[i] * o[k - 1, i] - o[k - 2, i]
            else:
                for i in range(npts):
                    o[1, i] = 2.0 * lam * tv[i]
                for k in range(2, kmax + 1):
                    for i in range(npts):
                        o[k, i] = (2.0 * (k + lam - 1.0) * tv[i] * o[k - 1, i]
                                   - (k + 2.0 * lam - 2.0) * o[k - 2, i]) / k
    return out


def zonal_eval(coeffs, double lam, t):
    """sum_k coeffs[k] * C_k^lam(t) on the array t."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cc = np.ascontiguousarray(coeffs, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] tt = np.ascontiguousarray(t, dtype=np.float64)
    cdef long kmax = cc.shape[0] - 1
    cdef long npts = tt.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(npts)
    cdef double[::1] o = out, cv = cc, tv = tt
    cdef long k, i
    cdef double prev, cur, nxt, acc, x
    with nogil:
        for i in range(npts):
            x = tv[i]
            acc = cv[0]
            if kmax >= 1:
                prev = 1.0
                cur = x if lam == 0.0 else 2.0 * lam * x
                acc += cv[1] * cur
                for k in range(2, kmax + 1):
                    if lam == 0.0:
                        nxt = 2.0 * x * cur - prev
                    else:
                        nxt = (2.0 * (k + lam - 1.0) * x * cur
                               - (k + 2.0 * lam - 2.0) * prev) / k
                    acc += cv[k] * nxt
                    prev = cur
                    cur = nxt
            o[i] = acc
    return out
