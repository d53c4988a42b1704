# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels: asymptotic theta and the Riemann-Siegel Z sum.

Same contract as ``_fallback``.  Loops run without the GIL so callers may
shard arrays across threads.  Must be built without fast-math and with
``-ffp-contract=off``; the error-free transformations depend on it.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport log, cos, sqrt, floor

from . import _fallback
from ._rs_coeffs import RS_COEFFS

cnp.import_array()

NAME = "cython"

DEF N_TABLE = 1300
DEF MAX_POLY = 64

cdef double LOG_HI[N_TABLE + 1]
cdef double LOG_LO[N_TABLE + 1]
cdef double INV_SQRT[N_TABLE + 1]
cdef double POLY[5][MAX_POLY]
cdef int POLY_LEN[5]

cdef double LOG_2PI_HI = 1.8378770664093456
cdef double LOG_2PI_LO = -7.756588316134483e-17
cdef double PI = 3.141592653589793
cdef double TWO_PI_HI = 6.283185307179586
cdef double TWO_PI_LO = 2.4492935982947064e-16
cdef double INV_TWO_PI = 0.15915494309189535
cdef double SPLIT = 134217729.0

cdef double TS0 = 1.0 / 48.0
cdef double TS1 = 7.0 / 5760.0
cdef double TS2 = 31.0 / 80640.0
cdef double TS3 = 127.0 / 430080.0
cdef double TS4 = 511.0 / 1216512.0
cdef double DS0 = 1.0 / 48.0
cdef double DS1 = 7.0 / 1920.0
cdef double DS2 = 31.0 / 16128.0
cdef double DS3 = 127.0 / 61440.0
cdef double DS4 = 4599.0 / 1216512.0


def _init_tables():
    cdef int i, k
    for i in range(N_TABLE + 1):
        LOG_HI[i] = _fallback.LOG_HI[i]
        LOG_LO[i] = _fallback.LOG_LO[i]
        INV_SQRT[i] = _fallback.INV_SQRT[i]
    for k in range(5):
        coeffs = RS_COEFFS[k]
        if len(coeffs) > MAX_POLY:
            raise RuntimeError("Riemann-Siegel polynomial too long")
        POLY_LEN[k] = len(coeffs)
        for i in range(len(coeffs)):
            POLY[k][i] = coeffs[i]


_init_tables()


cdef inline void two_sum(double a, double b, double *s, double *e) noexcept nogil:
    cdef double ss = a + b
    cdef double bb = ss - a
    s[0] = ss
    e[0] = (a - (ss - bb)) + (b - bb)


cdef inline void two_prod(double a, double b, double *p, double *e) noexcept nogil:
    cdef double pp = a * b
    cdef double c = SPLIT * a
    cdef double ah = c - (c - a)
    cdef double al = a - ah
    c = SPLIT * b
    cdef double bh = c - (c - b)
    cdef double bl = b - bh
    p[0] = pp
    e[0] = ((ah * bh - pp) + ah * bl + al * bh) + al * bl


cdef inline void theta_pair(double t, double *hi, double *lo) noexcept nogil:
    cdef double lh, ll, s, e, ph, pe, u, u2, tail
    two_sum(log(t), -LOG_2PI_HI, &lh, &ll)
    ll = ll - LOG_2PI_LO
    s = lh + ll
    ll = ll - (s - lh)
    lh = s
    two_sum(lh, -1.0, &s, &e)
    lh = s
    ll = ll + e
    two_prod(lh, 0.5 * t, &ph, &pe)
    pe = pe + ll * (0.5 * t)
    u = 1.0 / t
    u2 = u * u
    tail = -PI / 8.0 + u * (TS0 + u2 * (TS1 + u2 * (TS2 + u2 * (TS3 + u2 * TS4))))
    two_sum(ph, tail, &s, &e)
    e = e + pe
    hi[0] = s + e
    lo[0] = e - (hi[0] - s)


cdef inline double z_one(double t) noexcept nogil:
    cdef double a = sqrt(t / (2.0 * PI))
    cdef long nterms = <long>floor(a)
    cdef double p = a - nterms
    cdef double th, tl, ph, pe, dh, de, kk, qh, qe, total = 0.0
    cdef long n
    cdef int k, j
    theta_pair(t, &th, &tl)
    for n in range(1, nterms + 1):
        two_prod(t, LOG_HI[n], &ph, &pe)
        two_sum(th, -ph, &dh, &de)
        # reduce mod 2*pi before cos: keeps libm on its fast path
        kk = floor(dh * INV_TWO_PI + 0.5)
        two_prod(kk, TWO_PI_HI, &qh, &qe)
        total += cos((dh - qh) + ((de - pe) + (tl - t * LOG_LO[n]) - qe - kk * TWO_PI_LO)) * INV_SQRT[n]
    cdef double z = p - 0.5
    cdef double inv_a = 1.0 / a
    cdef double rem = 0.0, ck
    for k in range(4, -1, -1):
        ck = 0.0
        for j in range(POLY_LEN[k] - 1, -1, -1):
            ck = ck * z + POLY[k][j]
        rem = rem * inv_a + ck
    if nterms % 2 == 0:
        rem = -rem
    return 2.0 * total + rem / sqrt(a)


def theta_dd(t):
    cdef double[::1] tv = np.ascontiguousarray(t, dtype=np.float64)
    cdef Py_ssize_t i, n = tv.shape[0]
    hi = np.empty(n)
    lo = np.empty(n)
    cdef double[::1] hv = hi
    cdef double[::1] lv = lo
    with nogil:
        for i in range(n):
            theta_pair(tv[i], &hv[i], &lv[i])
    return hi, lo


def theta_deriv_asym(t):
    cdef double[::1] tv = np.ascontiguousarray(t, dtype=np.float64)
    cdef Py_ssize_t i, n = tv.shape[0]
    out = np.empty(n)
    cdef double[::1] ov = out
    cdef double u, u2, x
    with nogil:
        for i in range(n):
            x = tv[i]
            u = 1.0 / x
            u2 = u * u
            ov[i] = 0.5 * (log(x) - LOG_2PI_HI) - u2 * (
                DS0 + u2 * (DS1 + u2 * (DS2 + u2 * (DS3 + u2 * DS4))))
    return out


def z_rs(t):
    cdef double[::1] tv = np.ascontiguousarray(t, dtype=np.float64)
    cdef Py_ssize_t i, n = tv.shape[0]
    out = np.empty(n)
    cdef double[::1] ov = out
    with nogil:
        for i in range(n):
            ov[i] = z_one(tv[i])
    return out
