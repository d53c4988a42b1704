"""Double-double arithmetic on numpy arrays.

A value is carried as an unevaluated pair ``(hi, lo)`` with
``|lo| <= ulp(hi)/2``.  Only the handful of operations needed for phase
reduction are provided: error-free sum/product, multiply, divide by a
double, exp, log and reduction mod 1.  Everything is vectorised and also
accepts Python floats.

Do not compile callers with fast-math: the error-free transformations
rely on strict IEEE evaluation order.
"""

import numpy as np

_SPLIT = 134217729.0  # 2**27 + 1

LN2 = (0.6931471805599453, 2.3190468138462996e-17)
PI = (3.141592653589793, 1.2246467991473532e-16)
TWO_PI = (6.283185307179586, 2.4492935982947064e-16)
LOG_2PI = (1.8378770664093456, -7.756588316134483e-17)

# 1/n! for the exp Taylor polynomial
_INV_FACT = [1.0 / float(np.prod(np.arange(1, n + 1, dtype=float))) for n in range(0, 14)]


def two_sum(a, b):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def quick_two_sum(a, b):
    # requires |a| >= |b|
    s = a + b
    return s, b - (s - a)


def _split(a):
    c = _SPLIT * a
    hi = c - (c - a)
    return hi, a - hi


def two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, err


def dd_add(a, b):
    s, e = two_sum(a[0], b[0])
    t, f = two_sum(a[1], b[1])
    e = e + t
    s, e = quick_two_sum(s, e)
    e = e + f
    return quick_two_sum(s, e)


def dd_add_d(a, b):
    s, e = two_sum(a[0], b)
    e = e + a[1]
    return quick_two_sum(s, e)


def dd_mul(a, b):
    p, e = two_prod(a[0], b[0])
    e = e + (a[0] * b[1] + a[1] * b[0])
    return quick_two_sum(p, e)


def dd_mul_d(a, b):
    p, e = two_prod(a[0], b)
    e = e + a[1] * b
    return quick_two_sum(p, e)


def dd_div_d(a, b):
    q1 = a[0] / b
    p, e = two_prod(q1, b)
    r = ((a[0] - p) - e + a[1]) / b
    return quick_two_sum(q1, r)


def dd_exp(a):
    """exp of a double-double, relative error below 1e-24."""
    hi, lo = np.asarray(a[0], dtype=float), np.asarray(a[1], dtype=float)
    k = np.rint(hi / LN2[0])
    # r = a - k*ln2, exact products since k is a small integer
    r = dd_add(
        (hi, lo),
        dd_mul_d((-LN2[0] * np.ones_like(k), -LN2[1] * np.ones_like(k)), k),
    )
    # scale down by 2**10 so the Taylor series converges in 9 terms
    r = (r[0] / 1024.0, r[1] / 1024.0)
    # expm1(r) by Horner in double-double
    s = (np.full_like(hi, _INV_FACT[10]), np.zeros_like(hi))
    for n in range(9, 0, -1):
        s = dd_add_d(dd_mul(s, r), _INV_FACT[n])
    s = dd_mul(s, r)
    # (1+s)^2 - 1 = 2s + s^2, ten times
    for _ in range(10):
        s = dd_add(dd_mul_d(s, 2.0), dd_mul(s, s))
    e = dd_add_d(s, 1.0)
    return np.ldexp(e[0], k.astype(int)), np.ldexp(e[1], k.astype(int))


def dd_log(x):
    """log of a positive double (or double-double) with one Newton step."""
    if isinstance(x, tuple):
        xh, xl = np.asarray(x[0], dtype=float), np.asarray(x[1], dtype=float)
    else:
        xh = np.asarray(x, dtype=float)
        xl = np.zeros_like(xh)
    l0 = np.log(xh)
    e = dd_exp((-l0, np.zeros_like(l0)))
    # l = l0 + x*exp(-l0) - 1
    d = dd_add_d(dd_mul((xh, xl), e), -1.0)
    return dd_add_d(d, l0)


def dd_frac(a):
    """Fractional part in [0, 1) of a double-double, returned as a double."""
    hi, lo = np.asarray(a[0], dtype=float), np.asarray(a[1], dtype=float)
    f = (hi - np.floor(hi)) + (lo - np.floor(lo))
    f = np.where(f >= 1.0, f - 1.0, f)
    return f
