"""Pure numpy implementations of the hot kernels.

Mirrors ``_kernels.pyx`` function for function; ``backend`` picks one of
the two at import.  All inputs are 1-D float64 arrays.
"""

import numpy as np

from . import ddouble as dd
from ._rs_coeffs import RS_COEFFS

NAME = "numpy"

# Largest n in the Riemann-Siegel main sum for t <= 1e7, plus margin.
N_TABLE = 1300

THETA_SERIES = (1.0 / 48.0, 7.0 / 5760.0, 31.0 / 80640.0, 127.0 / 430080.0, 511.0 / 1216512.0)
THETA_DERIV_SERIES = (
    1.0 / 48.0,
    7.0 / 1920.0,
    31.0 / 16128.0,
    127.0 / 61440.0,
    4599.0 / 1216512.0,
)

_n = np.arange(N_TABLE + 1, dtype=float)
_n[0] = 1.0
LOG_HI, LOG_LO = dd.dd_log(_n)
INV_SQRT = 1.0 / np.sqrt(_n)
_POLYS = [np.asarray(c[::-1], dtype=float) for c in RS_COEFFS]


def _series(u, coeffs):
    # sum_j coeffs[j] * u**(2j+1)
    u2 = u * u
    acc = np.zeros_like(u)
    for c in coeffs[::-1]:
        acc = acc * u2 + c
    return acc * u


def theta_dd(t):
    """Asymptotic theta(t) as a double-double pair, valid for t >= 10."""
    t = np.asarray(t, dtype=float)
    lt = np.log(t)
    L = dd.two_sum(lt, -dd.LOG_2PI[0])
    L = dd.dd_add_d(L, -dd.LOG_2PI[1])
    L = dd.dd_add_d(L, -1.0)
    main = dd.dd_mul_d(L, 0.5 * t)
    tail = -np.pi / 8.0 + _series(1.0 / t, THETA_SERIES)
    return dd.dd_add_d(main, tail)


def theta_deriv_asym(t):
    t = np.asarray(t, dtype=float)
    u = 1.0 / t
    return 0.5 * (np.log(t) - dd.LOG_2PI[0]) - _series(u, THETA_DERIV_SERIES) * u


def _z_chunk(t):
    a = np.sqrt(t / (2.0 * np.pi))
    n_terms = np.floor(a).astype(np.int64)
    p = a - n_terms
    th, tl = theta_dd(t)
    total = np.zeros_like(t)
    for n in range(1, int(n_terms.max()) + 1):
        ph, pe = dd.two_prod(t, LOG_HI[n])
        dh, de = dd.two_sum(th, -ph)
        k = np.floor(dh * (0.5 / np.pi) + 0.5)
        qh, qe = dd.two_prod(k, dd.TWO_PI[0])
        arg = (dh - qh) + ((de - pe) + (tl - t * LOG_LO[n]) - qe - k * dd.TWO_PI[1])
        term = np.cos(arg) * INV_SQRT[n]
        total += np.where(n <= n_terms, term, 0.0)
    z = p - 0.5
    inv_a = 1.0 / a
    rem = np.zeros_like(t)
    for poly in _POLYS[::-1]:
        rem = rem * inv_a + np.polyval(poly, z)
    sign = np.where(n_terms % 2 == 1, 1.0, -1.0)
    return 2.0 * total + sign * rem / np.sqrt(a)


def z_rs(t):
    """Riemann-Siegel Z with corrections C0..C4 (t >= 2*pi)."""
    t = np.ascontiguousarray(t, dtype=float)
    out = np.empty_like(t)
    if t.size == 0:
        return out
    # chunk in sorted order so the masked loop over n stays short
    order = np.argsort(t, kind="stable")
    step = 8192
    for i in range(0, t.size, step):
        idx = order[i:i + step]
        out[idx] = _z_chunk(t[idx])
    return out
