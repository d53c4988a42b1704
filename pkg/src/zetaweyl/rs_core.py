"""Riemann-Siegel theta, Hardy's Z function, complex log-gamma and chi powers.

Heights are handled in plain float64 with compensated arithmetic in the
places where cancellation matters (the leading theta term and the
``theta(t) - t log n`` phases of the main sum).  Phases stay accurate to
about ``1e-16 * t log t``, i.e. better than 1e-8 for ``t <= 1e7``; above
that ceiling the library refuses to work.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import backend
from . import ddouble as dd

T_CEILING = 1.0e7
THETA_SWITCH = 10.0
# below this height Z comes from the Euler-Maclaurin route: the
# Riemann-Siegel remainder through C4 is only ~1e-6 accurate near t = 30
RS_MIN_T = 60.0

LOG_PI = math.log(math.pi)
HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


@dataclass(frozen=True)
class ThetaValue:
    t: float
    theta: float
    err_est: float


@dataclass(frozen=True)
class ChiPower:
    sigma: float
    t: float
    kappa: float
    value: complex
    mode: str = "exact"


@lru_cache(maxsize=None)
def _bernoulli_even(count):
    """B_2, B_4, ..., B_{2*count} as Fractions."""
    m = 2 * count
    a = [Fraction(0)] * (m + 1)
    out = []
    for n in range(m + 1):
        a[n] = Fraction(1, n + 1)
        for j in range(n, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        if n >= 2 and n % 2 == 0:
            out.append(a[0])
    return tuple(out)


_B = _bernoulli_even(40)
_STIRLING = [float(_B[k - 1] / (2 * k * (2 * k - 1))) for k in range(1, 11)]
_DIGAMMA = [float(_B[k - 1] / (2 * k)) for k in range(1, 11)]
# B_{2k} / (2k)! for the Euler-Maclaurin tail
_EM = [float(_B[k - 1] / math.factorial(2 * k)) for k in range(1, 41)]


def _shift_for(s, radius=15.0):
    m = 0
    while abs(s + m) < radius or (s + m).real < 1.0:
        m += 1
    return m


def _log_gamma(s):
    # continuous branch, real on the positive axis; valid off (-inf, 0]
    m = _shift_for(s)
    shift = 0j
    for j in range(m):
        shift += cmath.log(s + j)
    z = s + m
    inv = 1.0 / z
    inv2 = inv * inv
    acc = 0j
    for c in reversed(_STIRLING):
        acc = acc * inv2 + c
    return (z - 0.5) * cmath.log(z) - z + HALF_LOG_2PI + acc * inv - shift


def log_gamma_complex(s: complex) -> complex:
    """log Gamma(s) for Re s > 0.

    Uses the branch continuous in the right half plane (zero at s=1, the
    branch of ``scipy.special.loggamma``), not ``log(Gamma(s))`` with a
    principal-value cut.  Stirling's series with 10 terms after shifting
    to ``|s| >= 15``; relative error below 1e-13.
    """
    s = complex(s)
    if not s.real > 0.0:
        raise ValueError(f"log_gamma_complex needs Re s > 0, got {s!r}")
    return _log_gamma(s)


def _digamma(s):
    m = _shift_for(s)
    shift = 0j
    for j in range(m):
        shift += 1.0 / (s + j)
    z = s + m
    inv2 = 1.0 / (z * z)
    acc = 0j
    for c in reversed(_DIGAMMA):
        acc = acc * inv2 + c
    return cmath.log(z) - 0.5 / z - acc * inv2 - shift


def _theta_exact(t):
    return _log_gamma(complex(0.25, 0.5 * t)).imag - 0.5 * t * LOG_PI


def _check_height(t):
    t = np.asarray(t, dtype=float)
    if t.size and (np.any(t < 0.0) or np.any(t > T_CEILING) or not np.all(np.isfinite(t))):
        raise ValueError(f"heights must lie in [0, {T_CEILING:g}]")
    return t


def theta_dd_array(t):
    """theta as a double-double pair ``(hi, lo)`` over an array of heights."""
    t = _check_height(np.atleast_1d(t))
    hi = np.empty_like(t)
    lo = np.zeros_like(t)
    big = t >= THETA_SWITCH
    if np.any(big):
        h, l = backend.kernels().theta_dd(t[big])
        hi[big] = h
        lo[big] = l
    for i in np.flatnonzero(~big):
        hi[i] = _theta_exact(t[i])
    return hi, lo


def theta_array(t):
    hi, lo = theta_dd_array(t)
    return hi + lo


def _theta_err(t):
    if t < THETA_SWITCH:
        return 1e-13 * max(1.0, t)
    # first omitted asymptotic term plus rounding of the leading product
    truncation = 1.0e-3 / t**11
    rounding = 0.5 * t * max(1.0, abs(math.log(t / (2.0 * math.pi)))) * 2.3e-16
    return 2.0 * truncation + rounding + 1e-15


def theta(t: float) -> ThetaValue:
    """Riemann-Siegel theta, ``Im log Gamma(1/4 + it/2) - (t/2) log pi``."""
    t = float(t)
    if t < 0.0:
        raise ValueError("theta is defined here for t >= 0")
    value = theta_array(np.array([t]))[0]
    return ThetaValue(t=t, theta=float(value), err_est=_theta_err(t))


def theta_deriv_array(t):
    t = _check_height(np.atleast_1d(t))
    out = np.empty_like(t)
    big = t >= THETA_SWITCH
    if np.any(big):
        out[big] = backend.kernels().theta_deriv_asym(t[big])
    for i in np.flatnonzero(~big):
        out[i] = 0.5 * _digamma(complex(0.25, 0.5 * t[i])).real - 0.5 * LOG_PI
    return out


def theta_deriv(t: float) -> float:
    if not t > 0.0:
        raise ValueError("theta_deriv needs t > 0")
    return float(theta_deriv_array(np.array([float(t)]))[0])


def z_array(t, threads: int = 1):
    """Hardy Z over an array of heights ``t >= 2 pi``."""
    t = _check_height(np.atleast_1d(t))
    if t.size and t.min() < 2.0 * math.pi:
        raise ValueError("z_function needs t >= 2*pi")
    out = np.empty_like(t)
    high = t >= RS_MIN_T
    if np.any(high):
        out[high] = backend.parallel_map(backend.kernels().z_rs, t[high], threads)
    if np.any(~high):
        out[~high] = hardy_z_euler_maclaurin(t[~high]).real
    return out


def z_function(t: float) -> float:
    """Z(t), real, with ``zeta(1/2+it) = exp(-i theta(t)) Z(t)``."""
    return float(z_array(np.array([float(t)]))[0])


def zeta_euler_maclaurin(s, n_terms=None, m_terms=30):
    """zeta(s) by Euler-Maclaurin summation; slow reference path.

    ``s`` may be an array.  Defaults pick N ~ |Im s|/pi + 10 so the
    Bernoulli tail ratio stays near 1/2.
    """
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    if n_terms is None:
        n_terms = int(np.max(np.abs(s.imag)) / math.pi) + 10
    N = n_terms
    logs = np.log(np.arange(1, N + 1, dtype=float))
    total = np.zeros_like(s)
    for n in range(1, N):
        total += np.exp(-s * logs[n - 1])
    logN = logs[N - 1]
    nps = np.exp(-s * logN)
    total += N * nps / (s - 1.0) + 0.5 * nps
    # sum_k B_2k/(2k)! * s(s+1)...(s+2k-2) * N^(-s-2k+1)
    poch = s.copy()
    power = nps / N
    for k in range(1, m_terms + 1):
        total += _EM[k - 1] * poch * power
        poch = poch * (s + 2 * k - 1) * (s + 2 * k)
        power = power / (N * N)
    return total


def hardy_z_euler_maclaurin(t):
    """``exp(i theta(t)) zeta(1/2 + it)`` via Euler-Maclaurin; real up to rounding."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty(t.size, dtype=complex)
    th = np.array([_theta_exact(x) for x in t])
    # group by height so N stays proportional to each t
    order = np.argsort(t)
    for chunk in np.array_split(order, max(1, int(t.size // 256) + 1)):
        if chunk.size == 0:
            continue
        zeta = zeta_euler_maclaurin(0.5 + 1j * t[chunk])
        out[chunk] = np.exp(1j * th[chunk]) * zeta
    return out


def _log_chi(s):
    return (s - 0.5) * LOG_PI + _log_gamma(0.5 * (1.0 - s)) - _log_gamma(0.5 * s)


def chi_power(sigma: float, t: float, kappa: float, mode: str = "exact") -> ChiPower:
    """chi(s)^(-kappa) for s = sigma + i t, t > 0.

    ``exact`` uses chi(s) = pi^(s-1/2) Gamma((1-s)/2) / Gamma(s/2) with the
    log branch fixed by -log chi(1/2+it) = 2 i theta(t); ``asymptotic``
    uses (t/2pi)^(kappa(s-1/2)) exp(-i kappa (t + pi/4)).
    """
    if not t > 0.0:
        raise ValueError("chi_power needs t > 0")
    if not kappa > 0.0:
        raise ValueError("chi_power needs kappa > 0")
    s = complex(sigma, t)
    if mode == "exact":
        value = cmath.exp(-kappa * _log_chi(s))
    elif mode == "asymptotic":
        log_ratio = math.log(t / (2.0 * math.pi))
        modulus = math.exp(kappa * (sigma - 0.5) * log_ratio)
        phase = kappa * (t * log_ratio - t - 0.25 * math.pi)
        value = modulus * cmath.exp(1j * math.fmod(phase, 2.0 * math.pi))
    else:
        raise ValueError(f"mode must be 'exact' or 'asymptotic', got {mode!r}")
    return ChiPower(sigma=float(sigma), t=float(t), kappa=float(kappa), value=value, mode=mode)


def theta_over_pi_dd(t):
    """theta(t)/pi as a double-double pair, the normalized-zero coordinate."""
    hi, lo = theta_dd_array(t)
    q = dd.dd_div_d((hi, lo), dd.PI[0])
    # correct for the low word of pi: x/pi = x/pi_hi * (1 - pi_lo/pi_hi)
    return dd.dd_add_d(q, -q[0] * dd.PI[1] / dd.PI[0])


def theta_mod_pi(t):
    """theta(t)/pi reduced to [0, 1)."""
    return dd.dd_frac(theta_over_pi_dd(t))
