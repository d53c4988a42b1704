"""Normalized zeros, zero-side Weyl sums and the zero/prime residual report."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import ddouble as dd
from .arith import LambdaTable, chebyshev_psi, prime_side_sum
from .rs_core import theta_array, theta_over_pi_dd
from .zero_finder import ZeroFinderError, ZeroList

MIN_GAMMA = 10.0


@dataclass(frozen=True)
class NormalizedZero:
    index: int
    gamma: float
    x: float
    frac: float


@dataclass(frozen=True)
class WeylReport:
    T: float
    kappa: float
    N_T: int
    U: complex
    P: complex
    residual: complex
    bound_exponent: float
    normalized_residual: float


def _coords(zeros: ZeroList):
    """x_n = theta(gamma_n)/pi as a double-double pair, cached on the list."""
    cached = getattr(zeros, "_x_dd", None)
    if cached is not None and cached[0] is zeros.gammas:
        return cached[1]
    g = zeros.gammas
    if g.size and g[0] < MIN_GAMMA:
        raise ZeroFinderError(f"normalized zeros need gamma >= {MIN_GAMMA}, got {g[0]!r}")
    x = theta_over_pi_dd(g) if g.size else (np.empty(0), np.empty(0))
    zeros._x_dd = (zeros.gammas, x)
    return x


def normalized_array(zeros: ZeroList):
    """(x, frac) arrays; the list-of-records form is ``normalized_zeros``."""
    hi, lo = _coords(zeros)
    return hi + lo, dd.dd_frac((hi, lo))


def normalized_zeros(zeros: ZeroList) -> list:
    if len(zeros) == 0:
        raise ZeroFinderError("normalized_zeros needs at least one zero")
    x, frac = normalized_array(zeros)
    return [NormalizedZero(i + 1, float(g), float(a), float(f))
            for i, (g, a, f) in enumerate(zip(zeros.gammas, x, frac))]


def _require_cover(zeros, T):
    if not zeros.covers(T):
        raise ZeroFinderError(
            f"zero list covers ({zeros.t_min:g}, {zeros.t_max:g}], not (0, {T:g}]; "
            "compute or import zeros up to T first")


def _phase_sum(x, kappa, sign=1.0):
    if kappa == 0.0:
        return complex(x[0].size, 0.0)
    f = dd.dd_frac(dd.dd_mul_d(x, kappa))
    ang = 2.0 * math.pi * f
    return complex(math.fsum(np.cos(ang).tolist()), sign * math.fsum(np.sin(ang).tolist()))


def zero_side_sum(zeros: ZeroList, T: float, kappa: float, t_from: float = 0.0) -> complex:
    """U(T) = sum over t_from < gamma <= T of exp(2 pi i kappa x_n)."""
    if kappa < 0:
        raise ValueError("kappa must be >= 0")
    _require_cover(zeros, T)
    lo = zeros.count_up_to(t_from) if t_from > 0 else 0
    hi = zeros.count_up_to(T)
    xh, xl = _coords(zeros)
    return _phase_sum((xh[lo:hi], xl[lo:hi]), float(kappa))


def mean_value(zeros: ZeroList, T: float, kappa: float) -> complex:
    _require_cover(zeros, T)
    n = zeros.count_up_to(T)
    if n == 0:
        raise ZeroFinderError(f"no zeros up to T = {T:g}")
    return zero_side_sum(zeros, T, kappa) / n


def bound_exponent(kappa):
    return max((1.0 - kappa) / 2.0, kappa / 2.0)


def main_theorem_report(zeros: ZeroList, table: LambdaTable, T: float, kappa: float) -> WeylReport:
    if not kappa > 0:
        raise ValueError("main_theorem_report needs kappa > 0")
    U = zero_side_sum(zeros, T, kappa)
    P = prime_side_sum(T, kappa, table).value
    res = U - P
    be = bound_exponent(kappa)
    norm = abs(res) / (T**be * math.log(T) ** 2)
    return WeylReport(T=float(T), kappa=float(kappa), N_T=zeros.count_up_to(T), U=U, P=P,
                      residual=res, bound_exponent=be, normalized_residual=norm)


def corollary_residual(zeros: ZeroList, table: LambdaTable, T: float) -> float:
    """|U(T, 1) + psi(T/2 pi)|."""
    return abs(zero_side_sum(zeros, T, 1.0) + chebyshev_psi(T / (2.0 * math.pi), table))


def phase_approx_deviation(gammas):
    """|2 theta(g) - (g log(g/2pi) - g - pi/4)| for each ordinate g."""
    g = np.asarray(gammas, dtype=float)
    approx = g * np.log(g / (2.0 * math.pi)) - g - 0.25 * math.pi
    return np.abs(2.0 * theta_array(g) - approx)
