"""Von Mangoldt sieve, Chebyshev psi and the prime-side exponential sums."""

from __future__ import annotations

import cmath
import csv
import math
from dataclasses import dataclass

import numpy as np

from . import ddouble as dd

SIEVE_LIMIT = 10**8


@dataclass
class LambdaTable:
    limit: int
    values: np.ndarray

    def __getitem__(self, n):
        return float(self.values[n])

    def support(self, upto):
        """Indices n <= upto with Lambda(n) > 0."""
        upto = min(int(upto), self.limit)
        return np.flatnonzero(self.values[: upto + 1])


@dataclass(frozen=True)
class PrimeSideSum:
    T: float
    kappa: float
    cutoff: int
    value: complex


def _prime_mask(limit):
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if mask[p]:
            mask[p * p::p] = False
    return mask


def lambda_sieve(limit: int) -> LambdaTable:
    """Lambda(n) for 0 <= n <= limit (Lambda(0) stored as 0)."""
    limit = int(limit)
    if limit < 1:
        raise ValueError("lambda_sieve needs limit >= 1")
    if limit > SIEVE_LIMIT:
        raise ValueError(f"limit {limit} exceeds the {SIEVE_LIMIT} memory budget")
    mask = _prime_mask(limit)
    values = np.zeros(limit + 1)
    primes = np.flatnonzero(mask)
    values[primes] = np.log(primes)
    for p in primes[primes <= math.isqrt(limit)].tolist():
        q = p * p
        lp = math.log(p)
        while q <= limit:
            values[q] = lp
            q *= p
    return LambdaTable(limit=limit, values=values)


def chebyshev_psi(x: float, table: LambdaTable) -> float:
    """psi(x) = sum of Lambda(n) over n <= x, correctly rounded."""
    if x < 0:
        raise ValueError("psi needs x >= 0")
    n = int(math.floor(x))
    if n > table.limit:
        raise ValueError(f"x = {x} beyond sieve limit {table.limit}")
    return math.fsum(table.values[: n + 1].tolist())


def _integer_power(kappa):
    m = 1.0 / kappa
    r = round(m)
    if r >= 1 and abs(m - r) == 0.0 and r * kappa == 1.0:
        return int(r)
    return None


def reduced_phase(n, kappa):
    """frac(kappa * n**(1/kappa)) in [0, 1) for integers n >= 1.

    Exact when 1/kappa is an integer; otherwise evaluated in double-double,
    good to ~1e-20 relative before the reduction.
    """
    n = np.atleast_1d(np.asarray(n, dtype=np.int64))
    m = _integer_power(kappa)
    if m is not None:
        # kappa * n**m = n**m / m, so the fraction is (n**m mod m) / m
        res = np.ones_like(n)
        base = n % m
        for _ in range(m):
            res = (res * base) % m
        return res.astype(float) / m
    log_n = dd.dd_log(n.astype(float))
    expo = dd.dd_div_d(log_n, kappa)
    power = dd.dd_exp(expo)
    return dd.dd_frac(dd.dd_mul_d(power, kappa))


def _csum(weights, phases):
    # sum of weights * exp(2 pi i phases), each part correctly rounded
    ang = 2.0 * math.pi * phases
    re = math.fsum((weights * np.cos(ang)).tolist())
    im = math.fsum((weights * np.sin(ang)).tolist())
    return complex(re, im)


def prime_side_cutoff(T, kappa):
    return int(math.floor((T / (2.0 * math.pi)) ** kappa))


def prime_side_sum(T: float, kappa: float, table: LambdaTable) -> PrimeSideSum:
    """-(e^{pi i (1-kappa)/4}/sqrt(kappa)) sum_{n<=cutoff} Lambda(n) n^{1/(2kappa)-1/2} e^{-2 pi i kappa n^{1/kappa}}."""
    if not kappa > 0:
        raise ValueError("kappa must be positive")
    cutoff = prime_side_cutoff(T, kappa)
    if cutoff > table.limit:
        raise ValueError(f"cutoff {cutoff} beyond sieve limit {table.limit}")
    if cutoff < 2:
        return PrimeSideSum(T=float(T), kappa=float(kappa), cutoff=cutoff, value=0j)
    n = table.support(cutoff)
    expo = 0.5 / kappa - 0.5
    weights = table.values[n] * (np.exp(expo * np.log(n)) if expo != 0.0 else 1.0)
    inner = _csum(weights, -reduced_phase(n, kappa))
    pref = cmath.exp(0.25j * math.pi * (1.0 - kappa)) / math.sqrt(kappa)
    return PrimeSideSum(T=float(T), kappa=float(kappa), cutoff=cutoff, value=-pref * inner)


def primes_up_to(x):
    x = int(math.floor(x))
    if x < 2:
        return np.empty(0, dtype=np.int64)
    if x > SIEVE_LIMIT:
        raise ValueError(f"x = {x} beyond sieve limit {SIEVE_LIMIT}")
    return np.flatnonzero(_prime_mask(x))


def ps_prime_exp_sum(x: float, k: float, gamma_exp: float, primes=None) -> complex:
    """sum over primes p <= x of exp(2 pi i k p**gamma_exp)."""
    if not (2.0 / 3.0 < gamma_exp < 1.0):
        raise ValueError("gamma_exp must lie in (2/3, 1)")
    if k < 1:
        raise ValueError("k must be >= 1")
    if primes is None:
        primes = primes_up_to(x)
    else:
        primes = primes[primes <= x]
    if primes.size == 0:
        return 0j
    log_p = dd.dd_log(primes.astype(float))
    power = dd.dd_exp(dd.dd_mul_d(log_p, gamma_exp))
    phases = dd.dd_frac(dd.dd_mul_d(power, k))
    return _csum(np.ones(primes.size), phases)


def ps_growth_exponent(xs, k, gamma_exp):
    """Least-squares slope of log|S(x)| against log x, plus the sums."""
    xs = [float(x) for x in xs]
    primes = primes_up_to(max(xs))
    sums = [ps_prime_exp_sum(x, k, gamma_exp, primes) for x in xs]
    slope = np.polyfit(np.log(xs), np.log(np.abs(sums)), 1)[0]
    return float(slope), sums


def dump_lambda_csv(path, table: LambdaTable, upto=None):
    upto = table.limit if upto is None else min(upto, table.limit)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "Lambda"])
        for n in range(1, upto + 1):
            w.writerow([n, format(float(table.values[n]), ".12g")])
