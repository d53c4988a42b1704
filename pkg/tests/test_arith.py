import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zetaweyl import arith


def _trial_lambda(n):
    if n < 2:
        return 0.0
    for p in range(2, math.isqrt(n) + 1):
        if n % p == 0:
            while n % p == 0:
                n //= p
            return math.log(p) if n == 1 else 0.0
    return math.log(n)


@pytest.fixture(scope="module")
def small():
    return arith.lambda_sieve(10_000)


def test_lambda_examples(small):
    assert small[8] == pytest.approx(0.693147, abs=1e-6)
    assert small[6] == 0.0
    assert small[7] == pytest.approx(1.945910, abs=1e-6)
    assert small[1] == 0.0


def test_sieve_matches_trial_division(small):
    ref = np.array([_trial_lambda(n) for n in range(small.limit + 1)])
    assert np.array_equal(small.values, ref)


def test_sieve_limits():
    with pytest.raises(ValueError):
        arith.lambda_sieve(10**8 + 1)
    with pytest.raises(ValueError):
        arith.lambda_sieve(0)


def test_psi_examples(small):
    assert arith.chebyshev_psi(1, small) == 0.0
    ref = 3 * math.log(2) + 2 * math.log(3) + math.log(5) + math.log(7)
    assert arith.chebyshev_psi(10, small) == pytest.approx(ref, rel=1e-15)
    assert abs(ref - 7.8320141) < 1e-6
    grid = np.linspace(0, 10_000, 301)
    vals = [arith.chebyshev_psi(x, small) for x in grid]
    assert np.all(np.diff(vals) >= 0)
    with pytest.raises(ValueError):
        arith.chebyshev_psi(10_001, small)


def test_psi_matches_direct_sum(small):
    for x in (97.5, 1000, 9999):
        direct = math.fsum(_trial_lambda(n) for n in range(1, int(x) + 1))
        assert arith.chebyshev_psi(x, small) == direct


def test_pnt_trend(sieve):
    assert abs(arith.chebyshev_psi(1e6, sieve) / 1e6 - 1) < 0.01


def test_prime_side_kappa_one(sieve, rng):
    for T in rng.uniform(100.0, 1e6, 10):
        ps = arith.prime_side_sum(T, 1.0, sieve)
        psi = arith.chebyshev_psi(T / (2 * math.pi), sieve)
        assert abs(ps.value + psi) <= 1e-12 * psi


def test_prime_side_empty(small):
    ps = arith.prime_side_sum(2 * math.pi * 1.9, 1.0, small)
    assert ps.value == 0 and ps.cutoff == 1


def test_prime_side_triangle_bound(small):
    kappa = 0.5
    ps = arith.prime_side_sum(2 * math.pi * 100, kappa, small)
    assert ps.cutoff == 10
    bound = sum(small[n] * math.sqrt(n) for n in range(1, 11)) / math.sqrt(kappa)
    assert abs(ps.value) <= bound


def test_prime_side_direct_formula(small):
    T, kappa = 2 * math.pi * 300.0, 1.1
    ps = arith.prime_side_sum(T, kappa, small)
    acc = 0j
    for n in range(2, ps.cutoff + 1):
        if small[n]:
            acc += small[n] * n ** (0.5 / kappa - 0.5) * cmath.exp(-2j * math.pi * kappa * n ** (1 / kappa))
    ref = -cmath.exp(0.25j * math.pi * (1 - kappa)) / math.sqrt(kappa) * acc
    assert abs(ps.value - ref) <= 1e-9 * abs(ref)


def test_prime_side_rejects(small):
    with pytest.raises(ValueError):
        arith.prime_side_sum(1e6, 1.0, small)
    with pytest.raises(ValueError):
        arith.prime_side_sum(1e3, 0.0, small)


def test_reduced_phase_integer_powers():
    n = np.arange(1, 50)
    assert np.array_equal(arith.reduced_phase(n, 1.0), np.zeros(49))
    # kappa = 1/2: frac(n^2 / 2) is 1/2 for odd n
    assert np.array_equal(arith.reduced_phase(n, 0.5), np.where(n % 2, 0.5, 0.0))


def _circ(a, b):
    d = np.abs(a - b) % 1.0
    return np.minimum(d, 1.0 - d)


def test_reduced_phase_against_mpmath(rng):
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 40
    ns = rng.integers(2, 10**7, 60)
    for kappa in (0.5, 0.8, 1.1, 1.2, 1.5, 6 / 5):
        got = arith.reduced_phase(ns, kappa)
        k = mp.mpf(kappa)
        ref = np.array([float(mp.frac(k * mp.mpf(int(n)) ** (1 / k))) for n in ns])
        assert np.max(_circ(got, ref)) < 1e-9


@given(st.integers(2, 10**7), st.floats(0.5, 1.5))
@settings(max_examples=100, deadline=None)
def test_reduced_phase_range(n, kappa):
    f = arith.reduced_phase(np.array([n]), kappa)[0]
    assert 0.0 <= f < 1.0


def test_ps_examples():
    g = 5 / 6
    ref = sum(cmath.exp(2j * math.pi * p**g) for p in (2, 3, 5, 7))
    assert abs(arith.ps_prime_exp_sum(10, 1, g) - ref) < 1e-12
    s = arith.ps_prime_exp_sum(2, 1.3, 0.75)
    assert abs(abs(s) - 1) < 1e-15
    assert abs(s - cmath.exp(2j * math.pi * 1.3 * 2**0.75)) < 1e-13


def test_ps_rejects():
    for g in (0.6, 2 / 3, 1.0):
        with pytest.raises(ValueError):
            arith.ps_prime_exp_sum(100, 1, g)
    with pytest.raises(ValueError):
        arith.ps_prime_exp_sum(100, 0.5, 0.8)


def test_lambda_csv(tmp_path, small):
    p = tmp_path / "lam.csv"
    arith.dump_lambda_csv(p, small, upto=10)
    lines = p.read_text().splitlines()
    assert lines[0] == "n,Lambda"
    assert len(lines) == 11
    assert lines[8] == "8,0.69314718056"
