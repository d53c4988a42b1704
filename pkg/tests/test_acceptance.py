"""Acceptance criteria 1 to 10.

Each test records one PASS/FAIL line (see ``conftest.pytest_terminal_summary``)
and then asserts.  Criterion 6 needs the first 2,001,052 zeros; they are taken
from ``ZGL_ODLYZKO`` (a published table), ``ZGL_CACHE``, the pytest cache, or
computed once (about 7 minutes on one core) and saved to the pytest cache.
"""

import math
import os
import time
import warnings

import numpy as np
import pytest

from zetaweyl import arith, oracle, stats, weyl
from zetaweyl import zero_finder as zf
from zetaweyl.rs_core import theta_array

from conftest import record

N_FIGURE = 2_001_052


def _check(n, ok, detail):
    record(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def _slope(xs, ys):
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


def test_c01_zero_correctness():
    t0 = time.perf_counter()
    path = os.environ.get("ZGL_ODLYZKO")
    if path:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            ref = zf.import_zeros(path, spot_checks=100).gammas[:10_000]
        tol, src = 1e-6, "odlyzko"
    computed = zf.compute_zeros(9900.0)
    got = computed.gammas[:10_000]
    if not path:
        ref = np.asarray(zf.dense_grid_zeros(10.0, float(got[-1]) + 0.05))[:10_000]
        tol, src = 1e-8, "dense grid"
    dt = time.perf_counter() - t0
    err = float(np.max(np.abs(got - ref))) if got.size == ref.size == 10_000 else math.inf
    _check(1, err <= tol and dt < 60,
           f"max|gamma - {src}| = {err:.2e} (tol {tol:g}), {dt:.1f} s")


def test_c02_count_consistency(zeros_1e5):
    t0 = time.perf_counter()
    ks = np.arange(0, zf.gram_index_below(1e5) + 1, 100)
    g, _ = zf.gram_points(ks)
    counted = np.searchsorted(zeros_1e5.gammas, g, side="right")
    S = counted - (theta_array(g) / math.pi + 1)
    worst = float(np.max(np.abs(S)))
    dt = time.perf_counter() - t0
    _check(2, worst <= 3, f"max|S| = {worst:.3f} over {ks.size} Gram points, {dt:.1f} s")


def test_c03_kappa_one_identity(zeros_1e5, sieve):
    rng = np.random.default_rng(7)
    rel = 0.0
    for T in rng.uniform(100.0, 1e6, 10):
        psi = arith.chebyshev_psi(T / (2 * math.pi), sieve)
        rel = max(rel, abs(arith.prime_side_sum(T, 1.0, sieve).value + psi) / psi)
    Ts = (1e3, 3e3, 1e4, 3e4, 1e5)
    C = max(weyl.corollary_residual(zeros_1e5, sieve, T) / (math.sqrt(T) * math.log(T) ** 2)
            for T in Ts)
    _check(3, rel <= 1e-12 and C < 10, f"P+psi rel err {rel:.1e}; |U+psi| constant C = {C:.2e}")


def test_c04_residual_scaling(zeros_1e5, sieve):
    Ts = (1e3, 1e4, 1e5)
    parts, ok = [], True
    for kappa in (0.5, 1.0, 1.1):
        res = [abs(weyl.main_theorem_report(zeros_1e5, sieve, T, kappa).residual) for T in Ts]
        s = _slope(Ts, res)
        limit = max((1 - kappa) / 2, kappa / 2) + 0.15
        ok &= s <= limit
        parts.append(f"k={kappa:g}: {s:.3f}<={limit:.3f}")
    _check(4, ok, "; ".join(parts))


def test_c05_mean_value_decay(zeros_1e5):
    parts, ok = [], True
    for kappa in (0.5, 1.0, 1.1):
        lo, hi = abs(weyl.mean_value(zeros_1e5, 1e3, kappa)), abs(weyl.mean_value(zeros_1e5, 1e5, kappa))
        ok &= hi < lo
        parts.append(f"k={kappa:g}: {lo:.4f}->{hi:.4f}")
    m0 = weyl.mean_value(zeros_1e5, 1e5, 0.0)
    ok &= m0 == 1.0
    _check(5, ok, "; ".join(parts) + f"; k=0 mean {m0.real:g}")


def _figure_zeros(cache_dir):
    path = os.environ.get("ZGL_ODLYZKO")
    if path:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            z = zf.import_zeros(path, spot_checks=100)
        if len(z) >= N_FIGURE:
            return z.head(N_FIGURE), "odlyzko"
    path = os.environ.get("ZGL_CACHE")
    if path and os.path.exists(path):
        z = zf.read_cache(path)
        if len(z) >= N_FIGURE:
            return z.head(N_FIGURE), "ZGL_CACHE"
    saved = cache_dir / f"zeros_first_{N_FIGURE}.bin"
    if saved.exists():
        return zf.read_cache(saved), "pytest cache"
    g, _ = zf.gram_point(N_FIGURE + 50)
    z = zf.compute_zeros(g)
    if z.diagnostics or len(z) < N_FIGURE:
        pytest.fail(f"extended run incomplete: {len(z)} zeros, {len(z.diagnostics)} diagnostics")
    z = z.head(N_FIGURE)
    zf.write_cache(saved, z)
    return z, "computed"


def _shape(zeros):
    _, frac = weyl.normalized_array(zeros)
    h = stats.histogram_mod1(frac, 50)
    return frac, h, stats.fit_cosine_density(h)


def test_c06_figure_fallback(first_1e5):
    t0 = time.perf_counter()
    frac, _, fit = _shape(first_1e5)
    m = stats.first_moment(frac)
    dt = time.perf_counter() - t0
    ok = 0.10 <= fit.c <= 0.30 and m.real < 0
    _check(6, ok, f"[scaled, 1e5 zeros] c = {fit.c:.4f}, mean = {m.real:+.4f}{m.imag:+.4f}i, {dt:.1f} s")


@pytest.mark.slow
def test_c06_figure_full(request, first_1e5):
    zeros, src = _figure_zeros(request.config.cache.mkdir("zetaweyl"))
    frac, h, fit = _shape(zeros)
    m = stats.first_moment(frac)
    ratio = h.counts.min() / h.counts.max()
    # the later million should sit nearer to uniform than the first 1e5
    later = stats.fit_cosine_density(stats.histogram_mod1(frac[1_000_000:2_000_000], 50)).c
    early = _shape(first_1e5)[2].c
    ok = (len(zeros) == N_FIGURE and abs(fit.c - 3 / 17) <= 0.03 and abs(m.real + 3 / 34) <= 0.02
          and abs(m.imag) <= 0.02 and ratio < 0.95 and early >= later - 0.02)
    _check(6, ok, f"[{len(zeros)} zeros, {src}] c = {fit.c:.4f}, mean = {m.real:+.4f}{m.imag:+.4f}i, "
                  f"min/max bin {ratio:.3f}, c early {early:.4f} vs late {later:.4f}")


def test_c07_gram_means():
    e3, o3 = stats.gram_z_means(1000)
    e5, o5 = stats.gram_z_means(100_000)
    ok = e5 > 0 > o5 and abs(e5 - 2) < abs(e3 - 2) and abs(o5 + 2) < abs(o3 + 2)
    _check(7, ok, f"M=1e3 ({e3:.4f}, {o3:.4f}) -> M=1e5 ({e5:.5f}, {o5:.5f})")


def _frozen():
    from test_oracle import frozen_constants

    return frozen_constants()


def test_c08_stationary_phase():
    frozen = _frozen()
    sweep = oracle.stationary_phase_sweep()
    within = all(c.extra["scaled_residual"] <= frozen[("stationary_phase", None, c.params["a"],
                                                       c.params["kappa"])] for c in sweep)
    C = max(v for k, v in frozen.items() if k[0] == "stationary_phase")
    worst = max(c.extra["scaled_residual"] for c in sweep)
    bad = [c for c in oracle.derivative_case_grid() if not c.passed]
    _check(8, within and C < 5 and not bad,
           f"max residual/r^a = {worst:.3f}, frozen C <= {C:g}; derivative violations {len(bad)}")


def test_c09_piatetski_shapiro():
    slope, _ = arith.ps_growth_exponent([1e4, 1e5, 1e6], 1.1, 1 / 1.1)
    _check(9, slope < 1.0, f"fitted exponent {slope:.3f} (target <= 0.95, bound 11/12)")


def test_c10_uniformity(first_1e5, rng):
    x, frac = weyl.normalized_array(first_1e5)
    d = stats.star_discrepancy(frac)
    samples = [frac, frac[:1000], frac[:10_000], frac[50_000:]]
    samples += [frac[i:i + 5000] for i in rng.integers(0, frac.size - 5000, 6)]
    koksma = all(abs(stats.first_moment(s)) <= 2 * math.pi * stats.star_discrepancy(s) + 4 / s.size
                 for s in samples)
    _check(10, 0.01 < d < 0.05 and koksma, f"D* = {d:.5f}; Koksma on {len(samples)} samples {koksma}")
