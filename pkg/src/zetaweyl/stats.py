"""Distribution of normalized zeros mod 1: histogram, cosine fit, discrepancy,
spacings, and Z at Gram points."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .rs_core import theta_deriv_array, z_array
from .zero_finder import gram_points
from .weyl import normalized_array

MAX_BINS = 10_000
MIN_FIT_TOTAL = 1000


@dataclass
class Histogram:
    bins: int
    counts: np.ndarray
    total: int

    @property
    def edges(self):
        return np.arange(self.bins + 1) / self.bins

    @property
    def centers(self):
        return (np.arange(self.bins) + 0.5) / self.bins

    @property
    def heights(self):
        """Counts normalized to a density on [0, 1)."""
        return self.counts * (self.bins / self.total) if self.total else np.zeros(self.bins)


@dataclass(frozen=True)
class DensityFit:
    c: float
    rss: float

    def density(self, x):
        return 1.0 - self.c * np.cos(2.0 * math.pi * np.asarray(x, dtype=float))


@dataclass
class SpacingSeries:
    deltas: np.ndarray
    exact: np.ndarray

    @property
    def max_abs_diff(self):
        return float(np.max(np.abs(self.deltas - self.exact))) if self.exact.size else 0.0

    @property
    def mean_exact(self):
        return float(self.exact.mean())


def histogram_mod1(values, B: int = 50) -> Histogram:
    B = int(B)
    if not 2 <= B <= MAX_BINS:
        raise ValueError(f"bins must lie in [2, {MAX_BINS}], got {B}")
    v = np.asarray(values, dtype=float)
    frac = v - np.floor(v)
    idx = np.minimum((frac * B).astype(np.int64), B - 1)
    counts = np.bincount(idx, minlength=B)
    return Histogram(bins=B, counts=counts, total=int(v.size))


def fit_cosine_density(h: Histogram) -> DensityFit:
    """Least-squares amplitude c in 1 - c cos(2 pi x) on bin centers."""
    if h.total < MIN_FIT_TOTAL:
        raise ValueError(f"fit needs at least {MIN_FIT_TOTAL} points, got {h.total}")
    cs = np.cos(2.0 * math.pi * h.centers)
    heights = h.heights
    # sum of cos over centers is 0 for B >= 2, so subtracting the constant
    # only removes rounding noise
    c = -math.fsum((heights - 1.0) * cs) / math.fsum(cs * cs)
    rss = math.fsum((heights - (1.0 - c * cs)) ** 2)
    return DensityFit(c=float(c), rss=float(rss))


def star_discrepancy(values) -> float:
    u = np.sort(np.asarray(values, dtype=float), kind="stable")
    if u.size == 0:
        raise ValueError("star_discrepancy needs a nonempty sample")
    if u[0] < 0.0 or u[-1] >= 1.0:
        raise ValueError("values must lie in [0, 1)")
    n = u.size
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - u), np.max(u - (i - 1) / n)))


def first_moment(values):
    """<exp(2 pi i u)> over the sample."""
    ang = 2.0 * math.pi * np.asarray(values, dtype=float)
    n = ang.size
    return complex(math.fsum(np.cos(ang).tolist()) / n, math.fsum(np.sin(ang).tolist()) / n)


def spacings(zeros) -> SpacingSeries:
    g = zeros.gammas
    if g.size < 2:
        raise ValueError("spacings need at least two zeros")
    x, _ = normalized_array(zeros)
    deltas = np.diff(g) / math.pi * 0.5 * np.log(g[:-1] / (2.0 * math.pi))
    return SpacingSeries(deltas=deltas, exact=np.diff(x))


def midpoint_deltas(gammas):
    """Spacing estimate with theta' taken at the interval midpoint."""
    g = np.asarray(gammas, dtype=float)
    return np.diff(g) * theta_deriv_array(0.5 * (g[:-1] + g[1:])) / math.pi


def gram_z_means(M: int, threads: int = 1):
    """Mean of Z(g_k) over even and over odd k in [0, M]."""
    if M < 1:
        raise ValueError("need M >= 1")
    ks = np.arange(0, M + 1, dtype=np.int64)
    g, _ = gram_points(ks)
    z = z_array(g, threads=threads)
    return float(np.mean(z[0::2])), float(np.mean(z[1::2]))
