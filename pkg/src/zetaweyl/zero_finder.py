"""Gram points, critical-line zeros of Z(t), zero tables and the zero cache.

Zeros are located block by block between *good* Gram points (those with
``(-1)**k Z(g_k) > 0``).  A block spanning k Gram intervals is expected
to hold k zeros; blocks that show fewer sign changes at the Gram points
are resampled with 2, 4, ..., 64 points per interval.  Blocks still short
after that are reported in ``ZeroList.diagnostics`` instead of being
dropped.  This is the usual Gram/Rosser heuristic, not a Turing-style
certificate.
"""

from __future__ import annotations

import csv
import math
import struct
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import lambertw

from . import ddouble as dd
from .rs_core import T_CEILING, theta_array, theta_dd_array, theta_deriv_array, z_array

CACHE_MAGIC = b"ZGL1"
_HEADER = struct.Struct("<4sId")
FIRST_ZERO = 14.134725141734695
GRAM_RESIDUAL_TOL = 1e-9
SUBDIVISIONS = (2, 4, 8, 16, 32, 64)


class ZeroFinderError(ValueError):
    pass


class ZeroFileError(ZeroFinderError):
    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


@dataclass
class GramTable:
    ks: np.ndarray
    points: np.ndarray
    residuals: np.ndarray

    def __len__(self):
        return int(self.ks.size)

    @property
    def entries(self):
        return list(zip(self.ks.tolist(), self.points.tolist(), self.residuals.tolist()))


@dataclass
class ZeroList:
    """Ordered critical-line zero ordinates.

    ``t_min`` and ``t_max`` bound the height range the list is known to
    cover completely; ``source`` is ``"computed"`` for scans made in this
    process and ``"imported"`` for lists read from a table or cache.
    """

    gammas: np.ndarray
    source: str = "computed"
    t_max: float = 0.0
    t_min: float = 0.0
    tol: float = 0.0
    diagnostics: list = field(default_factory=list)

    def __post_init__(self):
        self.gammas = np.asarray(self.gammas, dtype=float)

    def __len__(self):
        return int(self.gammas.size)

    def count_up_to(self, T):
        return int(np.searchsorted(self.gammas, T, side="right"))

    def covers(self, T):
        return self.t_min < FIRST_ZERO and T <= self.t_max

    def head(self, n):
        """The first ``n`` zeros, with coverage trimmed to match."""
        n = min(n, len(self))
        if n == len(self):
            return self
        t_max = float(self.gammas[n - 1]) if n else self.t_min
        return ZeroList(self.gammas[:n].copy(), self.source, t_max, self.t_min, self.tol)


# Gram points

def _gram_residual(g, ks):
    hi, lo = theta_dd_array(g)
    ph, pe = dd.two_prod(ks.astype(float), dd.PI[0])
    return (hi - ph) + (lo - pe - ks * dd.PI[1])


def _gram_guess(ks):
    x = (ks + 0.125) / math.e
    w = lambertw(x).real
    return 2.0 * math.pi * (ks + 0.125) / w


def _gram_bisect(k):
    lo, hi = 7.0, max(20.0, 2.0 * float(_gram_guess(np.array([k], dtype=float))[0]))
    target = k * math.pi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if theta_array(np.array([mid]))[0] < target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 4.0 * math.ulp(mid):
            break
    return 0.5 * (lo + hi)


def gram_points(ks):
    """Solve theta(g_k) = k pi for an array of integers k >= -1.

    Newton's method from the Lambert-W inverse of the leading term, with a
    bisection fallback for any index that fails to converge.
    """
    ks = np.atleast_1d(np.asarray(ks, dtype=np.int64))
    if ks.size and ks.min() < -1:
        raise ValueError("Gram points are defined for k >= -1")
    kf = ks.astype(float)
    g = _gram_guess(kf)
    for _ in range(30):
        r = _gram_residual(g, kf)
        step = r / theta_deriv_array(g)
        g = np.maximum(g - step, 7.0)
        if np.all(np.abs(step) <= 4.0 * np.spacing(g)):
            break
    r = _gram_residual(g, kf)
    bad = ~(np.abs(r) <= GRAM_RESIDUAL_TOL)
    for i in np.flatnonzero(bad):
        g[i] = _gram_bisect(int(ks[i]))
        r[i] = _gram_residual(g[i:i + 1], kf[i:i + 1])[0]
    if g.size and g.max() > T_CEILING:
        raise ValueError(f"Gram point exceeds height ceiling {T_CEILING:g}")
    return g, np.abs(r)


def gram_point(k: int):
    """``(g_k, |theta(g_k) - k pi|)`` for a single index."""
    if k < -1:
        raise ValueError("Gram points are defined for k >= -1")
    g, r = gram_points(np.array([k]))
    return float(g[0]), float(r[0])


def gram_index_below(t):
    """Largest k with g_k <= t (t >= 7)."""
    return int(math.floor(theta_array(np.array([float(t)]))[0] / math.pi))


def gram_table(k_lo: int, k_hi: int) -> GramTable:
    ks = np.arange(max(k_lo, -1), k_hi + 1, dtype=np.int64)
    g, r = gram_points(ks)
    return GramTable(ks=ks, points=g, residuals=r)


# Root refinement

def _tolerance(x, tol):
    return np.maximum(tol, 4.0 * np.spacing(np.abs(x)))


def refine_brackets(a, b, fa=None, fb=None, tol=1e-10, threads=1, max_iter=200):
    """Refine many sign-change brackets of Z at once (Illinois method).

    Returns the midpoint of each final bracket, whose width is below
    ``max(tol, 4 ulp)``.
    """
    a = np.array(a, dtype=float)
    b = np.array(b, dtype=float)
    fa = z_array(a, threads) if fa is None else np.array(fa, dtype=float)
    fb = z_array(b, threads) if fb is None else np.array(fb, dtype=float)
    if np.any(fa * fb > 0.0) or np.any(~(b > a)):
        raise ZeroFinderError("every bracket needs a < b and a sign change of Z")
    side = np.zeros(a.size, dtype=np.int8)
    done = (b - a) <= _tolerance(b, tol)
    for _ in range(max_iter):
        idx = np.flatnonzero(~done)
        if idx.size == 0:
            break
        ai, bi, fai, fbi = a[idx], b[idx], fa[idx], fb[idx]
        c = (ai * fbi - bi * fai) / (fbi - fai)
        outside = ~((c > ai) & (c < bi))
        c[outside] = 0.5 * (ai[outside] + bi[outside])
        fc = z_array(c, threads)
        left = np.sign(fc) == np.sign(fai)
        exact = fc == 0.0
        # root in [c, b]: move a; halve fb if a moved twice in a row
        mv = left & ~exact
        a[idx[mv]] = c[mv]
        fa[idx[mv]] = fc[mv]
        twice = mv & (side[idx] == -1)
        fb[idx[twice]] *= 0.5
        side[idx[mv]] = -1
        mv = ~left & ~exact
        b[idx[mv]] = c[mv]
        fb[idx[mv]] = fc[mv]
        twice = mv & (side[idx] == 1)
        fa[idx[twice]] *= 0.5
        side[idx[mv]] = 1
        a[idx[exact]] = c[exact]
        b[idx[exact]] = c[exact]
        done[idx] = (b[idx] - a[idx]) <= _tolerance(b[idx], tol)
    else:
        raise ZeroFinderError("root refinement did not converge")
    return 0.5 * (a + b)


def refine_zero(bracket, tol=1e-10):
    """Refine one zero of Z inside ``(a, b)``; Z(a) Z(b) < 0 and b - a <= 1."""
    a, b = map(float, bracket)
    if not b > a:
        raise ZeroFinderError(f"degenerate bracket [{a}, {b}]")
    if b - a > 1.0:
        raise ZeroFinderError("bracket wider than 1")
    fa, fb = z_array(np.array([a, b]))
    if fa * fb >= 0.0:
        raise ZeroFinderError(f"no sign change of Z on [{a}, {b}]")
    return float(refine_brackets([a], [b], [fa], [fb], tol=tol)[0])


# Scanning

def _sign_changes(values):
    s = values >= 0.0
    return s[1:] != s[:-1]


def _resolve_block(g_block, z_block, expected, threads):
    """Subdivide a short Gram block until it shows ``expected`` sign changes."""
    widths = np.diff(g_block)
    for m in SUBDIVISIONS:
        frac = np.arange(1, m) / m
        inner = g_block[:-1, None] + widths[:, None] * frac[None, :]
        pts = np.empty((widths.size, m))
        vals = np.empty((widths.size, m))
        pts[:, 0], pts[:, 1:] = g_block[:-1], inner
        vals[:, 0], vals[:, 1:] = z_block[:-1], z_array(inner.ravel(), threads).reshape(inner.shape)
        pts = np.append(pts.ravel(), g_block[-1])
        vals = np.append(vals.ravel(), z_block[-1])
        ch = _sign_changes(vals)
        if ch.sum() >= expected:
            break
    else:
        pts, vals = _probe_dips(pts, vals, threads)
        ch = _sign_changes(vals)
    return pts, vals, ch, m


def _golden_min(f, a, b, iterations=60):
    """Vectorized golden-section minimum of f on each [a, b]."""
    r = 0.5 * (math.sqrt(5.0) - 1.0)
    for _ in range(iterations):
        c = b - r * (b - a)
        d = a + r * (b - a)
        left = f(c) < f(d)
        b = np.where(left, d, b)
        a = np.where(left, a, c)
    x = 0.5 * (a + b)
    return x, f(x)


def _probe_dips(pts, vals, threads):
    """Look inside dips of |Z| that stop short of a sign change.

    Close zero pairs (separation below the sampling step) show up as a
    local minimum of |Z| between samples of one sign.  The extremum of
    sign(Z) * Z on the neighbouring samples is located; if Z crosses zero
    there, the extremum becomes an extra sample point.
    """
    a = np.abs(vals)
    i = np.flatnonzero((a[1:-1] < a[:-2]) & (a[1:-1] < a[2:])) + 1
    i = i[(np.sign(vals[i - 1]) == np.sign(vals[i])) & (np.sign(vals[i + 1]) == np.sign(vals[i]))]
    if i.size == 0:
        return pts, vals
    sgn = np.sign(vals[i])
    x, fx = _golden_min(lambda t: sgn * z_array(t, threads), pts[i - 1], pts[i + 1])
    crossed = fx < 0.0
    if not np.any(crossed):
        return pts, vals
    order = np.argsort(np.concatenate([pts, x[crossed]]), kind="stable")
    new_pts = np.concatenate([pts, x[crossed]])[order]
    new_vals = np.concatenate([vals, sgn[crossed] * fx[crossed]])[order]
    return new_pts, new_vals


def scan_zeros(t_lo: float, t_hi: float, threads: int = 1, tol: float = 1e-10) -> ZeroList:
    """All zeros of Z in ``(t_lo, t_hi]``, refined to ``tol``."""
    if not t_lo >= 10.0:
        raise ValueError("scan_zeros needs t_lo >= 10")
    if t_hi > T_CEILING:
        raise ValueError(f"t_hi above ceiling {T_CEILING:g}")
    if not t_hi > t_lo:
        return ZeroList(np.empty(0), "computed", t_max=float(t_hi), t_min=float(t_lo), tol=tol)

    k_lo = gram_index_below(t_lo)
    k_hi = gram_index_below(t_hi) + 1
    pad = 8
    while True:
        ks = np.arange(max(-1, k_lo - pad), k_hi + pad + 1, dtype=np.int64)
        g, _ = gram_points(ks)
        zg = z_array(g, threads)
        good = np.where(ks % 2 == 0, zg, -zg) > 0.0
        first_ok = np.any(good[ks <= k_lo])
        last_ok = np.any(good[ks >= k_hi])
        if first_ok and last_ok:
            break
        pad *= 2
    good_idx = np.flatnonzero(good)
    start = good_idx[np.searchsorted(good_idx, np.searchsorted(ks, k_lo), side="right") - 1]
    stop = good_idx[np.searchsorted(good_idx, np.searchsorted(ks, k_hi), side="left")]
    ks, g, zg, good = ks[start:stop + 1], g[start:stop + 1], zg[start:stop + 1], good[start:stop + 1]
    good_idx = np.flatnonzero(good)

    changes = _sign_changes(zg)
    # zeros found per block between consecutive good Gram points
    csum = np.concatenate([[0], np.cumsum(changes)])
    found = csum[good_idx[1:]] - csum[good_idx[:-1]]
    expected = np.diff(good_idx)
    resampled = np.zeros(changes.size, dtype=bool)
    extra = []
    diagnostics = []
    for j in np.flatnonzero(found != expected):
        i0, i1 = good_idx[j], good_idx[j + 1]
        if found[j] > expected[j]:
            diagnostics.append(_diag(ks, g, i0, i1, int(expected[j]), int(found[j]), 1, "excess"))
            continue
        resampled[i0:i1] = True
        pts, vals, ch, m = _resolve_block(g[i0:i1 + 1], zg[i0:i1 + 1], int(expected[j]), threads)
        extra.append((pts[:-1][ch], pts[1:][ch], vals[:-1][ch], vals[1:][ch]))
        if ch.sum() != expected[j]:
            diagnostics.append(_diag(ks, g, i0, i1, int(expected[j]), int(ch.sum()), m,
                                     "deficit" if ch.sum() < expected[j] else "excess"))
    coarse = changes & ~resampled
    lefts, rights = [g[:-1][coarse]], [g[1:][coarse]]
    fl, fr = [zg[:-1][coarse]], [zg[1:][coarse]]
    for pa, pb, va, vb in extra:
        lefts.append(pa)
        rights.append(pb)
        fl.append(va)
        fr.append(vb)
    a = np.concatenate(lefts)
    b = np.concatenate(rights)
    fa = np.concatenate(fl)
    fb = np.concatenate(fr)
    order = np.argsort(a, kind="stable")
    a, b, fa, fb = a[order], b[order], fa[order], fb[order]
    gammas = refine_brackets(a, b, fa, fb, tol=tol, threads=threads) if a.size else np.empty(0)
    gammas = gammas[(gammas > t_lo) & (gammas <= t_hi)]
    return ZeroList(gammas, "computed", t_max=float(t_hi), t_min=float(t_lo), tol=tol,
                    diagnostics=diagnostics)


def _diag(ks, g, i0, i1, expected, found, m, kind):
    return {
        "kind": kind,
        "k_start": int(ks[i0]),
        "k_end": int(ks[i1]),
        "t_start": float(g[i0]),
        "t_end": float(g[i1]),
        "expected": expected,
        "found": found,
        "subdivision": m,
    }


def zero_count_check(T: float, zeros: ZeroList):
    """``(predicted, counted, s_estimate)`` with predicted = theta(T)/pi + 1."""
    if T < 10.0:
        raise ValueError("zero_count_check needs T >= 10")
    if not zeros.covers(T):
        raise ZeroFinderError(f"zero list does not cover (0, {T}]")
    predicted = float(theta_array(np.array([float(T)]))[0] / math.pi + 1.0)
    counted = zeros.count_up_to(T)
    return predicted, counted, counted - predicted


# Zero tables and cache

def import_zeros(path, spot_checks: int = 1000) -> ZeroList:
    """Read an Odlyzko-style table: one ordinate per line, optional index column."""
    values = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts or parts[0].startswith("#"):
                continue
            if len(parts) > 2:
                raise ZeroFileError(f"expected 1 or 2 columns, got {len(parts)}", lineno)
            try:
                value = float(parts[-1])
            except ValueError:
                raise ZeroFileError(f"cannot parse {parts[-1]!r}", lineno) from None
            if not math.isfinite(value) or value <= 0.0:
                raise ZeroFileError(f"invalid ordinate {parts[-1]!r}", lineno)
            if values and value <= values[-1][0]:
                raise ZeroFileError(
                    f"ordinates not increasing ({value!r} after {values[-1][0]!r})", lineno)
            values.append((value, lineno))
    gammas = np.array([v for v, _ in values], dtype=float)
    if gammas.size == 0:
        return ZeroList(gammas, "imported", t_max=0.0, t_min=0.0)
    if gammas.max() > T_CEILING:
        raise ZeroFileError(f"ordinates above height ceiling {T_CEILING:g}")
    t_min = 0.0 if gammas[0] < FIRST_ZERO + 1e-3 else float(gammas[0])
    zeros = ZeroList(gammas, "imported", t_max=float(gammas[-1]), t_min=t_min)
    if spot_checks:
        idx = np.unique(np.linspace(0, gammas.size - 1, min(spot_checks, gammas.size)).astype(int))
        worst = np.abs(z_array(gammas[idx]))
        bad = int(np.count_nonzero(worst > 1e-3))
        if bad:
            warnings.warn(f"{bad} of {idx.size} sampled ordinates have |Z| > 1e-3", stacklevel=2)
    return zeros


def write_cache(path, zeros: ZeroList):
    gammas = np.ascontiguousarray(zeros.gammas, dtype="<f8")
    if gammas.size >= 2**32:
        raise ValueError("too many zeros for cache header")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(CACHE_MAGIC, gammas.size, float(zeros.t_max)))
        fh.write(gammas.tobytes())


def read_cache(path) -> ZeroList:
    """Load a ``ZGL1`` cache.  The list is assumed to start at the first zero."""
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise ZeroFileError("cache file too short for header")
    magic, count, t_max = _HEADER.unpack_from(data)
    if magic != CACHE_MAGIC:
        raise ZeroFileError(f"bad cache magic {magic!r}")
    payload = len(data) - _HEADER.size
    if payload != 8 * count:
        raise ZeroFileError(f"header count {count} disagrees with payload of {payload} bytes")
    gammas = np.frombuffer(data, dtype="<f8", offset=_HEADER.size).astype(float)
    if gammas.size > 1 and np.any(np.diff(gammas) <= 0.0):
        raise ZeroFileError("cache ordinates not increasing")
    return ZeroList(gammas, "imported", t_max=float(t_max), t_min=0.0)


def export_csv(path, zeros: ZeroList):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["index", "gamma"])
        for i, g in enumerate(zeros.gammas.tolist(), start=1):
            w.writerow([i, repr(g)])


def compute_zeros(t_max: float, threads: int = 1, block: float = 2.0e5) -> ZeroList:
    """All zeros in (0, t_max], scanned in height blocks and merged in order."""
    if t_max < 10.0:
        return ZeroList(np.empty(0), "computed", t_max=float(t_max), t_min=0.0)
    edges = [10.0]
    while edges[-1] < t_max:
        nxt = edges[-1] + block
        if nxt >= t_max:
            edges.append(float(t_max))
            break
        # put the seam where |Z| peaks so no zero sits on it
        probe = nxt + np.linspace(-0.5, 0.5, 101)
        edges.append(float(probe[np.argmax(np.abs(z_array(probe)))]))
    parts, diags = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        zl = scan_zeros(lo, hi, threads=threads)
        parts.append(zl.gammas)
        diags.extend(zl.diagnostics)
    gammas = np.concatenate(parts) if parts else np.empty(0)
    return ZeroList(gammas, "computed", t_max=float(t_max), t_min=0.0, tol=1e-10, diagnostics=diags)


def dense_grid_zeros(t_lo: float, t_hi: float, step: float = 0.01, iterations: int = 60):
    """Reference zeros: sign changes of Z on a uniform grid, then plain bisection.

    Independent of the Gram-point bookkeeping and of the Illinois refiner;
    slow and blind to pairs closer than ``step``, so only for checking.
    """
    n = int(math.ceil((t_hi - t_lo) / step))
    grid = t_lo + step * np.arange(n + 1)
    vals = z_array(grid)
    idx = np.flatnonzero(_sign_changes(vals))
    a, b = grid[idx].copy(), grid[idx + 1].copy()
    fa = vals[idx].copy()
    for _ in range(iterations):
        m = 0.5 * (a + b)
        fm = z_array(m)
        same = np.sign(fm) == np.sign(fa)
        a[same], fa[same] = m[same], fm[same]
        b[~same] = m[~same]
    return 0.5 * (a + b)
