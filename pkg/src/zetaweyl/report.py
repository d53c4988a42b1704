"""Deterministic CSV / JSON / SVG emitters.

Every float goes through ``fmt`` (12 significant digits, ``%g`` style), so
identical inputs give byte-identical files on any locale.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, is_dataclass

import numpy as np

from .oracle import OracleCase
from .stats import DensityFit, Histogram
from .weyl import WeylReport

WEYL_HEADER = ["T", "kappa", "ReU", "ImU", "ReP", "ImP", "abs_residual", "normalized_residual"]
HIST_HEADER = ["bin_lo", "bin_hi", "count", "height"]
ZERO_HEADER = ["n", "gamma", "x", "frac"]


def fmt(x) -> str:
    x = float(x)
    if x == 0.0:
        return "0"
    return format(x, ".12g")


def _round(x):
    return float(fmt(x)) if math.isfinite(x) else None


def jsonable(obj):
    """Plain JSON types with floats rounded to 12 significant digits."""
    if isinstance(obj, (bool, type(None), str)):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _round(float(obj))
    if isinstance(obj, complex):
        return {"re": _round(obj.real), "im": _round(obj.imag)}
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if is_dataclass(obj):
        return jsonable(asdict(obj))
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2) + "\n"


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def weyl_rows(reports):
    for r in reports:
        yield [fmt(r.T), fmt(r.kappa), fmt(r.U.real), fmt(r.U.imag), fmt(r.P.real),
               fmt(r.P.imag), fmt(abs(r.residual)), fmt(r.normalized_residual)]


def weyl_summary(r: WeylReport):
    return {"T": r.T, "kappa": r.kappa, "N_T": r.N_T, "ReU": r.U.real, "ImU": r.U.imag,
            "ReP": r.P.real, "ImP": r.P.imag, "abs_residual": abs(r.residual),
            "bound_exponent": r.bound_exponent, "normalized_residual": r.normalized_residual}


def histogram_rows(h: Histogram):
    edges = h.edges
    for b in range(h.bins):
        yield [fmt(edges[b]), fmt(edges[b + 1]), str(int(h.counts[b])), fmt(h.heights[b])]


def histogram_svg(h: Histogram, fit: DensityFit | None = None, width=640, height=400) -> str:
    """Bar chart of bin heights with the fitted 1 - c cos(2 pi x) curve."""
    pad = 40
    top = max(1.5, float(np.max(h.heights)) * 1.1 if h.total else 1.5)
    sx = (width - 2 * pad)
    sy = (height - 2 * pad) / top

    def px(x):
        return pad + x * sx

    def py(y):
        return height - pad - y * sy

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}">',
           f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>']
    bw = sx / h.bins
    for b, y in enumerate(h.heights):
        out.append(f'<rect x="{fmt(px(b / h.bins))}" y="{fmt(py(y))}" width="{fmt(bw)}" '
                   f'height="{fmt(y * sy)}" fill="#8aa8c8" stroke="#4a6888" stroke-width="0.5"/>')
    out.append(f'<line x1="{pad}" y1="{fmt(py(1.0))}" x2="{width - pad}" y2="{fmt(py(1.0))}" '
               'stroke="#999" stroke-dasharray="4 3"/>')
    if fit is not None:
        xs = np.linspace(0.0, 1.0, 201)
        pts = " ".join(f"{fmt(px(x))},{fmt(py(y))}" for x, y in zip(xs, fit.density(xs)))
        out.append(f'<polyline points="{pts}" fill="none" stroke="#c0392b" stroke-width="2"/>')
        out.append(f'<text x="{pad}" y="{pad - 12}" font-family="sans-serif" font-size="14">'
                   f'1 - {fmt(round(fit.c, 4))} cos(2 pi x), N = {h.total}, B = {h.bins}</text>')
    out.append(f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>')
    out.append(f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>')
    for x in (0.0, 0.5, 1.0):
        out.append(f'<text x="{fmt(px(x))}" y="{height - pad + 16}" font-family="sans-serif" '
                   f'font-size="12" text-anchor="middle">{fmt(x)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def histogram_summary(h: Histogram, fit: DensityFit | None, dstar=None):
    out = {"N": h.total, "B": h.bins}
    if fit is not None:
        out["c"] = fit.c
        out["rss"] = fit.rss
    if dstar is not None:
        out["Dstar"] = dstar
    return out


def render(report, format: str, fit: DensityFit | None = None) -> str:
    """Text of ``report`` (WeylReport, list of them, Histogram or OracleCase list)."""
    if isinstance(report, WeylReport):
        report = [report]
    if isinstance(report, OracleCase):
        report = [report]
    if isinstance(report, Histogram):
        if format == "csv":
            return _csv_text(HIST_HEADER, histogram_rows(report))
        if format == "svg":
            return histogram_svg(report, fit)
        if format == "json":
            return dumps(histogram_summary(report, fit))
    elif isinstance(report, list) and report and all(isinstance(r, WeylReport) for r in report):
        if format == "csv":
            return _csv_text(WEYL_HEADER, weyl_rows(report))
        if format == "json":
            return dumps([weyl_summary(r) for r in report])
    elif isinstance(report, list) and report and all(isinstance(r, OracleCase) for r in report):
        if format == "json":
            return dumps([r.as_dict() for r in report])
        if format == "csv":
            rows = [[r.kind, dumps(r.params).replace("\n", "").replace("  ", ""), fmt(r.quad_value.real),
                     fmt(r.quad_value.imag), fmt(r.err_est), fmt(r.residual)] for r in report]
            return _csv_text(["kind", "params", "quad_re", "quad_im", "err_est", "residual"], rows)
    else:
        raise TypeError(f"cannot emit {type(report).__name__}")
    raise ValueError(f"format {format!r} not supported for {type(report).__name__}")


def emit_report(report, format: str, path, fit: DensityFit | None = None):
    text = render(report, format, fit)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path


def normalized_zero_rows(gammas, x, frac, start=1):
    for i, (g, a, f) in enumerate(zip(gammas.tolist(), x.tolist(), frac.tolist()), start):
        yield [str(i), fmt(g), fmt(a), fmt(f)]


def write_normalized_zeros(path, gammas, x, frac):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(ZERO_HEADER)
        w.writerows(normalized_zero_rows(gammas, x, frac))
    return path
