"""zetaweyl command line.

Every sub-command prints a JSON summary on stdout.  Exit status is 0 on
success, 1 on a usage or validation error, 2 when a numerical check fails
(unresolved zero blocks, violated oracle bounds).
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import arith, oracle, report, stats, weyl
from . import zero_finder as zf
from .rs_core import T_CEILING

COMMANDS = ("zeros", "gram", "import", "weyl", "prime-sum", "verify", "hist",
            "discrepancy", "spacings", "gramz", "oracle")
FORMATS = ("csv", "json", "svg")
DEFAULT_T_MAX = 1000.0
DEFAULT_BINS = 50
DEFAULT_GRAM_COUNT = 100_000


class UsageError(Exception):
    """Bad configuration; reported as a one-line message with exit 1."""


class CheckFailed(Exception):
    """A numerical check did not pass; exit 2, summary still printed."""

    def __init__(self, message, summary):
        super().__init__(message)
        self.summary = summary


@dataclass
class RunConfig:
    command: str
    t_max: float = DEFAULT_T_MAX
    kappa: list = field(default_factory=lambda: [1.0])
    bins: int = DEFAULT_BINS
    input_path: str | None = None
    output_path: str | None = None
    cache_path: str | None = None
    threads: int = 1
    format: str = "json"
    count: int = DEFAULT_GRAM_COUNT
    t_max_given: bool = True

    def validate(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}; choose one of {', '.join(COMMANDS)}")
        if not (0.0 < self.t_max <= T_CEILING):
            raise UsageError(f"--t-max must lie in (0, {T_CEILING:g}]")
        if self.threads < 1:
            raise UsageError("--threads must be >= 1")
        if self.format not in FORMATS:
            raise UsageError(f"--format must be one of {', '.join(FORMATS)}")
        for k in self.kappa:
            if k < 0 or (k == 0 and self.command != "weyl"):
                raise UsageError("--kappa entries must be > 0 (kappa=0 only for weyl)")
        if not 2 <= self.bins <= stats.MAX_BINS:
            raise UsageError(f"--bins must lie in [2, {stats.MAX_BINS}]")
        return self


def parse_kappa(text) -> float:
    """Decimal or rational p/q."""
    try:
        return float(Fraction(str(text).strip()))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"cannot parse kappa {text!r}; use a decimal or p/q") from None


_CONFIG_KEYS = {"t_max", "kappa", "bins", "input", "output", "cache", "threads", "format", "count"}


def read_config(path):
    """key=value lines; '#' comments; repeated kappa keys accumulate."""
    out = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
    for no, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{no}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _CONFIG_KEYS:
            raise UsageError(f"{path}:{no}: unknown key {key!r}")
        if key == "kappa":
            out.setdefault("kappa", []).extend(v for v in value.split(",") if v.strip())
        else:
            out[key] = value
    return out


def build_parser():
    p = argparse.ArgumentParser(prog="zetaweyl", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--t-max", dest="t_max", type=float)
    p.add_argument("--kappa", action="append", help="repeatable; decimal or p/q")
    p.add_argument("--bins", type=int)
    p.add_argument("--input")
    p.add_argument("--output")
    p.add_argument("--cache", help="zero cache (default: $ZGL_CACHE)")
    p.add_argument("--threads", type=int)
    p.add_argument("--format", choices=FORMATS)
    p.add_argument("--count", type=int, help="number of Gram points for gramz")
    p.add_argument("--config", help="key=value file; flags take precedence")
    return p


def config_from_args(argv=None) -> RunConfig:
    parser = build_parser()
    ns = parser.parse_args(argv)
    conf = read_config(ns.config) if ns.config else {}

    def pick(name, conv, default):
        flag = getattr(ns, name)
        if flag is not None:
            return flag
        if name in conf:
            try:
                return conv(conf[name])
            except ValueError:
                raise UsageError(f"config value for {name} is invalid: {conf[name]!r}") from None
        return default

    kappas = ns.kappa if ns.kappa else conf.get("kappa", ["1"])
    cache = pick("cache", str, None) or os.environ.get("ZGL_CACHE") or None
    cfg = RunConfig(
        command=ns.command,
        t_max=pick("t_max", float, DEFAULT_T_MAX),
        kappa=[parse_kappa(k) for k in kappas],
        bins=pick("bins", int, DEFAULT_BINS),
        input_path=pick("input", str, None),
        output_path=pick("output", str, None),
        cache_path=cache,
        threads=pick("threads", int, 1),
        format=pick("format", str, "json"),
        count=pick("count", int, DEFAULT_GRAM_COUNT),
        t_max_given=ns.t_max is not None or "t_max" in conf,
    )
    return cfg.validate()


# zero sources

def load_zeros(cfg: RunConfig, need_t: float | None = None) -> zf.ZeroList:
    """Imported table, else cache, else a fresh scan up to t_max."""
    need_t = cfg.t_max if need_t is None else need_t
    if cfg.input_path:
        zeros = zf.import_zeros(cfg.input_path)
        source = cfg.input_path
    elif cfg.cache_path:
        if not Path(cfg.cache_path).exists():
            raise UsageError(f"missing cache {cfg.cache_path}; create it with "
                             f"`zetaweyl zeros --t-max {need_t:g} --cache {cfg.cache_path}`")
        zeros = zf.read_cache(cfg.cache_path)
        source = cfg.cache_path
    else:
        return zf.compute_zeros(need_t, threads=cfg.threads)
    if need_t > 0 and not zeros.covers(need_t):
        raise UsageError(f"{source} covers zeros up to t = {zeros.t_max:g}, below the requested "
                         f"{need_t:g}; lower --t-max or extend the table")
    return zeros


def _write(cfg, text):
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


# sub-commands

def cmd_zeros(cfg):
    zeros = zf.compute_zeros(cfg.t_max, threads=cfg.threads)
    if cfg.cache_path:
        zf.write_cache(cfg.cache_path, zeros)
    if cfg.output_path:
        zf.export_csv(cfg.output_path, zeros)
    predicted, counted, s_est = zf.zero_count_check(cfg.t_max, zeros)
    summary = {"command": "zeros", "t_max": cfg.t_max, "count": len(zeros),
               "predicted_count": predicted, "S_estimate": s_est,
               "diagnostics": zeros.diagnostics, "cache": cfg.cache_path}
    if zeros.diagnostics:
        raise CheckFailed(f"{len(zeros.diagnostics)} Gram block(s) short of zeros", summary)
    return summary


def cmd_gram(cfg):
    k_hi = zf.gram_index_below(cfg.t_max)
    table = zf.gram_table(-1, k_hi)
    if cfg.output_path:
        rows = [[str(k), report.fmt(g), report.fmt(r)] for k, g, r in table.entries]
        _write(cfg, report._csv_text(["k", "g", "residual"], rows))
    return {"command": "gram", "t_max": cfg.t_max, "count": len(table),
            "max_residual": float(table.residuals.max()) if len(table) else 0.0}


def cmd_import(cfg):
    if not cfg.input_path:
        raise UsageError("import needs --input FILE")
    zeros = zf.import_zeros(cfg.input_path)
    if cfg.cache_path:
        zf.write_cache(cfg.cache_path, zeros)
    return {"command": "import", "count": len(zeros), "t_min": zeros.t_min,
            "t_max": zeros.t_max, "cache": cfg.cache_path}


def cmd_weyl(cfg):
    zeros = load_zeros(cfg)
    T = cfg.t_max
    rows = []
    for k in cfg.kappa:
        u = weyl.zero_side_sum(zeros, T, k)
        n = zeros.count_up_to(T)
        rows.append({"kappa": k, "N_T": n, "ReU": u.real, "ImU": u.imag,
                     "mean_re": u.real / n, "mean_im": u.imag / n})
    if cfg.output_path:
        sub = zeros.head(zeros.count_up_to(T))
        x, frac = weyl.normalized_array(sub)
        report.write_normalized_zeros(cfg.output_path, sub.gammas, x, frac)
    return {"command": "weyl", "T": T, "sums": rows}


def _sieve_for(cfg):
    cutoff = max(arith.prime_side_cutoff(cfg.t_max, k) for k in cfg.kappa)
    return arith.lambda_sieve(max(cutoff, math.ceil(cfg.t_max / (2 * math.pi)), 2))


def cmd_prime_sum(cfg):
    table = _sieve_for(cfg)
    rows = []
    for k in cfg.kappa:
        ps = arith.prime_side_sum(cfg.t_max, k, table)
        rows.append({"kappa": k, "cutoff": ps.cutoff, "ReP": ps.value.real, "ImP": ps.value.imag})
    return {"command": "prime-sum", "T": cfg.t_max, "sums": rows}


def cmd_verify(cfg):
    zeros = load_zeros(cfg)
    table = _sieve_for(cfg)
    reps = [weyl.main_theorem_report(zeros, table, cfg.t_max, k) for k in cfg.kappa]
    if cfg.output_path:
        _write(cfg, report.render(reps, "csv" if cfg.format != "json" else "json"))
    psi = arith.chebyshev_psi(cfg.t_max / (2 * math.pi), table)
    out = []
    for r in reps:
        d = report.weyl_summary(r)
        d["psi"] = psi
        out.append(d)
    return {"command": "verify", "T": cfg.t_max, "psi_T_over_2pi": psi, "reports": out}


def _fracs(cfg):
    if (cfg.input_path or cfg.cache_path) and not cfg.t_max_given:
        # statistics over a whole table unless a height is asked for
        zeros = load_zeros(cfg, need_t=0.0)
    else:
        zeros = load_zeros(cfg)
        zeros = zeros.head(zeros.count_up_to(cfg.t_max))
    _, frac = weyl.normalized_array(zeros)
    return zeros, frac


def cmd_hist(cfg):
    zeros, frac = _fracs(cfg)
    h = stats.histogram_mod1(frac, cfg.bins)
    fit = stats.fit_cosine_density(h) if h.total >= stats.MIN_FIT_TOTAL else None
    if cfg.output_path:
        report.emit_report(h, cfg.format, cfg.output_path, fit)
    summary = report.histogram_summary(h, fit, stats.star_discrepancy(frac))
    summary["command"] = "hist"
    return summary


def cmd_discrepancy(cfg):
    zeros, frac = _fracs(cfg)
    d = stats.star_discrepancy(frac)
    m = stats.first_moment(frac)
    bound = 2 * math.pi * d + 4.0 / frac.size
    summary = {"command": "discrepancy", "N": int(frac.size), "Dstar": d,
               "mean_re": m.real, "mean_im": m.imag, "koksma_bound": bound}
    if abs(m) > bound:
        raise CheckFailed("first moment exceeds the discrepancy bound", summary)
    return summary


def cmd_spacings(cfg):
    zeros, _ = _fracs(cfg)
    s = stats.spacings(zeros)
    if cfg.output_path:
        rows = ([str(i), report.fmt(d), report.fmt(e)]
                for i, (d, e) in enumerate(zip(s.deltas.tolist(), s.exact.tolist()), 1))
        _write(cfg, report._csv_text(["n", "delta", "exact"], rows))
    return {"command": "spacings", "N": len(zeros), "mean_exact": s.mean_exact,
            "max_abs_diff": s.max_abs_diff, "min_exact": float(s.exact.min())}


def cmd_gramz(cfg):
    even, odd = stats.gram_z_means(cfg.count, threads=cfg.threads)
    return {"command": "gramz", "M": cfg.count, "even_mean": even, "odd_mean": odd}


def cmd_oracle(cfg):
    sp = oracle.stationary_phase_sweep()
    split = oracle.split_interval_grid()
    deriv = oracle.derivative_case_grid()
    chi = [oracle.check_chi_asymptotic(s, t, k) for s in (-1.0, 0.5, 1.0, 1.5)
           for t in (1e2, 1e3, 1e4) for k in cfg.kappa]
    if cfg.output_path:
        _write(cfg, report.render(sp + split + deriv, "json"))
    c_sp = max(c.extra["scaled_residual"] for c in sp)
    summary = {"command": "oracle", "stationary_phase_C": c_sp,
               "split_interval_C": max(c.extra["ratio"] for c in split),
               "derivative_cases": len(deriv),
               "derivative_violations": sum(not c.passed for c in deriv),
               "chi_C": max(r["C"] for r in chi)}
    if summary["derivative_violations"] or c_sp >= 5.0:
        raise CheckFailed("oracle bound violated", summary)
    return summary


HANDLERS = {"zeros": cmd_zeros, "gram": cmd_gram, "import": cmd_import, "weyl": cmd_weyl,
            "prime-sum": cmd_prime_sum, "verify": cmd_verify, "hist": cmd_hist,
            "discrepancy": cmd_discrepancy, "spacings": cmd_spacings, "gramz": cmd_gramz,
            "oracle": cmd_oracle}


def run(cfg: RunConfig, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        summary = HANDLERS[cfg.command](cfg)
    except CheckFailed as exc:
        exc.summary["error"] = str(exc)
        stdout.write(report.dumps(exc.summary))
        return 2
    except (UsageError, zf.ZeroFinderError, ValueError) as exc:
        print(f"zetaweyl {cfg.command}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"zetaweyl {cfg.command}: {exc}", file=sys.stderr)
        return 1
    stdout.write(report.dumps(summary))
    return 0


def main(argv=None) -> int:
    try:
        cfg = config_from_args(argv)
    except UsageError as exc:
        print(f"zetaweyl: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:
        # argparse exits 2 on unknown flags; usage errors are 1 here
        return 0 if exc.code == 0 else 1
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
