"""Time the compiled and numpy kernels on the same inputs.

    python benchmarks/bench_kernels.py [--n 200000] [--repeat 3]

Prints one line per (kernel, backend) with the best wall time and reports
how far apart the two backends are (an ulp on rare inputs, from the
different log implementations).
"""

import argparse
import time

import numpy as np

from zetaweyl import backend


def _best(func, arg, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = func(arg)
        best = min(best, time.perf_counter() - t0)
    return best, out


def _flat(out):
    if isinstance(out, tuple):
        return np.concatenate([np.asarray(o, dtype=float).ravel() for o in out])
    return np.asarray(out, dtype=float)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--t-lo", type=float, default=1e3)
    ap.add_argument("--t-hi", type=float, default=1e6)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(1)
    t = np.sort(rng.uniform(args.t_lo, args.t_hi, args.n))
    names = backend.available()
    print(f"backends: {', '.join(names)}  n={args.n}  t in [{args.t_lo:g}, {args.t_hi:g}]")
    if "cython" not in names:
        print("compiled extension not built; only the numpy timings are shown")

    previous = backend.name()
    try:
        for kernel in ("theta_dd", "theta_deriv_asym", "z_rs"):
            times, outs = {}, {}
            for b in names:
                backend.set_backend(b)
                func = getattr(backend.kernels(), kernel)
                times[b], outs[b] = _best(func, t, args.repeat)
                print(f"{kernel:18s} {b:7s} {times[b] * 1e3:10.1f} ms  "
                      f"{args.n / times[b] / 1e6:8.2f} Mpts/s")
            if len(names) == 2:
                a, b = _flat(outs["cython"]), _flat(outs["numpy"])
                print(f"{kernel:18s} speedup {times['numpy'] / times['cython']:6.2f}x  "
                      f"max|diff|={np.max(np.abs(a - b)):.2e}  equal={np.mean(a == b):.4%}")
    finally:
        backend.set_backend(previous)


if __name__ == "__main__":
    main()
