"""Regenerate ``src/zetaweyl/_rs_coeffs.py``.

Taylor coefficients (in z = p - 1/2) of the Riemann-Siegel correction
terms C0..C4, obtained from the expansion of
Psi(p) = cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p) at 50 digits.

    python tools/gen_rs_coeffs.py > src/zetaweyl/_rs_coeffs.py
"""
import mpmath as mp

mp.mp.dps = 60
ORDER = 90
CUTOFF = mp.mpf("1e-22")


def psi(p):
    return mp.cos(2 * mp.pi * (p * p - p - mp.mpf(1) / 16)) / mp.cos(2 * mp.pi * p)


def deriv(coeffs, k):
    # coefficients of the k-th derivative of sum c_j z^j
    return [coeffs[j + k] * mp.fac(j + k) / mp.fac(j) for j in range(len(coeffs) - k)]


def combine(terms, n):
    out = [mp.mpf(0)] * n
    for weight, series in terms:
        for j in range(min(n, len(series))):
            out[j] += weight * series[j]
    return out


def main():
    # Taylor series of Psi around p = 1/2: the removable singularities at
    # p = 1/4, 3/4 sit inside |z| < 1/2 so evaluate by Cauchy integral on
    # a circle of radius 2 (Psi is entire).
    base = mp.taylor(psi, mp.mpf(1) / 2, ORDER, method="quad", radius=2)
    pi = mp.pi
    d = lambda k: deriv(base, k)
    n = ORDER - 12
    series = [
        combine([(1, d(0))], n),
        combine([(-1 / (96 * pi**2), d(3))], n),
        combine([(1 / (64 * pi**2), d(2)), (1 / (18432 * pi**4), d(6))], n),
        combine([(-1 / (64 * pi**2), d(1)), (-1 / (3840 * pi**4), d(5)),
                 (-1 / (5308416 * pi**6), d(9))], n),
        combine([(1 / (128 * pi**2), d(0)), (19 / (24576 * pi**4), d(4)),
                 (11 / (5898240 * pi**6), d(8)), (1 / (2038431744 * pi**8), d(12))], n),
    ]
    print('"""Riemann-Siegel correction polynomials, generated by tools/gen_rs_coeffs.py.')
    print()
    print("RS_COEFFS[k][j] multiplies (p - 1/2)**j in C_k(p). Do not edit by hand.")
    print('"""')
    print()
    print("RS_COEFFS = (")
    for s in series:
        last = max(j for j, c in enumerate(s) if abs(c) * mp.mpf(0.5) ** j > CUTOFF)
        print("    (")
        for c in s[: last + 1]:
            c = 0 if abs(c) < mp.mpf("1e-40") else c
            print(f"        {mp.nstr(c, 20, min_fixed=-1, max_fixed=-1)},")
        print("    ),")
    print(")")


if __name__ == "__main__":
    main()
