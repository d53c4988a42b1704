"""Weyl sums over zeta zeros and their prime-side counterparts.

Submodules:

- ``rs_core``: Riemann-Siegel theta, Hardy Z, complex log-gamma, chi powers
- ``zero_finder``: Gram points, zero scans, zero tables and the ZGL1 cache
- ``arith``: von Mangoldt sieve, psi, prime-side and prime exponential sums
- ``weyl``: normalized zeros, zero-side sums, residual reports
- ``stats``: histogram mod 1, cosine-density fit, discrepancy, spacings
- ``oracle``: oscillatory quadrature checks
- ``cli``: the ``zetaweyl`` command

The hot loops (theta and the Riemann-Siegel main sum) run in a compiled
extension when it is built, and in numpy otherwise; see ``backend``.
"""

from . import backend
from .arith import chebyshev_psi, lambda_sieve, prime_side_sum, ps_prime_exp_sum
from .rs_core import chi_power, log_gamma_complex, theta, z_function
from .stats import fit_cosine_density, gram_z_means, histogram_mod1, spacings, star_discrepancy
from .weyl import main_theorem_report, mean_value, normalized_zeros, zero_side_sum
from .zero_finder import (ZeroList, compute_zeros, gram_point, import_zeros, read_cache,
                          refine_zero, scan_zeros, write_cache)

__version__ = "0.1.0"

__all__ = [
    "backend", "chebyshev_psi", "chi_power", "compute_zeros", "fit_cosine_density",
    "gram_point", "gram_z_means", "histogram_mod1", "import_zeros", "lambda_sieve",
    "log_gamma_complex", "main_theorem_report", "mean_value", "normalized_zeros",
    "prime_side_sum", "ps_prime_exp_sum", "read_cache", "refine_zero", "scan_zeros",
    "spacings", "star_discrepancy", "theta", "write_cache", "z_function", "zero_side_sum",
    "ZeroList",
]
