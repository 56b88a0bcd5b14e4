"""Sieve functions ``f = g * 1`` in short intervals.

Exact (rational) and float computation of the Selberg and symmetry
integrals, autocorrelations with their main-term/remainder split, the
``W``/``S`` weights and their exponential sums, and residual checks tying
them together.
"""

from .arith import (
    PRESETS,
    GFunction,
    ScaleParams,
    SieveError,
    SieveTable,
    dyadic_sum,
    dyadic_sum_by_divisors,
    make_g,
    mean_value,
    sieve_f,
)
from .correlations import (
    CorrelationTable,
    build_correlation_table,
    correlation_direct,
    correlation_main_term,
    remainder_charsum,
    remainder_congruence,
    remainder_exact,
    weighted_corr_sum,
    weighted_remainder_sum,
)
from .integrals import IntegralResult, quadrature_oracle, selberg_integral, symmetry_integral
from .kernels import KernelSpec, kernel_value
from .verify import (
    ExperimentRecord,
    GridConfig,
    ResidualReport,
    check_lemma1,
    check_lemma2,
    check_theorem_I_rep,
    run_grid,
)

__version__ = "0.1.0"
