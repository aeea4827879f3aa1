"""Two-sided entropy bounds for the binomial distribution function.

``C(k) <= P{X <= k} <= C(k+1)`` for every ``n``, ``p`` and ``0 <= k <= n-1``,
with quantile bracketing, a sharper upper bound and an exact oracle to check
all of it against.
"""

from .bounds import (
    BinomialParams,
    BoundPair,
    QuantileBracket,
    bracket_quantile,
    c_bound,
    c_bound_pair,
    c_bound_sf,
    cdf_bounds,
    complement_bound,
    log_c_bound,
    log_c_bound_sf,
    signed_root,
)
from .entropy import a_function, b_function, entropy_curvature, relative_entropy
from .exceptions import CapacityError, ConvergenceError, DomainError, RootBracketError
from .oracle import (
    EXACT_LIMIT,
    ExactProb,
    as_rational,
    cdf_beta,
    exact_cdf,
    exact_cdf_table,
    exact_pmf,
    log_cdf_beta,
    log_pmf,
    log_sf_beta,
    sf_beta,
)
from .refine import (
    DeltaBound,
    RefineContext,
    delta_numeric,
    delta_refined_bound,
    find_p0,
    g_function,
    refined_upper,
)
from .special import (
    log_std_normal_cdf,
    std_normal_cdf,
    std_normal_pdf,
    std_normal_quantile,
    std_normal_sf,
    stirling_correction,
    stirling_remainder,
)
from .verify import SweepReport, check_pair, check_quantile, run_sweep

__version__ = "0.1.0"

__all__ = [
    "BinomialParams",
    "BoundPair",
    "QuantileBracket",
    "bracket_quantile",
    "c_bound",
    "c_bound_pair",
    "c_bound_sf",
    "cdf_bounds",
    "complement_bound",
    "log_c_bound",
    "log_c_bound_sf",
    "signed_root",
    "a_function",
    "b_function",
    "entropy_curvature",
    "relative_entropy",
    "CapacityError",
    "ConvergenceError",
    "DomainError",
    "RootBracketError",
    "EXACT_LIMIT",
    "ExactProb",
    "as_rational",
    "cdf_beta",
    "exact_cdf",
    "exact_cdf_table",
    "exact_pmf",
    "log_cdf_beta",
    "log_pmf",
    "log_sf_beta",
    "sf_beta",
    "DeltaBound",
    "RefineContext",
    "delta_numeric",
    "delta_refined_bound",
    "find_p0",
    "g_function",
    "refined_upper",
    "log_std_normal_cdf",
    "std_normal_cdf",
    "std_normal_pdf",
    "std_normal_quantile",
    "std_normal_sf",
    "stirling_correction",
    "stirling_remainder",
    "SweepReport",
    "check_pair",
    "check_quantile",
    "run_sweep",
]
