"""Exact re-observation estimators for species sampling under Gibbs priors.

Given an initial sample (n observations, j species) and a future sample of
size m, this package computes falling factorial moments, and the implied
distributions, of the number of initially seen species that are re-observed
(exactly l times, or at least once), under complete or incomplete knowledge
of the initial multiplicities.  All closed forms are cross-checked against
exhaustive enumeration and Monte Carlo oracles, and every computation runs
either on exact rationals or on signed log-magnitude floats.
"""

from .estimators import (
    TARGET_AT_LEAST_ONCE,
    TARGET_EXACTLY,
    BackwardQuery,
    MomentReport,
    backward_report,
    complete_info_moment,
    future_weight_kernel,
    incomplete_info_moment,
    total_reobserved_moment,
)
from .laws import (
    block_count_pmf,
    conditional_multiplicity_pmf,
    eppf,
    multivariate_gibbs_pmf,
    subset_sum_pmf,
)
from .numerics import (
    EXACT,
    LOG,
    LogScalar,
    PrecisionWarning,
    falling_factorial,
    generalized_rising,
    make_scalar,
    parse_rational,
    rising_factorial,
    to_float,
)
from .oracle import (
    ContinuationOutcome,
    EnumerationSizeError,
    McEstimate,
    enumerate_continuations,
    mc_sample,
    oracle_incomplete_moment,
    oracle_moment,
)
from .priors import (
    GibbsPrior,
    PriorValidationError,
    SampleSummary,
    dirichlet,
    dump_table_csv,
    load_table_csv,
    pitman_yor,
    table_prior,
)
from .stirling import (
    InconsistentMomentsError,
    StirlingTriangle,
    build_triangle,
    generalized_factorial_coefficient,
    moments_to_pmf,
    recombination_coefficients,
    stirling_number,
)

__version__ = "0.1.0"

__all__ = [
    "TARGET_AT_LEAST_ONCE",
    "TARGET_EXACTLY",
    "BackwardQuery",
    "MomentReport",
    "backward_report",
    "complete_info_moment",
    "future_weight_kernel",
    "incomplete_info_moment",
    "total_reobserved_moment",
    "block_count_pmf",
    "conditional_multiplicity_pmf",
    "eppf",
    "multivariate_gibbs_pmf",
    "subset_sum_pmf",
    "EXACT",
    "LOG",
    "LogScalar",
    "PrecisionWarning",
    "falling_factorial",
    "generalized_rising",
    "make_scalar",
    "parse_rational",
    "rising_factorial",
    "to_float",
    "ContinuationOutcome",
    "EnumerationSizeError",
    "McEstimate",
    "enumerate_continuations",
    "mc_sample",
    "oracle_incomplete_moment",
    "oracle_moment",
    "GibbsPrior",
    "PriorValidationError",
    "SampleSummary",
    "dirichlet",
    "dump_table_csv",
    "load_table_csv",
    "pitman_yor",
    "table_prior",
    "InconsistentMomentsError",
    "StirlingTriangle",
    "build_triangle",
    "generalized_factorial_coefficient",
    "moments_to_pmf",
    "recombination_coefficients",
    "stirling_number",
    "__version__",
]
