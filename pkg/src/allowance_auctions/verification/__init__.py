"""Certification harness: misreport search, monotonicity sweeps, lemma
Monte Carlo and approximation-ratio benches."""
from .baselines import run_plain_second_price
from .bench import RatioStats, empirical_ratio, ratio_bound
from .deviation import (
    DeviationError,
    DeviationGrid,
    DeviationReport,
    certify_instance,
    deviation_grid,
    deviation_search,
)
from .lemmas import (
    LemmaTrial,
    PreconditionError,
    exact_concentration_matching,
    exact_concentration_sum,
    mc_concentration_matching,
    mc_concentration_sum,
    rank_matching_min_sum,
)
from .monotonicity import (
    MonotonicityVerdict,
    check_allocation_monotonicity,
    check_unit_price_monotonicity,
)

__all__ = [
    "DeviationError", "DeviationGrid", "DeviationReport", "LemmaTrial", "MonotonicityVerdict",
    "PreconditionError", "RatioStats", "certify_instance", "check_allocation_monotonicity",
    "check_unit_price_monotonicity", "deviation_grid", "deviation_search", "empirical_ratio",
    "exact_concentration_matching", "exact_concentration_sum", "mc_concentration_matching",
    "mc_concentration_sum", "rank_matching_min_sum", "ratio_bound", "run_plain_second_price",
]
