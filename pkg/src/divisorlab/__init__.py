"""Numerics for divisor-sum error terms.

The package computes k-fold divisor counts d_k(n) by sieve, the
summatory functions and their main-term polynomials, the oscillating
error Delta_k, its truncated cosine expansion, power moments over long
and short intervals, near-cancelling root-sum counts, and extreme-value
scans, plus a deterministic experiment runner with cached tables.
"""

from .cache import CacheHandle, cache_table, load_table, write_table
from .config import EXPERIMENTS, ExperimentConfig
from .counting import (
    BoundReport,
    CountResult,
    bound_report,
    count_2l_naive,
    count_2l_tuples,
    count_quadruples,
    ordered_diagonal_count,
)
from .delta import DeltaEvaluator, delta_k
from .divisor_core import DivisorTable, safe_floor, sieve_dk, summatory_dk
from .errors import (
    CacheCorruptionError,
    ConfigError,
    DivisorLabError,
    DomainError,
    InsufficientDataError,
    OverflowCheckError,
    ResourceBudgetError,
    UnsupportedMethodError,
    ValidationError,
)
from .main_term import MainTermPolynomial, main_term_coeffs, residue_main_term_coeffs
from .moments import (
    FitResult,
    HuxleyReport,
    MomentResult,
    fit_moment_constant,
    huxley_bound_check,
    interval_average,
    mean_square_constant,
    moment_integral,
    short_interval_fourth_moment,
)
from .omega import (
    ExtremaRecord,
    ScanResult,
    estimate_alpha,
    g2_threshold_literal,
    gk_threshold,
    scan_extrema,
    shiu_check,
    shiu_sweep,
)
from .runner import RunArtifacts, run_experiment
from .voronoi import (
    ErrorProfile,
    VoronoiSeries,
    truncated_voronoi,
    truncated_voronoi_many,
    truncation_error_profile,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "CacheCorruptionError",
    "CacheHandle",
    "ConfigError",
    "CountResult",
    "DeltaEvaluator",
    "DivisorLabError",
    "DivisorTable",
    "DomainError",
    "EXPERIMENTS",
    "ErrorProfile",
    "ExperimentConfig",
    "ExtremaRecord",
    "FitResult",
    "HuxleyReport",
    "InsufficientDataError",
    "MainTermPolynomial",
    "MomentResult",
    "OverflowCheckError",
    "ResourceBudgetError",
    "RunArtifacts",
    "ScanResult",
    "UnsupportedMethodError",
    "ValidationError",
    "VoronoiSeries",
    "bound_report",
    "cache_table",
    "count_2l_naive",
    "count_2l_tuples",
    "count_quadruples",
    "delta_k",
    "estimate_alpha",
    "fit_moment_constant",
    "g2_threshold_literal",
    "gk_threshold",
    "huxley_bound_check",
    "interval_average",
    "load_table",
    "main_term_coeffs",
    "mean_square_constant",
    "moment_integral",
    "ordered_diagonal_count",
    "residue_main_term_coeffs",
    "run_experiment",
    "safe_floor",
    "scan_extrema",
    "shiu_check",
    "shiu_sweep",
    "short_interval_fourth_moment",
    "sieve_dk",
    "summatory_dk",
    "truncated_voronoi",
    "truncated_voronoi_many",
    "truncation_error_profile",
    "write_table",
]
