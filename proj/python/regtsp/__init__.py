"""TSP heuristics and proof diagnostics on regular metric spaces.

Thin wrapper around the compiled ``regtsp._core`` extension. The heavy
lifting (sampling, solvers, geometric checks) lives in C++; this package
re-exports it under a stable name.
"""

from ._core import (  # noqa: F401
    AdversarialResult,
    Ball,
    BallFamily,
    BoundChainReport,
    ClassStat,
    ConfigError,
    DyadicDecomposition,
    FitResult,
    IsolationStats,
    LowerBoundReport,
    PackingReport,
    PackingViolation,
    ParseError,
    PointSet,
    RatioRecord,
    RegularityWitness,
    SelectionTrace,
    SizeLimitError,
    SpaceSpec,
    StarReport,
    StarViolation,
    Tour,
    TraceStep,
    __version__,
    adversarial_search,
    analytic_witness,
    bound_chain,
    brute_force_tour,
    check_packing,
    check_star_property,
    default_witness,
    dyadic_partition,
    estimate_regularity,
    exact_tour_dp,
    extract_ball_family,
    fit_exponent,
    greedy_tour,
    isolation_stats,
    make_space,
    nearest_neighbor_tour,
    points_from_csv,
    ratio_profile,
    sample,
    tour_length,
    two_opt_improve,
    verify_lower_bound,
)

__all__ = [name for name in dir() if not name.startswith("_")]
