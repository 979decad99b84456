"""Bid optimization under broad match: thin wrapper over the C++ core."""

from ._broadbid import (
    BroadbidError,
    Instance,
    SizeLimitError,
    __version__,
    brute_force,
    greedy_margin,
    greedy_rate,
    greedy_trap,
    independent_set,
    integrality_gap,
    keyword_exact,
    lagrangian,
    max_coverage,
    plan,
    rounding_trials,
    run_cli,
    simulation,
    solve_budgeted,
    solve_lp,
    solve_mincut,
)

__all__ = [
    "BroadbidError",
    "Instance",
    "SizeLimitError",
    "__version__",
    "brute_force",
    "greedy_margin",
    "greedy_rate",
    "greedy_trap",
    "independent_set",
    "integrality_gap",
    "keyword_exact",
    "lagrangian",
    "max_coverage",
    "plan",
    "rounding_trials",
    "run_cli",
    "simulation",
    "solve_budgeted",
    "solve_lp",
    "solve_mincut",
]
