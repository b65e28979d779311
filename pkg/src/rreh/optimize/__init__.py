from rreh.optimize.annex import AnnexError, DemandSpec, StorageSpec, TechEcon, TechnoEconomics, load_annex, parse_annex
from rreh.optimize.problem import (
    ProblemError,
    SizingLP,
    SizingProblem,
    UnreachableDemand,
    build_lp,
    make_problem,
    profile_ids,
)
from rreh.optimize.profiles import Profile, ProfileError, resolve_profiles, synthetic_profile
from rreh.optimize.report import SIZING_SCHEMA, NotOptimal, cost_drivers, report, utilization
from rreh.optimize.simplex import (
    LinearProgram,
    LPResult,
    NumericalBreakdown,
    Status,
    Tolerances,
    presolve,
    solve_lp,
    verify_farkas,
    verify_ray,
)
from rreh.optimize.solution import SizingSolution, check_solution, solve

__all__ = [
    "AnnexError",
    "DemandSpec",
    "LPResult",
    "LinearProgram",
    "NotOptimal",
    "NumericalBreakdown",
    "ProblemError",
    "Profile",
    "ProfileError",
    "SIZING_SCHEMA",
    "SizingLP",
    "SizingProblem",
    "SizingSolution",
    "Status",
    "StorageSpec",
    "TechEcon",
    "TechnoEconomics",
    "Tolerances",
    "UnreachableDemand",
    "build_lp",
    "check_solution",
    "cost_drivers",
    "load_annex",
    "make_problem",
    "parse_annex",
    "presolve",
    "profile_ids",
    "report",
    "resolve_profiles",
    "solve",
    "solve_lp",
    "synthetic_profile",
    "utilization",
    "verify_farkas",
    "verify_ray",
]
