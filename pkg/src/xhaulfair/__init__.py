"""Min-max fair x-haul and DU/CU resource allocation for multi-tenant O-RAN
over TWDM-PON, with a greedy heuristic, an exact oracle, and a uniform
cost-sharing baseline."""

from .core import (
    Assignment,
    AllocationReport,
    CloudKind,
    CloudNode,
    CostModel,
    FeasibilityReport,
    RuNode,
    TrafficClass,
    check_feasible,
    cost_vector,
    objective,
)
from .radio import (
    BurstModel,
    CalibratedProfile,
    RadioConfig,
    SplitOption,
    SplitVariant,
    datarate_split72,
    datarate_split73,
    effective_throughput,
    frames_per_burst,
    profile_2x2_50mhz,
    split_processing,
    total_processing_gops,
)
from .scenario import (
    Scenario,
    apply_load,
    build_paper_scenario,
    load_scenario,
    random_scenario,
    save_scenario,
)
from .solvers import (
    ExactAllocator,
    MinMaxHeuristicAllocator,
    SolverResult,
    UniformBaselineAllocator,
    mix_by_ownership,
    solve_baseline_uniform,
    solve_exact,
    solve_heuristic,
)
from .sweep import SweepSpec, run_sweep, write_sweep_csv
from .topology import (
    ConfigurationError,
    Point2D,
    Reachability,
    Route,
    SplitterTree,
    compute_reachability,
    fiber_distance,
    place_splitters,
)

__version__ = "0.1.0"

__all__ = [
    "Assignment", "AllocationReport", "BurstModel", "CalibratedProfile",
    "CloudKind", "CloudNode", "ConfigurationError", "CostModel",
    "ExactAllocator", "FeasibilityReport", "MinMaxHeuristicAllocator",
    "Point2D", "RadioConfig", "Reachability", "Route", "RuNode", "Scenario",
    "SolverResult", "SplitOption", "SplitterTree", "SplitVariant", "SweepSpec",
    "TrafficClass", "UniformBaselineAllocator", "apply_load",
    "build_paper_scenario", "check_feasible", "compute_reachability",
    "cost_vector", "datarate_split72", "datarate_split73",
    "effective_throughput", "fiber_distance", "frames_per_burst",
    "load_scenario", "mix_by_ownership", "objective", "place_splitters",
    "profile_2x2_50mhz", "random_scenario", "run_sweep", "save_scenario",
    "solve_baseline_uniform", "solve_exact", "solve_heuristic",
    "split_processing", "total_processing_gops", "write_sweep_csv",
]
