"""Min-max routing for heterogeneous multi-depot fleets.

A fleet of vehicles with individual speeds and depots must jointly visit a
set of planar targets, some of which may be pinned to specific vehicles, so
that the longest tour time (the makespan) is as small as possible.  The
package provides a three-stage heuristic, an exhaustive oracle for desk-sized
instances, and a benchmark protocol with CSV reports and SVG tour drawings.
"""

from .allocation import (Allocation, EffectiveDepots, MinCounts,
                         build_initial_solution, min_target_counts,
                         perturb_colocated_depots, solve_load_balancing)
from .bench import (ExperimentConfig, ExperimentReport, ReportRow,
                    generate_instance, read_report, run_experiment, scenario1,
                    scenario2, write_report)
from .heuristic import (InsertionQuote, SavingsEntry, SolverConfig, StageTrace,
                        best_insertion, compute_savings, local_search,
                        perturbation_loop, perturbation_radius, solve)
from .io import (instance_from_json, instance_to_json, load_instance,
                 save_instance)
from .model import (DEPOT, CapacityError, InfeasibleAllocationError, Instance,
                    InvalidInstanceError, NoInsertionCandidateError,
                    OracleBudgetError, Point, Solution, SolverError, Tour,
                    Vehicle, tour_duration, travel_time, validate_solution)
from .oracle import OracleBudget, exact_minmax, oracle_feasible
from .svgplot import render_tours
from .tsp import (EXACT, HEURISTIC, TourRequest, TspCache, held_karp,
                  request_for, solve_tsp, two_opt_improve)

__version__ = "0.1.0"

__all__ = [
    "Allocation", "CapacityError", "DEPOT", "EXACT", "EffectiveDepots",
    "ExperimentConfig", "ExperimentReport", "HEURISTIC",
    "InfeasibleAllocationError", "InsertionQuote", "Instance",
    "InvalidInstanceError", "MinCounts", "NoInsertionCandidateError",
    "OracleBudget", "OracleBudgetError", "Point", "ReportRow", "SavingsEntry",
    "Solution", "SolverConfig", "SolverError", "StageTrace", "Tour",
    "TourRequest", "TspCache", "Vehicle", "best_insertion",
    "build_initial_solution", "compute_savings", "exact_minmax",
    "generate_instance", "held_karp", "instance_from_json", "instance_to_json",
    "load_instance", "local_search", "min_target_counts", "oracle_feasible",
    "perturb_colocated_depots", "perturbation_loop", "perturbation_radius",
    "read_report", "render_tours", "request_for", "run_experiment",
    "save_instance", "scenario1", "scenario2", "solve", "solve_load_balancing",
    "solve_tsp", "tour_duration", "travel_time", "two_opt_improve",
    "validate_solution", "write_report",
]
