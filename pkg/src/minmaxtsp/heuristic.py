"""Three-stage min-max routing heuristic.

Stage 1 builds a starting plan by load-balanced allocation plus per-vehicle
tours.  Stage 2 repeatedly offloads targets from the longest tour: candidates
are ranked by the time saved on the donor, each is quoted a cheapest insertion
over the other vehicles, donor and receiver are re-routed, and the move sticks
only if the fleet makespan strictly drops.  Stage 3 escapes local optima by
displacing depots (radially, by half the sum of each tour's two depot-edge
times) and re-optimizing on the displaced geometry; a plan rebuilt at the true
depots is accepted only when strictly better, and the loop gives up after five
straight rejections.  Displacement angles march around the circle in 144-degree
steps from a random start, so five steps revisit the starting angle.
"""

import math
import time
from dataclasses import dataclass

import numpy as np

from .allocation import (Allocation, build_initial_solution, min_target_counts,
                         perturb_colocated_depots, solve_load_balancing)
from .model import (Instance, NoInsertionCandidateError, Point, Solution,
                    validate_solution)
from .tsp import EXACT_CAP_DEFAULT, HEURISTIC, TspCache, request_for, solve_tsp

# One step of the depot displacement angle schedule: 144 degrees.
PERTURBATION_STEP = 0.8 * math.pi

STAGE_INIT = "init"
STAGE_LOCAL_SEARCH = "local_search"
STAGE_PERTURBATION = "perturbation"


@dataclass
class SolverConfig:
    tour_mode: str = HEURISTIC
    exact_cap: int = EXACT_CAP_DEFAULT
    allocation_method: str = "exact"
    no_improve_stop: int = 5
    # r_j is a travel time; by default it is applied directly as a displacement
    # length.  Set this to recover a pure distance (r_j times the speed).
    scale_radius_by_speed: bool = False


@dataclass(frozen=True)
class SavingsEntry:
    """Donor-side value of removing one target from a tour."""

    target: int
    value: float


@dataclass(frozen=True)
class InsertionQuote:
    """Cheapest placement of a target on some other vehicle's tour."""

    vehicle_id: int
    edge_position: int
    delta: float


@dataclass
class StageTrace:
    """Objectives, iteration count, and wall times per pipeline stage."""

    after_init: float
    after_local_search: float
    after_perturbation: float
    iterations: int
    wall_times: dict
    stage_solutions: dict | None = None


def compute_savings(sol: Solution, inst: Instance, vid: int) -> list:
    """Time saved on vehicle vid's tour by splicing out each removable target.

    Pre-assigned targets are never candidates.  Entries come back sorted by
    decreasing value, ties by ascending target index.
    """
    tour = sol.tour_for(vid)
    tm = inst.time_matrix(vid)
    pinned = inst.required_for(vid)
    seq = tour.sequence
    entries = []
    for p in range(1, len(seq) - 1):
        t = seq[p]
        if t in pinned:
            continue
        a = inst.vertex_index(seq[p - 1])
        b = inst.vertex_index(seq[p + 1])
        value = float(tm[a, t] + tm[t, b] - tm[a, b])
        entries.append(SavingsEntry(t, value))
    entries.sort(key=lambda e: (-e.value, e.target))
    return entries


def best_insertion(target: int, sol: Solution, inst: Instance, exclude: int) -> InsertionQuote:
    """Cheapest splice of ``target`` into any tour but the excluded vehicle's.

    Every consecutive vertex pair of every other tour is priced; ties break
    toward the lower vehicle id, then the lower edge position.
    """
    if inst.k < 2:
        raise NoInsertionCandidateError("no other vehicle to receive the target")
    best = None
    for v in inst.vehicles:
        if v.id == exclude:
            continue
        tm = inst.time_matrix(v.id)
        seq = sol.tour_for(v.id).sequence
        for pos in range(len(seq) - 1):
            a = inst.vertex_index(seq[pos])
            b = inst.vertex_index(seq[pos + 1])
            delta = float(tm[a, target] + tm[target, b] - tm[a, b])
            if best is None or delta < best.delta:
                best = InsertionQuote(v.id, pos, delta)
    return best


def _rebuild(inst: Instance, vid: int, ids, cfg: SolverConfig, cache):
    return solve_tsp(request_for(inst, vid, ids, cfg.tour_mode, cfg.exact_cap), cache)


def local_search(inst: Instance, sol: Solution, cfg: SolverConfig,
                 cache: TspCache | None = None) -> Solution:
    """Offload the longest tour until no candidate transfer improves the plan.

    Each pass takes the maximal vehicle's savings list in order, quotes the
    best receiver for the candidate, re-routes donor and receiver, and accepts
    the first move that strictly lowers the makespan.  Savings are recomputed
    from the new plan after every accepted move; the search stops when every
    candidate on the maximal tour fails.
    """
    if inst.k < 2:
        return sol
    current = sol
    while True:
        donor = current.maximal_vehicle()
        entries = compute_savings(current, inst, donor)
        objective = current.objective
        accepted = False
        for entry in entries:
            quote = best_insertion(entry.target, current, inst, exclude=donor)
            donor_tour = _rebuild(inst, donor,
                                  current.targets_of(donor) - {entry.target}, cfg, cache)
            receiver_tour = _rebuild(inst, quote.vehicle_id,
                                     current.targets_of(quote.vehicle_id) | {entry.target},
                                     cfg, cache)
            candidate = current.replace(donor_tour, receiver_tour)
            if candidate.objective < objective:
                current = candidate
                accepted = True
                break
        if not accepted:
            return current


def perturbation_radius(sol: Solution, inst: Instance, vid: int) -> float:
    """Half the summed travel times of a tour's two depot edges.

    An empty tour pins its depot in place (radius zero).
    """
    seq = sol.tour_for(vid).sequence
    if len(seq) < 3:
        return 0.0
    v = inst.vehicle(vid)
    depot = v.depot
    first = inst.vertex_point(vid, seq[1])
    last = inst.vertex_point(vid, seq[-2])
    return (depot.dist(first) + depot.dist(last)) / (2.0 * v.speed)


def perturbation_angle(base: float, iteration: int) -> float:
    """Displacement angle for a 0-based iteration of the escape loop."""
    return (base + iteration * PERTURBATION_STEP) % (2.0 * math.pi)


def perturbation_loop(inst: Instance, sol: Solution, rng, cfg: SolverConfig,
                      cache: TspCache | None = None):
    """Depot-displacement escape loop.  Returns (best solution, iterations).

    Each iteration displaces every depot by that vehicle's current radius at
    the scheduled angle, rebuilds the incumbent assignment's tours on the
    displaced geometry, runs the local search there, then re-routes the
    resulting assignment from the true depots.  Only a strict makespan
    improvement is kept; five consecutive rejections end the loop.  Base
    angles are drawn once per vehicle, in id order.
    """
    if inst.k < 2:
        return sol, 0
    base = {v.id: rng.uniform(0.0, 2.0 * math.pi) for v in inst.vehicles}
    best = sol
    iteration = 0
    rejects = 0
    while rejects < cfg.no_improve_stop:
        moved = {}
        for v in inst.vehicles:
            radius = perturbation_radius(best, inst, v.id)
            if cfg.scale_radius_by_speed:
                radius *= v.speed
            if radius > 0.0:
                theta = perturbation_angle(base[v.id], iteration)
                moved[v.id] = Point(v.depot.x + radius * math.cos(theta),
                                    v.depot.y + radius * math.sin(theta))
        displaced = inst.with_depots(moved)
        shaken = Solution(tuple(
            _rebuild(displaced, v.id, best.targets_of(v.id), cfg, cache)
            for v in inst.vehicles))
        shaken = local_search(displaced, shaken, cfg, cache)
        candidate = Solution(tuple(
            _rebuild(inst, v.id, shaken.targets_of(v.id), cfg, cache)
            for v in inst.vehicles))
        if candidate.objective < best.objective:
            best = candidate
            rejects = 0
        else:
            rejects += 1
        iteration += 1
    return best, iteration


def _checked(inst: Instance, sol: Solution, stage: str) -> Solution:
    problems = validate_solution(inst, sol)
    if problems:
        raise AssertionError(f"stage {stage} produced an infeasible plan: {problems}")
    return sol


def solve(inst: Instance, cfg: SolverConfig | None = None, rng=0,
          keep_stage_solutions: bool = False):
    """Run the full pipeline on an instance.  Returns (Solution, StageTrace).

    ``rng`` is a seed or a numpy Generator; a given (instance, config, seed)
    triple always reproduces the same plan.
    """
    cfg = cfg or SolverConfig()
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    cache = TspCache()

    t0 = time.perf_counter()
    if inst.k == 1:
        alloc = Allocation({1: frozenset(inst.free_targets())})
        only = build_initial_solution(inst, alloc, cfg.tour_mode, cfg.exact_cap, cache)
        _checked(inst, only, STAGE_INIT)
        dt = time.perf_counter() - t0
        trace = StageTrace(only.objective, only.objective, only.objective, 0,
                           {STAGE_INIT: dt, STAGE_LOCAL_SEARCH: 0.0, STAGE_PERTURBATION: 0.0})
        if keep_stage_solutions:
            trace.stage_solutions = {STAGE_INIT: only, STAGE_LOCAL_SEARCH: only,
                                     STAGE_PERTURBATION: only}
        return only, trace

    effective = perturb_colocated_depots(inst, rng)
    counts = min_target_counts(inst)
    alloc = solve_load_balancing(inst, effective, counts, cfg.allocation_method)
    initial = _checked(inst,
                       build_initial_solution(inst, alloc, cfg.tour_mode, cfg.exact_cap, cache),
                       STAGE_INIT)
    t1 = time.perf_counter()

    improved = _checked(inst, local_search(inst, initial, cfg, cache), STAGE_LOCAL_SEARCH)
    t2 = time.perf_counter()

    final, iterations = perturbation_loop(inst, improved, rng, cfg, cache)
    _checked(inst, final, STAGE_PERTURBATION)
    t3 = time.perf_counter()

    trace = StageTrace(initial.objective, improved.objective, final.objective, iterations,
                       {STAGE_INIT: t1 - t0, STAGE_LOCAL_SEARCH: t2 - t1,
                        STAGE_PERTURBATION: t3 - t2})
    if keep_stage_solutions:
        trace.stage_solutions = {STAGE_INIT: initial, STAGE_LOCAL_SEARCH: improved,
                                 STAGE_PERTURBATION: final}
    return final, trace
