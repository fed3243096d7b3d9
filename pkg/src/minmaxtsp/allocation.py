"""Load-balancing initialization.

Free targets are distributed over the fleet by a minimum-cost assignment in
which every vehicle must receive at least a speed-proportional share of the
work, and the cost of giving target t to vehicle j is the depot-to-target
travel time.  Vehicles parked on the same spot would see identical cost
columns, so co-located depots are first teased apart on a small circle; the
effective positions exist only inside the cost matrix and tours are always
built from the true depots.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment, linprog

from .model import InfeasibleAllocationError, Instance, Point, Solution
from .tsp import HEURISTIC, TspCache, request_for, solve_tsp

# Radius of the circle on which co-located depots are spread apart.
COLOCATION_RADIUS = 0.1

EXACT_ASSIGNMENT = "exact"
LP_ROUNDING = "lp_round"


@dataclass(frozen=True)
class MinCounts:
    """Per-vehicle lower bounds on the number of free targets to receive."""

    lower: dict

    def total(self) -> int:
        return sum(self.lower.values())


@dataclass(frozen=True)
class EffectiveDepots:
    """Depot positions used for allocation costs only."""

    pos: dict


@dataclass(frozen=True)
class Allocation:
    """Free targets per vehicle; required targets are not listed here."""

    assign: dict

    def for_vehicle(self, vid: int) -> frozenset:
        return self.assign.get(vid, frozenset())


def min_target_counts(inst: Instance) -> MinCounts:
    """Speed-proportional share per vehicle, net of its pre-assigned load.

    Vehicle j must serve at least floor(n * v_j / sum(v)) targets; whatever
    its required set already covers is subtracted and the result is clamped
    at zero.  Note the clamp can push the summed bounds past the number of
    free targets when one vehicle's required load far exceeds its share;
    solve_load_balancing guards that case.
    """
    total_speed = sum(v.speed for v in inst.vehicles)
    n = inst.n_targets
    lower = {}
    for v in inst.vehicles:
        share = math.floor(n * v.speed / total_speed)
        lower[v.id] = max(0, share - len(inst.required_for(v.id)))
    return MinCounts(lower)


def perturb_colocated_depots(inst: Instance, rng) -> EffectiveDepots:
    """Spread groups of co-located depots evenly on a small circle.

    Each group of m >= 2 vehicles sharing an exact depot position gets one
    random base angle; member i (in vehicle-id order) lands at base + i*2pi/m
    on a circle of radius COLOCATION_RADIUS around the shared point.  Groups
    are processed in order of their lowest vehicle id, so draws are
    reproducible for a seeded generator.
    """
    groups = {}
    for v in inst.vehicles:
        groups.setdefault((v.depot.x, v.depot.y), []).append(v.id)
    pos = {v.id: v.depot for v in inst.vehicles}
    for (cx, cy), members in sorted(groups.items(), key=lambda kv: kv[1][0]):
        if len(members) < 2:
            continue
        base = rng.uniform(0.0, 2.0 * math.pi)
        for i, vid in enumerate(sorted(members)):
            theta = base + 2.0 * math.pi * i / len(members)
            pos[vid] = Point(cx + COLOCATION_RADIUS * math.cos(theta),
                             cy + COLOCATION_RADIUS * math.sin(theta))
    return EffectiveDepots(pos)


def _cost_matrix(inst: Instance, eff: EffectiveDepots, free) -> np.ndarray:
    """(|free|, k) matrix: time from vehicle j's effective depot to target t."""
    xy = inst.target_xy()[list(free)]
    cols = []
    for v in inst.vehicles:
        p = eff.pos[v.id]
        cols.append(np.hypot(xy[:, 0] - p.x, xy[:, 1] - p.y) / v.speed)
    return np.column_stack(cols)


def allocation_cost(inst: Instance, eff: EffectiveDepots, alloc: Allocation) -> float:
    """Total depot-to-target cost of an allocation under effective depots."""
    free = inst.free_targets()
    if not free:
        return 0.0
    c = _cost_matrix(inst, eff, free)
    row = {t: i for i, t in enumerate(free)}
    total = 0.0
    for v in inst.vehicles:
        for t in alloc.for_vehicle(v.id):
            total += c[row[t], v.id - 1]
    return total


def solve_load_balancing(inst: Instance, eff: EffectiveDepots, counts: MinCounts,
                         method: str = EXACT_ASSIGNMENT) -> Allocation:
    """Distribute free targets at minimum total cost subject to the lower bounds.

    The default method solves the problem exactly: vehicle j contributes
    lower_j dedicated slots priced by its own cost column, targets beyond the
    bounds fill wildcard slots priced at each target's cheapest vehicle, and
    one square assignment over the slots settles everything.  A target won by
    a wildcard slot goes to its cheapest vehicle (ties: lowest id).

    method="lp_round" instead solves the fractional relaxation and rounds
    each target to its largest fractional share (ties: lowest id).  The
    constraint matrix is an interval matrix, so relaxation optima are already
    integral and rounding normally changes nothing; the path exists for
    comparison runs.
    """
    free = inst.free_targets()
    lowers = [counts.lower.get(v.id, 0) for v in inst.vehicles]
    if sum(lowers) > len(free):
        raise InfeasibleAllocationError(
            f"lower bounds demand {sum(lowers)} free targets, instance has {len(free)}")
    assign = {v.id: set() for v in inst.vehicles}
    if free:
        c = _cost_matrix(inst, eff, free)
        if method == EXACT_ASSIGNMENT:
            _assign_exact(c, lowers, free, assign)
        elif method == LP_ROUNDING:
            _assign_lp_round(c, lowers, free, assign)
        else:
            raise ValueError(f"unknown allocation method {method!r}")
    return Allocation({vid: frozenset(ids) for vid, ids in assign.items()})


def _assign_exact(c: np.ndarray, lowers, free, assign) -> None:
    nf, k = c.shape
    owner = []
    cols = []
    for j in range(k):
        for _ in range(lowers[j]):
            owner.append(j)
            cols.append(c[:, j])
    cheapest = c.min(axis=1)
    for _ in range(nf - len(owner)):
        owner.append(-1)
        cols.append(cheapest)
    _, col_of_row = linear_sum_assignment(np.column_stack(cols))
    for row, col in enumerate(col_of_row):
        j = owner[col]
        if j < 0:
            j = int(np.argmin(c[row]))
        assign[j + 1].add(free[row])


def _assign_lp_round(c: np.ndarray, lowers, free, assign) -> None:
    nf, k = c.shape
    a_eq = np.zeros((nf, nf * k))
    for t in range(nf):
        a_eq[t, t * k:(t + 1) * k] = 1.0
    a_ub = np.zeros((k, nf * k))
    for j in range(k):
        a_ub[j, j::k] = -1.0
    res = linprog(c.ravel(), A_ub=a_ub, b_ub=-np.asarray(lowers, dtype=float),
                  A_eq=a_eq, b_eq=np.ones(nf), bounds=(0.0, 1.0), method="highs")
    if not res.success:
        raise InfeasibleAllocationError(f"relaxation failed: {res.message}")
    x = res.x.reshape(nf, k)
    for t in range(nf):
        assign[int(np.argmax(x[t])) + 1].add(free[t])


def build_initial_solution(inst: Instance, alloc: Allocation, mode: str = HEURISTIC,
                           exact_cap: int = 16, cache: TspCache | None = None) -> Solution:
    """Route every vehicle through its allocated plus required targets.

    Tours always depart from the true depots; the effective positions used
    for allocation costs play no role here.
    """
    tours = []
    for v in inst.vehicles:
        ids = set(alloc.for_vehicle(v.id)) | set(inst.required_for(v.id))
        tours.append(solve_tsp(request_for(inst, v.id, ids, mode, exact_cap), cache))
    return Solution(tuple(tours))
