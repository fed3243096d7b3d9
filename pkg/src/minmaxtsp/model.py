"""Problem data model: instances, tours, solutions, and the travel-time metric.

A fleet of vehicles with individual speeds and depots must jointly visit a set
of planar targets.  Some targets may be pre-assigned to a specific vehicle;
the rest are free.  Travel time between two points is Euclidean distance
divided by the vehicle's speed, so the metric is symmetric and satisfies the
triangle inequality for every vehicle.
"""

import math
from dataclasses import dataclass

import numpy as np

# Sentinel vertex id marking a vehicle's own depot inside a tour sequence.
# Target identity is always an index into Instance.targets; depots are a
# separate vertex kind and never alias a target index.
DEPOT = -1


class SolverError(Exception):
    """Base class for solver failures."""


class InvalidInstanceError(SolverError, ValueError):
    """Instance data violates a structural invariant."""


class CapacityError(SolverError):
    """Exact tour solve requested for more targets than the subset cap allows."""


class InfeasibleAllocationError(SolverError):
    """Load-balancing lower bounds cannot be met by the available free targets."""


class OracleBudgetError(SolverError):
    """Instance is too large for exhaustive optimal enumeration."""


class NoInsertionCandidateError(SolverError):
    """No receiving vehicle exists for a transfer (single-vehicle fleet)."""


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def dist(self, other: "Point") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class Vehicle:
    """A vehicle with a 1-based id, a positive speed, and a home depot."""

    id: int
    speed: float
    depot: Point


def travel_time(a: Point, b: Point, v: Vehicle) -> float:
    """Euclidean distance from a to b divided by the vehicle's speed."""
    if not (math.isfinite(a.x) and math.isfinite(a.y)
            and math.isfinite(b.x) and math.isfinite(b.y)):
        raise ValueError("travel_time: non-finite coordinate")
    return a.dist(b) / v.speed


@dataclass
class Instance:
    """An immutable routing instance.

    targets:  planar target coordinates; a target is referred to by its index.
    vehicles: fleet ordered by id (ids are exactly 1..k).
    required: per-vehicle pre-assigned target sets, pairwise disjoint.

    Instances are validated on construction and must not be mutated afterwards;
    distance data is cached lazily and shared by all solver stages.
    """

    targets: tuple
    vehicles: tuple
    required: dict | None = None

    def __post_init__(self):
        self.targets = tuple(self.targets)
        self.vehicles = tuple(self.vehicles)
        raw = self.required or {}
        self.required = {int(v): frozenset(int(t) for t in ids)
                         for v, ids in raw.items() if len(ids) > 0}
        self._cache = {}
        self._validate()

    def _validate(self):
        if len(self.targets) < 1:
            raise InvalidInstanceError("instance needs at least one target")
        if len(self.vehicles) < 1:
            raise InvalidInstanceError("instance needs at least one vehicle")
        for i, t in enumerate(self.targets):
            if not (math.isfinite(t.x) and math.isfinite(t.y)):
                raise InvalidInstanceError(f"target {i} has non-finite coordinates")
        for pos, v in enumerate(self.vehicles, start=1):
            if v.id != pos:
                raise InvalidInstanceError("vehicle ids must be exactly 1..k in order")
            if not (v.speed > 0 and math.isfinite(v.speed)):
                raise InvalidInstanceError(f"vehicle {v.id} has non-positive speed")
            if not (math.isfinite(v.depot.x) and math.isfinite(v.depot.y)):
                raise InvalidInstanceError(f"vehicle {v.id} depot has non-finite coordinates")
        seen = set()
        for vid, ids in self.required.items():
            if not 1 <= vid <= self.k:
                raise InvalidInstanceError(f"required set names unknown vehicle {vid}")
            for t in ids:
                if not 0 <= t < self.n_targets:
                    raise InvalidInstanceError(f"required target index {t} out of range")
                if t in seen:
                    raise InvalidInstanceError(f"target {t} appears in two required sets")
                seen.add(t)

    # -- accessors ---------------------------------------------------------

    @property
    def n_targets(self) -> int:
        return len(self.targets)

    @property
    def k(self) -> int:
        return len(self.vehicles)

    def vehicle(self, vid: int) -> Vehicle:
        return self.vehicles[vid - 1]

    def required_for(self, vid: int) -> frozenset:
        return self.required.get(vid, frozenset())

    def free_targets(self) -> tuple:
        """Indices of targets not pre-assigned to any vehicle, ascending."""
        taken = set().union(*self.required.values()) if self.required else set()
        return tuple(t for t in range(self.n_targets) if t not in taken)

    def target_xy(self) -> np.ndarray:
        """(n, 2) array of target coordinates, cached."""
        xy = self._cache.get("xy")
        if xy is None:
            xy = np.array([[t.x, t.y] for t in self.targets], dtype=float)
            self._cache["xy"] = xy
        return xy

    def time_matrix(self, vid: int) -> np.ndarray:
        """(n+1, n+1) travel-time matrix for one vehicle; row/col n is its depot."""
        key = ("tm", vid)
        tm = self._cache.get(key)
        if tm is None:
            v = self.vehicle(vid)
            pts = np.vstack([self.target_xy(), [v.depot.x, v.depot.y]])
            diff = pts[:, None, :] - pts[None, :, :]
            tm = np.hypot(diff[..., 0], diff[..., 1]) / v.speed
            self._cache[key] = tm
        return tm

    def vertex_index(self, vertex: int) -> int:
        """Map a tour vertex (target index or DEPOT) to a time-matrix index."""
        return self.n_targets if vertex == DEPOT else vertex

    def vertex_point(self, vid: int, vertex: int) -> Point:
        return self.vehicle(vid).depot if vertex == DEPOT else self.targets[vertex]

    def with_depots(self, depots: dict) -> "Instance":
        """Copy of this instance with some vehicle depots replaced."""
        vehicles = tuple(
            Vehicle(v.id, v.speed, depots.get(v.id, v.depot)) for v in self.vehicles
        )
        return Instance(self.targets, vehicles, dict(self.required))


@dataclass(frozen=True)
class Tour:
    """One vehicle's closed route: (DEPOT, t_1, ..., t_m, DEPOT)."""

    vehicle_id: int
    sequence: tuple
    duration: float

    def targets(self) -> tuple:
        return tuple(v for v in self.sequence if v != DEPOT)


@dataclass(frozen=True)
class Solution:
    """A complete plan, one tour per vehicle, ordered by vehicle id."""

    tours: tuple

    def __post_init__(self):
        object.__setattr__(self, "tours",
                           tuple(sorted(self.tours, key=lambda t: t.vehicle_id)))

    @property
    def objective(self) -> float:
        """Makespan: the maximum tour duration across the fleet."""
        return max(t.duration for t in self.tours)

    def tour_for(self, vid: int) -> Tour:
        return self.tours[vid - 1]

    def targets_of(self, vid: int) -> frozenset:
        return frozenset(self.tours[vid - 1].targets())

    def replace(self, *new_tours: Tour) -> "Solution":
        """New solution with the given vehicles' tours swapped in."""
        table = {t.vehicle_id: t for t in self.tours}
        for t in new_tours:
            table[t.vehicle_id] = t
        return Solution(tuple(table.values()))

    def maximal_vehicle(self) -> int:
        """Id of a vehicle with maximum tour duration (ties: lowest id)."""
        best = self.tours[0]
        for t in self.tours[1:]:
            if t.duration > best.duration:
                best = t
        return best.vehicle_id


def tour_duration(inst: Instance, tour: Tour) -> float:
    """Recompute a tour's duration by summing edge travel times along it."""
    seq = tour.sequence
    if len(seq) < 2 or seq[0] != DEPOT or seq[-1] != DEPOT:
        raise ValueError("tour sequence must start and end at the vehicle's depot")
    tm = inst.time_matrix(tour.vehicle_id)
    total = 0.0
    for a, b in zip(seq, seq[1:]):
        total += tm[inst.vertex_index(a), inst.vertex_index(b)]
    return total


def validate_solution(inst: Instance, sol: Solution) -> list:
    """Check a solution against an instance and return violation messages.

    Total over type-correct input: malformed data yields violation entries,
    never an exception.  An empty list means the solution is feasible.
    """
    out = []
    ids = sorted(t.vehicle_id for t in sol.tours)
    if ids != list(range(1, inst.k + 1)):
        out.append(f"solution must carry exactly one tour per vehicle 1..{inst.k}, got ids {ids}")
        return out

    seen = {}
    for tour in sol.tours:
        seq = tour.sequence
        if len(seq) < 2 or seq[0] != DEPOT or seq[-1] != DEPOT:
            out.append(f"tour {tour.vehicle_id} does not start and end at its depot")
            continue
        broken = False
        for v in seq[1:-1]:
            if v == DEPOT:
                out.append(f"tour {tour.vehicle_id} visits a depot mid-sequence")
                broken = True
            elif not 0 <= v < inst.n_targets:
                out.append(f"tour {tour.vehicle_id} references unknown target {v}")
                broken = True
            elif v in seen:
                out.append(f"target {v} visited by vehicle {seen[v]} and vehicle {tour.vehicle_id}")
            else:
                seen[v] = tour.vehicle_id
        if broken:
            continue  # duration is meaningless once the sequence itself is bad
        real = tour_duration(inst, tour)
        if not math.isclose(real, tour.duration, rel_tol=1e-9, abs_tol=1e-12):
            out.append(f"tour {tour.vehicle_id} duration {tour.duration} != recomputed {real}")

    for t in range(inst.n_targets):
        if t not in seen:
            out.append(f"target {t} is not visited")
    for vid, req in sorted(inst.required.items()):
        for t in sorted(req):
            owner = seen.get(t)
            if owner is not None and owner != vid:
                out.append(f"required target {t} rides with vehicle {owner}, must be {vid}")
    return out
