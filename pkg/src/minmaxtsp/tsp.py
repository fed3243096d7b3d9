"""Single-vehicle tour sub-solver.

Two modes share one entry point:

* heuristic -- nearest-neighbor construction polished by 2-opt and Or-opt
  (segment lengths 1..3), both first-improvement with a fixed scan order.
* exact -- Held-Karp dynamic program over target subsets, capped at
  EXACT_CAP_DEFAULT targets.

All route decisions are made on raw distances; the vehicle speed only divides
the final length, so the chosen order is invariant under speed scaling.
"""

from dataclasses import dataclass

import numpy as np

from .model import DEPOT, CapacityError, Instance, Point, Tour

HEURISTIC = "heuristic"
EXACT = "exact"
EXACT_CAP_DEFAULT = 16

# Improvement moves must beat this margin; blocks float ping-pong cycles.
_EPS = 1e-12


@dataclass
class TourRequest:
    """A self-contained ask: route one vehicle through a set of targets.

    ``targets`` are instance-level indices (sorted, they define identity);
    ``points`` is the matching (m, 2) coordinate block.
    """

    vehicle_id: int
    depot: Point
    targets: tuple
    points: np.ndarray
    speed: float
    mode: str = HEURISTIC
    exact_cap: int = EXACT_CAP_DEFAULT


def request_for(inst: Instance, vid: int, targets, mode: str = HEURISTIC,
                exact_cap: int = EXACT_CAP_DEFAULT) -> TourRequest:
    """Build a TourRequest for one vehicle of an instance."""
    ids = tuple(sorted(targets))
    v = inst.vehicle(vid)
    pts = inst.target_xy()[list(ids)] if ids else np.empty((0, 2))
    return TourRequest(vid, v.depot, ids, pts, v.speed, mode, exact_cap)


class TspCache:
    """Memo for solved requests, keyed by depot position, target set, and mode.

    Valid only while the target coordinate table is fixed (one instance family;
    depot moves are fine since the depot is part of the key).
    """

    def __init__(self):
        self._data = {}

    @staticmethod
    def _key(req: TourRequest):
        return (req.depot.x, req.depot.y, req.targets, req.mode)

    def get(self, req: TourRequest):
        return self._data.get(self._key(req))

    def put(self, req: TourRequest, order: tuple, dist: float) -> None:
        self._data[self._key(req)] = (order, dist)

    def __len__(self):
        return len(self._data)


def _distance_matrix(points: np.ndarray, depot: Point) -> np.ndarray:
    """(m+1, m+1) Euclidean distances; row/col m is the depot."""
    pts = np.vstack([points, [depot.x, depot.y]])
    diff = pts[:, None, :] - pts[None, :, :]
    return np.hypot(diff[..., 0], diff[..., 1])


def _cycle_length(order, dist) -> float:
    m = dist.shape[0] - 1
    total = dist[m, order[0]]
    for a, b in zip(order, order[1:]):
        total += dist[a, b]
    return float(total + dist[order[-1], m])


def _nearest_neighbor(dist: np.ndarray) -> list:
    """Greedy order starting at the depot; ties go to the lowest index."""
    m = dist.shape[0] - 1
    remaining = list(range(m))
    order = []
    cur = m
    while remaining:
        nxt = min(remaining, key=lambda j: (dist[cur, j], j))
        order.append(nxt)
        remaining.remove(nxt)
        cur = nxt
    return order


def _two_opt(order: list, dist: np.ndarray) -> list:
    """First-improvement 2-opt to a fixpoint, scanning i ascending then j."""
    m = len(order)
    dm = dist.shape[0] - 1
    improved = True
    while improved:
        improved = False
        for i in range(m - 1):
            a = dm if i == 0 else order[i - 1]
            b = order[i]
            for j in range(i + 1, m):
                c = order[j]
                d = dm if j == m - 1 else order[j + 1]
                delta = dist[a, c] + dist[b, d] - dist[a, b] - dist[c, d]
                if delta < -_EPS:
                    order[i:j + 1] = reversed(order[i:j + 1])
                    improved = True
                    break
            if improved:
                break
    return order


def _or_opt_once(order: list, dist: np.ndarray):
    """Relocate one segment (length 1..3, both orientations) if it helps.

    Returns (order, True) after the first improving move, (order, False) if
    the tour is Or-opt clean.
    """
    m = len(order)
    dm = dist.shape[0] - 1
    for L in (1, 2, 3):
        if L >= m:
            break
        for s in range(m - L + 1):
            seg = order[s:s + L]
            rest = order[:s] + order[s + L:]
            prev_s = dm if s == 0 else order[s - 1]
            next_s = dm if s + L == m else order[s + L]
            removal = (dist[prev_s, seg[0]] + dist[seg[-1], next_s]
                       - dist[prev_s, next_s])
            for q in range(len(rest) + 1):
                if q == s:
                    continue  # same slot, forward orientation is a no-op
                a = dm if q == 0 else rest[q - 1]
                b = dm if q == len(rest) else rest[q]
                for piece in (seg, seg[::-1]):
                    add = dist[a, piece[0]] + dist[piece[-1], b] - dist[a, b]
                    if add - removal < -_EPS:
                        return rest[:q] + piece + rest[q:], True
    return order, False


def _improve(order: list, dist: np.ndarray) -> list:
    """Alternate 2-opt and Or-opt until neither move improves the cycle."""
    while True:
        order = _two_opt(order, dist)
        order, moved = _or_opt_once(order, dist)
        if not moved:
            return order


def _subset_dp(dist: np.ndarray):
    """Held-Karp table over target subsets.

    dp[mask, j] is the shortest depot-start path visiting exactly the targets
    in ``mask`` and ending at target j; parent[mask, j] backtracks it.  Each
    (mask | bit_j, j) cell has the unique predecessor mask ``mask``, so the
    table fills with one vectorized scatter per mask.
    """
    m = dist.shape[0] - 1
    full = 1 << m
    C = dist[:m, :m]
    dp = np.full((full, m), np.inf)
    parent = np.full((full, m), -1, dtype=np.int8)
    dp[1 << np.arange(m), np.arange(m)] = dist[m, :m]
    idx = np.arange(m)
    for mask in range(1, full):
        outside = (mask >> idx) & 1 == 0
        if not outside.any():
            continue
        cand = dp[mask][:, None] + C
        best_last = np.argmin(cand, axis=0)
        best_val = cand[best_last, idx]
        nxt = idx[outside]
        dp[mask + (1 << nxt), nxt] = best_val[nxt]
        parent[mask + (1 << nxt), nxt] = best_last[nxt]
    return dp, parent


def held_karp_order(dist: np.ndarray):
    """Optimal cycle (depot -> all targets -> depot). Returns (order, length)."""
    m = dist.shape[0] - 1
    if m == 0:
        return [], 0.0
    dp, parent = _subset_dp(dist)
    full = (1 << m) - 1
    closing = dp[full] + dist[:m, m]
    last = int(np.argmin(closing))
    length = float(closing[last])
    order = []
    mask = full
    while last >= 0:
        order.append(last)
        mask, last = mask ^ (1 << last), int(parent[mask, last])
    order.reverse()
    return order, length


def best_cycle_lengths(dist: np.ndarray) -> np.ndarray:
    """Optimal cycle length for every target subset at once.

    Entry ``mask`` is the shortest closed route through the depot and exactly
    the targets in ``mask`` (0.0 for the empty subset).  Used by the oracle.
    """
    m = dist.shape[0] - 1
    dp, _ = _subset_dp(dist)
    out = np.min(dp + dist[:m, m][None, :], axis=1)
    out[0] = 0.0
    return out


def _finish(req: TourRequest, order, length: float) -> Tour:
    seq = (DEPOT,) + tuple(req.targets[p] for p in order) + (DEPOT,)
    return Tour(req.vehicle_id, seq, float(length) / req.speed)


def held_karp(req: TourRequest) -> Tour:
    """Exact tour for a request, regardless of its mode flag."""
    if len(req.targets) > req.exact_cap:
        raise CapacityError(
            f"exact tour solve over {len(req.targets)} targets exceeds cap {req.exact_cap}")
    if not req.targets:
        return Tour(req.vehicle_id, (DEPOT, DEPOT), 0.0)
    order, length = held_karp_order(_distance_matrix(req.points, req.depot))
    return _finish(req, order, length)


def solve_tsp(req: TourRequest, cache: TspCache | None = None) -> Tour:
    """Route one vehicle through its targets per the request's mode."""
    if not req.targets:
        return Tour(req.vehicle_id, (DEPOT, DEPOT), 0.0)
    if cache is not None:
        hit = cache.get(req)
        if hit is not None:
            order, length = hit
            return _finish(req, order, length)
    if req.mode == EXACT:
        if len(req.targets) > req.exact_cap:
            raise CapacityError(
                f"exact tour solve over {len(req.targets)} targets exceeds cap {req.exact_cap}")
        dist = _distance_matrix(req.points, req.depot)
        order, length = held_karp_order(dist)
    else:
        dist = _distance_matrix(req.points, req.depot)
        order = _improve(_nearest_neighbor(dist), dist)
        length = _cycle_length(order, dist)
    if cache is not None:
        cache.put(req, tuple(order), length)
    return _finish(req, order, length)


def two_opt_improve(inst: Instance, tour: Tour) -> Tour:
    """Polish an existing tour with 2-opt only; result is 2-opt optimal."""
    ids = tour.targets()
    if len(ids) < 2:
        return tour
    v = inst.vehicle(tour.vehicle_id)
    pts = inst.target_xy()[list(ids)]
    dist = _distance_matrix(pts, v.depot)
    order = _two_opt(list(range(len(ids))), dist)
    seq = (DEPOT,) + tuple(ids[p] for p in order) + (DEPOT,)
    return Tour(tour.vehicle_id, seq, _cycle_length(order, dist) / v.speed)
