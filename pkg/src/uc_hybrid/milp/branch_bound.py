"""Best-bound branch and bound over LP relaxations solved by the native simplex."""

from __future__ import annotations

import heapq
import itertools
import math
import time

import numpy as np

from .model import INF, INT_TOL, MilpModel, Solution, Status, relative_gap
from .simplex import solve_lp_native


def _most_fractional(values: np.ndarray, integer: np.ndarray):
    frac = np.abs(values - np.rint(values))
    frac[~integer] = 0.0
    j = int(np.argmax(frac))
    return None if frac[j] <= INT_TOL else j


def solve_milp_native(model: MilpModel, rel_gap: float = 0.0, time_limit: float | None = None) -> Solution:
    if rel_gap < 0:
        raise ValueError("rel_gap must be non-negative")
    start = time.perf_counter()
    integer = model.integer
    # integer bounds are rounded inward once up front
    lo0 = np.where(integer, np.ceil(model.col_lo - INT_TOL), model.col_lo)
    hi0 = np.where(integer, np.floor(model.col_hi + INT_TOL), model.col_hi)
    if np.any(lo0 > hi0):
        return Solution(Status.INFEASIBLE, backend="native")

    counter = itertools.count()
    heap: list = []
    incumbent = INF
    best_x = None
    pruned_bound = INF  # smallest bound among nodes dropped by the gap rule
    nodes = 0
    pivots = 0
    trace: list[tuple[float, float]] = []
    last_bound = -INF

    root = solve_lp_native(model.with_bounds(lo0, hi0))
    pivots += root.pivots
    if root.status is Status.INFEASIBLE:
        return Solution(Status.INFEASIBLE, nodes=1, pivots=pivots, backend="native")
    if root.status is Status.UNBOUNDED:
        return Solution(Status.UNBOUNDED, nodes=1, pivots=pivots, backend="native")
    if root.status is not Status.OPTIMAL:
        return Solution(root.status, nodes=1, pivots=pivots, backend="native")
    heapq.heappush(heap, (root.objective, next(counter), lo0, hi0, root))

    status = Status.OPTIMAL
    while heap:
        if time_limit is not None and time.perf_counter() - start > time_limit:
            status = Status.TIME_LIMIT
            break
        bound, _, lo, hi, relax = heapq.heappop(heap)
        last_bound = max(last_bound, bound)
        if bound >= incumbent - _prune_slack(incumbent, rel_gap):
            if bound < incumbent - _prune_slack(incumbent, 0.0):
                pruned_bound = min(pruned_bound, bound)
            nodes += 1
            trace.append((_current_bound(heap, pruned_bound, incumbent, last_bound), incumbent))
            continue
        if relax is None:
            relax = solve_lp_native(model.with_bounds(lo, hi))
            pivots += relax.pivots
            if relax.status is not Status.OPTIMAL:
                nodes += 1
                trace.append((_current_bound(heap, pruned_bound, incumbent, last_bound), incumbent))
                continue
            bound = max(bound, relax.objective)
            if bound >= incumbent - _prune_slack(incumbent, rel_gap):
                if bound < incumbent - _prune_slack(incumbent, 0.0):
                    pruned_bound = min(pruned_bound, bound)
                nodes += 1
                trace.append((_current_bound(heap, pruned_bound, incumbent, last_bound), incumbent))
                continue
        nodes += 1
        x = relax.values
        j = _most_fractional(x, integer)
        if j is None:
            if relax.objective < incumbent:
                incumbent = relax.objective
                best_x = np.where(integer, np.rint(x), x)
        else:
            down_hi = hi.copy()
            down_hi[j] = math.floor(x[j])
            up_lo = lo.copy()
            up_lo[j] = math.ceil(x[j])
            # children inherit the parent bound; their LPs are solved when popped
            heapq.heappush(heap, (bound, next(counter), lo, down_hi, None))
            heapq.heappush(heap, (bound, next(counter), up_lo, hi, None))
        trace.append((_current_bound(heap, pruned_bound, incumbent, last_bound), incumbent))

    if best_x is None:
        if status is Status.TIME_LIMIT:
            return Solution(Status.TIME_LIMIT, nodes=nodes, pivots=pivots, backend="native", node_trace=trace)
        return Solution(Status.INFEASIBLE, nodes=nodes, pivots=pivots, backend="native", node_trace=trace)

    best_bound = _current_bound(heap, pruned_bound, incumbent, last_bound)
    gap = relative_gap(incumbent, best_bound)
    if status is Status.OPTIMAL and gap > 1e-9:
        status = Status.GAP_REACHED
    objective = float(model.c @ best_x)
    return Solution(status, objective, best_x, best_bound, gap, nodes, pivots, "native", trace)


def _prune_slack(incumbent: float, rel_gap: float) -> float:
    if not math.isfinite(incumbent):
        return 0.0
    return max(1e-9 * max(1.0, abs(incumbent)), rel_gap * abs(incumbent))


def _current_bound(heap, pruned_bound, incumbent, last_bound) -> float:
    open_bound = heap[0][0] if heap else INF
    bound = min(open_bound, pruned_bound, incumbent)
    return bound if math.isfinite(bound) else last_bound
