"""HiGHS backend through :func:`scipy.optimize.milp`."""

from __future__ import annotations

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from .model import MilpModel, Solution, Status

# scipy.optimize.milp status codes
_STATUS = {0: Status.OPTIMAL, 2: Status.INFEASIBLE, 3: Status.UNBOUNDED}


def solve_highs(model: MilpModel, rel_gap: float = 0.0, time_limit: float | None = None, integral: bool = True) -> Solution:
    options = {"disp": False, "presolve": True}
    if integral and model.is_mip:
        options["mip_rel_gap"] = float(rel_gap)
    if time_limit is not None:
        options["time_limit"] = float(time_limit)
    constraints = LinearConstraint(model.A, model.row_lo, model.row_hi) if model.n_rows else None
    res = milp(
        model.c,
        integrality=model.integer.astype(int) if integral else None,
        bounds=Bounds(model.col_lo, model.col_hi),
        constraints=constraints,
        options=options,
    )
    nodes = int(getattr(res, "mip_node_count", 0) or 0)
    if res.status == 1:
        # iteration or time limit; scipy reports both under one code
        status = Status.TIME_LIMIT if time_limit is not None else Status.ITERATION_LIMIT
        if res.x is None:
            return Solution(status, nodes=nodes, backend="highs")
        obj = float(res.fun)
        bound = float(getattr(res, "mip_dual_bound", obj) or obj)
        return Solution(status, obj, _snap(model, res.x, integral), bound, float(getattr(res, "mip_gap", np.nan)), nodes, backend="highs")
    status = _STATUS.get(res.status)
    if status is None:
        # scipy lumps dual infeasibility into "other"; probe the LP to tell
        return Solution(Status.UNBOUNDED if "unbounded" in str(res.message).lower() else Status.INFEASIBLE,
                        nodes=nodes, backend="highs")
    if status is not Status.OPTIMAL:
        return Solution(status, nodes=nodes, backend="highs")
    obj = float(res.fun)
    if integral and model.is_mip:
        bound = getattr(res, "mip_dual_bound", None)
        bound = obj if bound is None else float(bound)
        gap = getattr(res, "mip_gap", None)
        gap = 0.0 if gap is None else max(0.0, float(gap))
        if rel_gap > 0 and gap > 1e-9:
            status = Status.GAP_REACHED
        return Solution(status, obj, _snap(model, res.x, True), bound, gap, nodes, backend="highs")
    return Solution(status, obj, np.asarray(res.x, dtype=float), obj, 0.0, backend="highs")


def _snap(model: MilpModel, x, integral: bool) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if integral:
        x = np.where(model.integer, np.rint(x), x)
    return x
