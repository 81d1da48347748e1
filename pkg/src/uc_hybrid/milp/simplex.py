"""Bounded-variable primal simplex on a dense explicit basis inverse.

Every row ``lo <= a @ x <= hi`` becomes ``a @ x - s = 0`` with a logical
column ``s`` bounded by ``[lo, hi]``. Phase 1 minimises a sum of artificials
started on the rows the initial nonbasic point violates. Pricing is Dantzig's
rule; after a run of degenerate pivots Bland's rule takes over until the
objective moves again.
"""

from __future__ import annotations

import numpy as np

from .model import FEAS_TOL, INF, MilpModel, Solution, Status

PIVOT_TOL = 1e-9
OPT_TOL = 1e-9
REFACTOR_EVERY = 50
STALL_LIMIT = 25

_AT_LO, _AT_HI, _FREE = 0, 1, 2


class _Tableau:
    def __init__(self, A: np.ndarray, lo: np.ndarray, hi: np.ndarray, basis: np.ndarray, x: np.ndarray):
        self.M = A
        self.lo = lo
        self.hi = hi
        self.basis = basis
        self.x = x
        self.m = A.shape[0]
        self.is_basic = np.zeros(A.shape[1], dtype=bool)
        self.is_basic[basis] = True
        self.state = np.where(np.isfinite(lo), _AT_LO, np.where(np.isfinite(hi), _AT_HI, _FREE))
        self.pivots = 0
        self.refactor()

    def refactor(self):
        self.Binv = np.linalg.inv(self.M[:, self.basis])
        xn = np.where(self.is_basic, 0.0, self.x)
        self.x[self.basis] = -self.Binv @ (self.M @ xn)

    def run(self, cost: np.ndarray, budget: int) -> Status:
        scale = max(1.0, float(np.abs(cost).max(initial=0.0)))
        opt_tol = OPT_TOL * scale
        movable = ~self.is_basic & (self.lo < self.hi)
        stall = 0
        bland = False
        since_refactor = 0
        while True:
            if self.pivots >= budget:
                return Status.ITERATION_LIMIT
            if since_refactor >= REFACTOR_EVERY:
                self.refactor()
                since_refactor = 0
            y = cost[self.basis] @ self.Binv
            d = cost - y @ self.M
            movable = ~self.is_basic & (self.lo < self.hi)
            st = self.state
            improving = movable & (
                ((st == _AT_LO) & (d < -opt_tol))
                | ((st == _AT_HI) & (d > opt_tol))
                | ((st == _FREE) & (np.abs(d) > opt_tol))
            )
            candidates = np.flatnonzero(improving)
            if candidates.size == 0:
                return Status.OPTIMAL
            if bland:
                q = int(candidates[0])
            else:
                q = int(candidates[np.argmax(np.abs(d[candidates]))])
            direction = 1.0 if d[q] < 0 else -1.0

            alpha = self.Binv @ self.M[:, q]
            rate = direction * alpha
            xb = self.x[self.basis]
            lob = self.lo[self.basis]
            hib = self.hi[self.basis]
            limits = np.full(self.m, INF)
            dec = rate > PIVOT_TOL
            inc = rate < -PIVOT_TOL
            with np.errstate(invalid="ignore"):
                limits[dec] = (xb[dec] - lob[dec]) / rate[dec]
                limits[inc] = (hib[inc] - xb[inc]) / -rate[inc]
            limits = np.where(np.isnan(limits), INF, np.maximum(limits, 0.0))

            flip = self.hi[q] - self.lo[q]
            theta = float(limits.min(initial=INF))
            if flip <= theta:
                theta = flip
                leave = -1
            else:
                ties = np.flatnonzero(limits <= theta + 1e-12)
                if bland:
                    leave = int(ties[np.argmin(self.basis[ties])])
                else:
                    leave = int(ties[np.argmax(np.abs(alpha[ties]))])
            if not np.isfinite(theta):
                return Status.UNBOUNDED

            self.pivots += 1
            if theta <= 1e-11:
                stall += 1
                if stall > STALL_LIMIT:
                    bland = True
            else:
                stall = 0
                bland = False

            self.x[q] += direction * theta
            self.x[self.basis] = xb - theta * rate
            if leave < 0:
                self.state[q] = _AT_HI if direction > 0 else _AT_LO
                continue

            out = int(self.basis[leave])
            if rate[leave] > 0:
                self.x[out] = self.lo[out]
                self.state[out] = _AT_LO
            else:
                self.x[out] = self.hi[out]
                self.state[out] = _AT_HI
            self.is_basic[out] = False
            self.is_basic[q] = True
            self.basis[leave] = q

            piv = alpha[leave]
            row = self.Binv[leave] / piv
            self.Binv -= np.outer(alpha, row)
            self.Binv[leave] = row
            since_refactor += 1


def solve_lp_native(model: MilpModel, max_pivots: int | None = None) -> Solution:
    """Solve the LP relaxation of ``model`` (integrality ignored)."""
    m, n = model.n_rows, model.n_cols
    budget = max_pivots if max_pivots is not None else 50 * (m + n)
    c = np.asarray(model.c, dtype=float)

    if m == 0:
        return _solve_box(model)

    A = model.A.toarray()
    lo_x = np.array(model.col_lo, dtype=float)
    hi_x = np.array(model.col_hi, dtype=float)
    x0 = np.where(np.isfinite(lo_x), lo_x, np.where(np.isfinite(hi_x), hi_x, 0.0))
    activity = A @ x0
    below = activity < model.row_lo - FEAS_TOL
    above = activity > model.row_hi + FEAS_TOL
    needs_art = below | above
    target = np.where(below, model.row_lo, np.where(above, model.row_hi, activity))
    sigma = np.where(target - activity >= 0, 1.0, -1.0)

    eye = np.eye(m)
    M = np.hstack([A, -eye, eye * sigma])
    lo = np.concatenate([lo_x, model.row_lo, np.zeros(m)])
    hi = np.concatenate([hi_x, model.row_hi, np.where(needs_art, INF, 0.0)])
    x = np.concatenate([x0, np.where(needs_art, target, activity), np.where(needs_art, np.abs(target - activity), 0.0)])
    basis = np.where(needs_art, n + m + np.arange(m), n + np.arange(m))

    tab = _Tableau(M, lo, hi, basis, x)
    if needs_art.any():
        phase1 = np.concatenate([np.zeros(n + m), needs_art.astype(float)])
        status = tab.run(phase1, budget)
        if status is Status.ITERATION_LIMIT:
            return Solution(Status.ITERATION_LIMIT, pivots=tab.pivots, backend="native")
        tab.refactor()
        if float(tab.x[n + m :].max()) > FEAS_TOL:
            return Solution(Status.INFEASIBLE, pivots=tab.pivots, backend="native")
        # artificials are pinned at zero for phase 2
        tab.hi[n + m :] = 0.0
        tab.x[n + m :] = np.where(tab.is_basic[n + m :], tab.x[n + m :], 0.0)
        tab.state[n + m :] = _AT_LO

    cost = np.concatenate([c, np.zeros(2 * m)])
    status = tab.run(cost, budget)
    if status is not Status.OPTIMAL:
        return Solution(status, pivots=tab.pivots, backend="native")
    tab.refactor()
    values = np.clip(tab.x[:n], lo_x, hi_x)
    obj = float(c @ values)
    return Solution(Status.OPTIMAL, obj, values, best_bound=obj, gap=0.0, pivots=tab.pivots, backend="native")


def _solve_box(model: MilpModel) -> Solution:
    c = model.c
    values = np.zeros(model.n_cols)
    for j, cj in enumerate(c):
        lo, hi = model.col_lo[j], model.col_hi[j]
        if cj > 0:
            values[j] = lo
        elif cj < 0:
            values[j] = hi
        else:
            values[j] = lo if np.isfinite(lo) else (hi if np.isfinite(hi) else 0.0)
        if not np.isfinite(values[j]):
            return Solution(Status.UNBOUNDED, backend="native")
    obj = float(c @ values)
    return Solution(Status.OPTIMAL, obj, values, best_bound=obj, gap=0.0, backend="native")
