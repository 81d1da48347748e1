"""Sparse MILP model container and solve-result types."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.sparse as sp

INF = float("inf")

FEAS_TOL = 1e-7
INT_TOL = 1e-6


class Status(str, enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"
    GAP_REACHED = "GapReached"
    ITERATION_LIMIT = "IterationLimit"
    TIME_LIMIT = "TimeLimit"

    @property
    def has_solution(self) -> bool:
        return self in (Status.OPTIMAL, Status.GAP_REACHED)


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class MilpModel:
    """Minimise ``c @ x`` subject to ``row_lo <= A @ x <= row_hi`` and column bounds.

    Equality rows have ``row_lo == row_hi``; one-sided rows carry an infinite
    side. Instances are immutable; use :class:`ModelBuilder` to assemble one.
    """

    c: np.ndarray
    A: sp.csr_matrix
    row_lo: np.ndarray
    row_hi: np.ndarray
    col_lo: np.ndarray
    col_hi: np.ndarray
    integer: np.ndarray
    col_names: tuple[str, ...] = ()
    row_names: tuple[str, ...] = ()
    name: str = "model"

    def __post_init__(self):
        for attr in ("c", "row_lo", "row_hi", "col_lo", "col_hi", "integer"):
            getattr(self, attr).setflags(write=False)
        n_rows, n_cols = self.A.shape
        if self.c.shape != (n_cols,) or self.col_lo.shape != (n_cols,) or self.integer.shape != (n_cols,):
            raise ModelError("column arrays do not match the constraint matrix")
        if self.row_lo.shape != (n_rows,) or self.row_hi.shape != (n_rows,):
            raise ModelError("row arrays do not match the constraint matrix")
        if np.any(self.col_lo > self.col_hi):
            raise ModelError("column with lower bound above upper bound")
        if np.any(self.row_lo > self.row_hi):
            raise ModelError("row with lower side above upper side")
        ints = self.integer
        if np.any(~np.isfinite(self.col_lo[ints])) or np.any(~np.isfinite(self.col_hi[ints])):
            raise ModelError("integer columns need finite bounds")

    @property
    def n_rows(self) -> int:
        return self.A.shape[0]

    @property
    def n_cols(self) -> int:
        return self.A.shape[1]

    @property
    def is_mip(self) -> bool:
        return bool(self.integer.any())

    def sense(self, i: int) -> str:
        lo, hi = self.row_lo[i], self.row_hi[i]
        if lo == hi:
            return "="
        if np.isinf(lo):
            return "<="
        if np.isinf(hi):
            return ">="
        return "range"

    def relaxation(self) -> "MilpModel":
        return self.with_bounds(integer=np.zeros(self.n_cols, dtype=bool))

    def with_bounds(self, col_lo=None, col_hi=None, integer=None) -> "MilpModel":
        return MilpModel(
            self.c,
            self.A,
            self.row_lo,
            self.row_hi,
            np.array(self.col_lo if col_lo is None else col_lo, dtype=float),
            np.array(self.col_hi if col_hi is None else col_hi, dtype=float),
            np.array(self.integer if integer is None else integer, dtype=bool),
            self.col_names,
            self.row_names,
            self.name,
        )

    def permute_rows(self, order) -> "MilpModel":
        order = np.asarray(order)
        names = tuple(self.row_names[i] for i in order) if self.row_names else ()
        return MilpModel(
            self.c, self.A[order], self.row_lo[order].copy(), self.row_hi[order].copy(),
            self.col_lo.copy(), self.col_hi.copy(), self.integer.copy(), self.col_names, names, self.name,
        )

    def max_violation(self, x) -> float:
        """Largest row or bound violation at ``x``."""
        x = np.asarray(x, dtype=float)
        ax = self.A @ x
        worst = 0.0
        for viol in (self.row_lo - ax, ax - self.row_hi, self.col_lo - x, x - self.col_hi):
            finite = viol[np.isfinite(viol)]
            if finite.size:
                worst = max(worst, float(finite.max()))
        return worst

    def row_count(self, prefix: str) -> int:
        """Rows whose label starts with ``prefix``."""
        return sum(1 for nm in self.row_names if nm.startswith(prefix))

    def col_count(self, prefix: str) -> int:
        return sum(1 for nm in self.col_names if nm.startswith(prefix))


@dataclass
class Solution:
    status: Status
    objective: float = float("nan")
    values: Optional[np.ndarray] = None
    best_bound: float = float("nan")
    gap: float = float("nan")
    nodes: int = 0
    pivots: int = 0
    backend: str = ""
    # (best_bound, incumbent) after every processed branch-and-bound node
    node_trace: list[tuple[float, float]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status.has_solution


def relative_gap(incumbent: float, bound: float) -> float:
    if not np.isfinite(incumbent) or not np.isfinite(bound):
        return INF
    return max(0.0, incumbent - bound) / max(1.0, abs(incumbent))


class ModelBuilder:
    """Incremental assembly of a :class:`MilpModel`."""

    def __init__(self, name: str = "model"):
        self.name = name
        self._c: list[float] = []
        self._lo: list[float] = []
        self._hi: list[float] = []
        self._int: list[bool] = []
        self._col_names: list[str] = []
        self._rows: list[int] = []
        self._cols: list[int] = []
        self._vals: list[float] = []
        self._row_lo: list[float] = []
        self._row_hi: list[float] = []
        self._row_names: list[str] = []

    @property
    def n_cols(self) -> int:
        return len(self._c)

    @property
    def n_rows(self) -> int:
        return len(self._row_lo)

    def add_var(self, name: str, lo: float = 0.0, hi: float = INF, cost: float = 0.0, integer: bool = False) -> int:
        self._c.append(float(cost))
        self._lo.append(float(lo))
        self._hi.append(float(hi))
        self._int.append(bool(integer))
        self._col_names.append(name)
        return len(self._c) - 1

    def add_binary(self, name: str, cost: float = 0.0) -> int:
        return self.add_var(name, 0.0, 1.0, cost, integer=True)

    def add_cost(self, col: int, cost: float) -> None:
        self._c[col] += cost

    def set_bounds(self, col: int, lo: float, hi: float) -> None:
        self._lo[col] = float(lo)
        self._hi[col] = float(hi)

    def add_row(self, terms, sense: str, rhs: float, name: str = "") -> int:
        """Append ``sum(coef * x[col]) <sense> rhs``; repeated columns are summed.

        ``terms`` is a dict or an iterable of ``(col, coef)`` pairs.
        """
        if sense in ("<=", "L"):
            lo, hi = -INF, rhs
        elif sense in (">=", "G"):
            lo, hi = rhs, INF
        elif sense in ("=", "==", "E"):
            lo = hi = rhs
        else:
            raise ModelError(f"unknown row sense {sense!r}")
        return self.add_range(terms, lo, hi, name)

    def add_range(self, terms, lo: float, hi: float, name: str = "") -> int:
        i = len(self._row_lo)
        n = len(self._c)
        if isinstance(terms, dict):
            terms = terms.items()
        for col, coef in terms:
            if not 0 <= col < n:
                raise ModelError(f"row {name or i}: column index {col} out of range")
            if coef != 0.0:
                self._rows.append(i)
                self._cols.append(col)
                self._vals.append(float(coef))
        self._row_lo.append(float(lo))
        self._row_hi.append(float(hi))
        self._row_names.append(name or f"r{i}")
        return i

    def build(self) -> MilpModel:
        n, m = len(self._c), len(self._row_lo)
        A = sp.csr_matrix((self._vals, (self._rows, self._cols)), shape=(m, n))
        A.sum_duplicates()
        return MilpModel(
            np.array(self._c, dtype=float),
            A,
            np.array(self._row_lo, dtype=float),
            np.array(self._row_hi, dtype=float),
            np.array(self._lo, dtype=float),
            np.array(self._hi, dtype=float),
            np.array(self._int, dtype=bool),
            tuple(self._col_names),
            tuple(self._row_names),
            self.name,
        )
