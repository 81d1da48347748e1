"""LP/MILP kernel: model container, native simplex and branch and bound, HiGHS backend.

``backend="auto"`` runs the native kernel on models up to
:data:`NATIVE_SIZE_LIMIT` rows plus columns and HiGHS above that; the
native dense-basis simplex is cubic in the row count and is only practical
at that scale.
"""

from __future__ import annotations

import os

from .branch_bound import solve_milp_native
from .highs import solve_highs
from .lpfile import write_lp
from .model import FEAS_TOL, INF, INT_TOL, MilpModel, ModelBuilder, ModelError, Solution, Status, relative_gap
from .simplex import solve_lp_native

NATIVE_SIZE_LIMIT = 1500
BACKENDS = ("auto", "native", "highs")

__all__ = [
    "BACKENDS",
    "FEAS_TOL",
    "INF",
    "INT_TOL",
    "MilpModel",
    "ModelBuilder",
    "ModelError",
    "NATIVE_SIZE_LIMIT",
    "Solution",
    "Status",
    "relative_gap",
    "resolve_backend",
    "solve_lp",
    "solve_milp",
    "write_lp",
]


def resolve_backend(model: MilpModel, backend: str | None = None) -> str:
    backend = backend or os.environ.get("UC_HYBRID_BACKEND", "auto")
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}; choose from {BACKENDS}")
    if backend == "auto":
        return "native" if model.n_rows + model.n_cols <= NATIVE_SIZE_LIMIT else "highs"
    return backend


def solve_lp(model: MilpModel, backend: str | None = None) -> Solution:
    """Solve the LP relaxation (integrality flags are ignored)."""
    if resolve_backend(model, backend) == "native":
        return solve_lp_native(model)
    return solve_highs(model, integral=False)


def solve_milp(model: MilpModel, rel_gap: float = 0.0, time_limit: float | None = None, backend: str | None = None) -> Solution:
    if rel_gap < 0:
        raise ValueError("rel_gap must be non-negative")
    if resolve_backend(model, backend) == "native":
        return solve_milp_native(model, rel_gap, time_limit)
    return solve_highs(model, rel_gap, time_limit)
