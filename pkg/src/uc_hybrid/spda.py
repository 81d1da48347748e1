"""Scenario partition and decomposition: per-partition column-and-constraint
generation followed by a hybrid solve over the retained scenarios."""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .clustering import PartitionMap, cluster_scenarios
from .evaluation import dispatch_cost
from .formulations import Formulation, build_huc, build_master, build_ruc, build_suc
from .milp import Solution, solve_milp
from .parallel import ordered_map
from .system import CommitmentPlan, PowerSystem, ScenarioSet

FORMULATIONS = ("suc", "ruc", "huc")


class MaxIterations(RuntimeError):
    """CCG hit its iteration cap; ``partial`` holds the ReducedSet so far."""

    def __init__(self, partial: "ReducedSet"):
        super().__init__(f"partition {partial.partition + 1}: no convergence in {len(partial.trace.records)} iterations")
        self.partial = partial


class SolverFailure(RuntimeError):
    def __init__(self, message: str, solution: Optional[Solution] = None):
        super().__init__(message)
        self.solution = solution


def default_epsilon(best_ub: float) -> float:
    return 1e-4 * (1.0 + abs(best_ub))


@dataclass(frozen=True)
class CcgIteration:
    iteration: int
    lb: float
    ub: float
    best_ub: float
    selected: int  # scenario index of the worst subproblem
    added: bool
    master_status: str
    subproblem_costs: tuple[float, ...]
    master_ms: float = 0.0
    subproblems_ms: float = 0.0


@dataclass
class CcgTrace:
    partition: int
    members: tuple[int, ...]
    epsilon: Optional[float]
    records: list[CcgIteration] = field(default_factory=list)
    converged: bool = False
    stalled: bool = False

    def to_jsonl(self, labels: Optional[Sequence[str]] = None) -> str:
        lines = []
        for r in self.records:
            sel = labels[r.selected] if labels else r.selected
            lines.append(json.dumps({
                "partition": self.partition + 1, "iter": r.iteration, "lb": r.lb, "ub": r.ub,
                "best_ub": r.best_ub, "selected_scenario": sel,
                "master_ms": round(r.master_ms, 3), "subproblems_ms": round(r.subproblems_ms, 3),
            }))
        return "\n".join(lines) + ("\n" if lines else "")


@dataclass
class ReducedSet:
    partition: int
    retained: tuple[int, ...]
    trace: CcgTrace

    @property
    def converged(self) -> bool:
        return self.trace.converged


@dataclass
class SpdaResult:
    plan: CommitmentPlan
    objective: float
    partition: PartitionMap
    reduced: list[ReducedSet]
    solution: Solution
    timings: dict[str, float]
    partial: bool = False

    @property
    def retained_count(self) -> int:
        return sum(len(r.retained) for r in self.reduced)

    def retained_sets(self) -> list[tuple[int, ...]]:
        return [r.retained for r in self.reduced]


def _worst(costs: Sequence[float]) -> int:
    """Position of the largest cost; near-ties go to the lowest position."""
    top = max(costs)
    tol = 1e-9 * max(1.0, abs(top))
    return next(i for i, c in enumerate(costs) if c >= top - tol)


def run_ccg(
    system: PowerSystem,
    scenarios: ScenarioSet,
    members: Sequence[int],
    partition: int = 0,
    epsilon: Optional[float] = None,
    rel_gap: float = 0.0,
    max_iter: Optional[int] = None,
    workers: int = 1,
    backend: Optional[str] = None,
    time_limit: Optional[float] = None,
) -> ReducedSet:
    """Find the scenarios of one partition that fix its worst-case dispatch cost.

    ``epsilon=None`` uses the relative default ``1e-4 * (1 + |best_ub|)``.
    Stops on ``|best_ub - lb| <= epsilon``, or flags a stall when the worst
    scenario is already retained (possible only with a positive master gap).
    """
    members = list(members)
    if not members:
        raise ValueError("partition has no scenarios")
    if epsilon is not None and epsilon < 0:
        raise ValueError("epsilon must be non-negative")
    cap = len(members) + 2 if max_iter is None else max_iter
    trace = CcgTrace(partition, tuple(members), epsilon)
    retained: list[int] = []
    best_ub = math.inf

    for i in range(cap):
        t0 = time.perf_counter()
        master = build_master(system, scenarios, retained, partition)
        sol = solve_milp(master.model, rel_gap, time_limit, backend)
        if sol.values is None:
            raise SolverFailure(f"master of partition {partition + 1} ended {sol.status.value}", sol)
        plan = master.plan(sol)
        lb = sol.objective
        t1 = time.perf_counter()
        costs = ordered_map(lambda w: dispatch_cost(system, scenarios, w, plan, backend), members, workers)
        t2 = time.perf_counter()

        pos = _worst(costs)
        chosen = members[pos]
        ub = plan.commitment_cost(system) + costs[pos]
        best_ub = min(best_ub, ub)
        tol = default_epsilon(best_ub) if epsilon is None else epsilon
        done = abs(best_ub - lb) <= tol
        repeat = chosen in retained
        # an empty reduced set would leave the partition unconstrained later
        add = not repeat and (not done or not retained)
        if add:
            retained.append(chosen)
        trace.records.append(CcgIteration(
            i, lb, ub, best_ub, chosen, add, sol.status.value, tuple(costs),
            (t1 - t0) * 1e3, (t2 - t1) * 1e3,
        ))
        if done:
            trace.converged = True
            break
        if repeat:
            trace.stalled = True
            break
    else:
        raise MaxIterations(ReducedSet(partition, tuple(retained), trace))
    return ReducedSet(partition, tuple(retained), trace)


def run_spda(
    system: PowerSystem,
    scenarios: ScenarioSet,
    k: int,
    seed: int = 0,
    epsilon: Optional[float] = None,
    rel_gap: float = 0.0,
    workers: int = 1,
    backend: Optional[str] = None,
    time_limit: Optional[float] = None,
    partition: Optional[PartitionMap] = None,
) -> SpdaResult:
    """Cluster into ``k`` partitions, reduce each by CCG, then solve the reduced hybrid model.

    Partitions run concurrently on ``workers`` threads; a partition's
    subproblems share what is left. Results do not depend on ``workers``.
    """
    timings: dict[str, float] = {}
    t0 = time.perf_counter()
    pm = partition if partition is not None else cluster_scenarios(scenarios, k, seed)
    timings["cluster_ms"] = (time.perf_counter() - t0) * 1e3

    outer = max(1, min(workers, pm.k))
    inner = max(1, workers // outer)
    members = pm.members()

    def reduce(p: int):
        try:
            return run_ccg(system, scenarios, members[p], p, epsilon, rel_gap, None, inner, backend, time_limit), False
        except MaxIterations as exc:
            return exc.partial, True

    t1 = time.perf_counter()
    outcomes = ordered_map(reduce, range(pm.k), outer)
    timings["ccg_ms"] = (time.perf_counter() - t1) * 1e3
    reduced = [r for r, _ in outcomes]
    partial = any(flag for _, flag in outcomes)
    for r in reduced:
        timings[f"ccg_p{r.partition + 1}_ms"] = sum(x.master_ms + x.subproblems_ms for x in r.trace.records)

    t2 = time.perf_counter()
    final = build_huc(system, scenarios, pm, reduced=[r.retained for r in reduced])
    sol = solve_milp(final.model, rel_gap, time_limit, backend)
    timings["final_ms"] = (time.perf_counter() - t2) * 1e3
    timings["total_ms"] = (time.perf_counter() - t0) * 1e3
    if sol.values is None:
        raise SolverFailure(f"reduced hybrid solve ended {sol.status.value}", sol)
    return SpdaResult(final.plan(sol), sol.objective, pm, reduced, sol, timings, partial)


@dataclass
class ExtensiveResult:
    plan: CommitmentPlan
    objective: float
    solution: Solution
    formulation: Formulation
    partition: Optional[PartitionMap] = None


def build_extensive(system, scenarios, formulation: str, k: Optional[int] = None, seed: int = 0,
                    partition: Optional[PartitionMap] = None):
    if formulation == "suc":
        return build_suc(system, scenarios), None
    if formulation == "ruc":
        return build_ruc(system, scenarios), None
    if formulation == "huc":
        if partition is None:
            if k is None:
                raise ValueError("hybrid formulation needs k or a partition map")
            partition = cluster_scenarios(scenarios, k, seed)
        return build_huc(system, scenarios, partition), partition
    raise ValueError(f"unknown formulation {formulation!r}; choose from {FORMULATIONS}")


def solve_extensive(
    system: PowerSystem,
    scenarios: ScenarioSet,
    formulation: str,
    k: Optional[int] = None,
    seed: int = 0,
    rel_gap: float = 0.0,
    time_limit: Optional[float] = None,
    backend: Optional[str] = None,
    partition: Optional[PartitionMap] = None,
) -> ExtensiveResult:
    """Build the full SUC, RUC or HUC model and solve it in one piece."""
    form, pm = build_extensive(system, scenarios, formulation, k, seed, partition)
    sol = solve_milp(form.model, rel_gap, time_limit, backend)
    if sol.values is None:
        raise SolverFailure(f"{formulation} solve ended {sol.status.value}", sol)
    return ExtensiveResult(form.plan(sol), sol.objective, sol, form, pm)
