"""Cost of a fixed commitment plan over a scenario set."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .formulations import build_subproblem
from .milp import Solution, Status, solve_lp
from .parallel import ordered_map
from .system import CommitmentPlan, DispatchSolution, PowerSystem, ScenarioSet


class InfeasiblePlan(RuntimeError):
    """A dispatch LP came back infeasible; shedding and spill make that a modelling bug."""


@dataclass(frozen=True)
class PlanEvaluation:
    commitment_cost: float  # CCD
    dispatch_costs: tuple[float, ...]
    etc: float
    wctc: float

    def to_dict(self) -> dict:
        return {
            "ccd": self.commitment_cost,
            "dispatch_costs": list(self.dispatch_costs),
            "etc": self.etc,
            "wctc": self.wctc,
        }


def dispatch(system: PowerSystem, scenarios: ScenarioSet, w: int, plan: CommitmentPlan,
             backend: str | None = None) -> tuple[DispatchSolution, Solution]:
    sub = build_subproblem(system, scenarios, w, plan)
    sol = solve_lp(sub.model, backend)
    if sol.status is not Status.OPTIMAL:
        raise InfeasiblePlan(f"dispatch LP for scenario {scenarios.labels[w]} ended {sol.status.value}")
    return sub.dispatch(sol, w), sol


def dispatch_cost(system: PowerSystem, scenarios: ScenarioSet, w: int, plan: CommitmentPlan,
                  backend: str | None = None) -> float:
    return dispatch(system, scenarios, w, plan, backend)[1].objective


def evaluate_plan(system: PowerSystem, scenarios: ScenarioSet, plan: CommitmentPlan,
                  workers: int = 1, backend: str | None = None) -> PlanEvaluation:
    """CCD, per-scenario dispatch cost, expected (ETC) and worst-case (WCTC) totals."""
    costs = ordered_map(lambda w: dispatch_cost(system, scenarios, w, plan, backend), range(scenarios.count), workers)
    ccd = plan.commitment_cost(system)
    probs = np.asarray(scenarios.probabilities, dtype=float)
    expected = float(probs @ np.array(costs)) / float(probs.sum())
    return PlanEvaluation(ccd, tuple(costs), ccd + expected, ccd + max(costs))
