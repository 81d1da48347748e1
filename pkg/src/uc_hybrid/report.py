"""Solve reports, frontier sweeps and their serialisations."""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .clustering import PartitionMap
from .evaluation import PlanEvaluation, evaluate_plan
from .spda import MaxIterations, SolverFailure, run_spda, solve_extensive
from .system import CommitmentPlan, PowerSystem, ScenarioSet

FRONTIER_COLUMNS = ("k", "etc_usd", "wctc_usd", "retained", "wall_ms", "status")
SUMMARY_COLUMNS = ("UCP", "CCD [$]", "k", "ETC [$]", "WCTC [$]")


def _finite(x) -> Optional[float]:
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


@dataclass
class SolveReport:
    instance: dict
    formulation: str
    method: str
    parameters: dict
    status: str
    objective: Optional[float]
    schedule: dict  # generator id -> "0110..." on/off string
    ccd: float
    etc: float
    wctc: float
    dispatch_costs: list
    partition: Optional[dict] = None
    retained: list = field(default_factory=list)  # scenario labels per partition
    timings: dict = field(default_factory=dict)
    solver: dict = field(default_factory=dict)
    partial: bool = False
    label: str = ""

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, doc: dict) -> "SolveReport":
        return cls(**doc)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False)

    @classmethod
    def from_json(cls, text: str) -> "SolveReport":
        return cls.from_dict(json.loads(text))

    def save(self, path) -> None:
        Path(path).write_text(self.to_json() + "\n")

    @classmethod
    def load(cls, path) -> "SolveReport":
        return cls.from_json(Path(path).read_text())

    def plan(self, system: PowerSystem) -> CommitmentPlan:
        on = np.array([[int(ch) for ch in self.schedule[g.id]] for g in system.generators], dtype=np.int8)
        return CommitmentPlan.from_on(system, on)

    @property
    def k(self):
        return self.parameters.get("k")


def build_report(
    system: PowerSystem,
    scenarios: ScenarioSet,
    plan: CommitmentPlan,
    *,
    formulation: str,
    method: str,
    parameters: dict,
    status: str,
    objective: Optional[float],
    evaluation: Optional[PlanEvaluation] = None,
    partition: Optional[PartitionMap] = None,
    retained: Sequence[Sequence[int]] = (),
    timings: Optional[dict] = None,
    solver: Optional[dict] = None,
    partial: bool = False,
    instance: Optional[dict] = None,
    label: str = "",
    workers: int = 1,
    backend: Optional[str] = None,
) -> SolveReport:
    """Assemble a report; ETC and WCTC are always taken over the full scenario set."""
    ev = evaluation if evaluation is not None else evaluate_plan(system, scenarios, plan, workers, backend)
    meta = {
        "horizon": system.horizon,
        "nodes": len(system.nodes),
        "generators": len(system.generators),
        "lines": len(system.lines),
        "scenarios": scenarios.count,
    }
    meta.update(instance or {})
    return SolveReport(
        instance=meta,
        formulation=formulation,
        method=method,
        parameters=dict(parameters),
        status=status,
        objective=_finite(objective),
        schedule={g.id: row for g, row in zip(system.generators, plan.to_grid())},
        ccd=ev.commitment_cost,
        etc=ev.etc,
        wctc=ev.wctc,
        dispatch_costs=list(ev.dispatch_costs),
        partition=partition.to_dict() if partition is not None else None,
        retained=[[scenarios.labels[w] for w in r] for r in retained],
        timings={k: round(float(v), 3) for k, v in (timings or {}).items()},
        solver={k: (_finite(v) if isinstance(v, float) else v) for k, v in (solver or {}).items()},
        partial=partial,
        label=label or formulation.upper(),
    )


def replay(report: SolveReport, system: PowerSystem, scenarios: ScenarioSet, backend: Optional[str] = None) -> PlanEvaluation:
    """Re-evaluate the plan embedded in ``report`` against its inputs."""
    return evaluate_plan(system, scenarios, report.plan(system), backend=backend)


def solve(
    system: PowerSystem,
    scenarios: ScenarioSet,
    formulation: str = "huc",
    method: str = "extensive",
    k: Optional[int] = None,
    seed: int = 0,
    epsilon: Optional[float] = None,
    rel_gap: float = 0.0,
    workers: int = 1,
    time_limit: Optional[float] = None,
    backend: Optional[str] = None,
    instance: Optional[dict] = None,
    label: str = "",
):
    """Run one solve and return ``(report, raw_result)``.

    ``method="spda"`` applies to the hybrid model; SUC and RUC are mapped to
    their hybrid equivalents (k equal to the scenario count, or k=1).
    """
    params = {"k": k, "seed": seed, "epsilon": epsilon, "rel_gap": rel_gap, "workers": workers,
              "backend": backend, "time_limit": time_limit}
    start = time.perf_counter()
    if method == "spda":
        if formulation == "suc":
            k = scenarios.count
        elif formulation == "ruc":
            k = 1
        if k is None:
            raise ValueError("spda needs a partition count")
        params["k"] = k
        res = run_spda(system, scenarios, k, seed, epsilon, rel_gap, workers, backend, time_limit)
        sol = res.solution
        timings = dict(res.timings)
        retained = res.retained_sets()
        partition = res.partition
        partial = res.partial
        plan, objective = res.plan, res.objective
        solver = {"nodes": sol.nodes, "pivots": sol.pivots, "backend": sol.backend, "gap": sol.gap,
                  "best_bound": sol.best_bound,
                  "ccg_iterations": [len(r.trace.records) for r in res.reduced],
                  "ccg_stalled": [r.trace.stalled for r in res.reduced]}
    elif method == "extensive":
        res = solve_extensive(system, scenarios, formulation, k, seed, rel_gap, time_limit, backend)
        sol = res.solution
        timings = {}
        partition = res.partition
        retained = partition.members() if partition is not None else [list(range(scenarios.count))]
        partial = False
        plan, objective = res.plan, res.objective
        solver = {"nodes": sol.nodes, "pivots": sol.pivots, "backend": sol.backend, "gap": sol.gap,
                  "best_bound": sol.best_bound}
        if partition is not None:
            params["k"] = partition.k
    else:
        raise ValueError(f"unknown method {method!r}")
    timings["solve_ms"] = (time.perf_counter() - start) * 1e3
    report = build_report(
        system, scenarios, plan, formulation=formulation, method=method, parameters=params,
        status=sol.status.value, objective=objective, partition=partition, retained=retained,
        timings=timings, solver=solver, partial=partial, instance=instance, label=label,
        workers=workers, backend=backend,
    )
    return report, res


def summary_table(reports: Sequence[SolveReport]) -> str:
    rows = [SUMMARY_COLUMNS]
    for r in reports:
        k = r.parameters.get("k")
        rows.append((r.label, f"{r.ccd:.2f}", "-" if k is None else str(k), f"{r.etc:.2f}", f"{r.wctc:.2f}"))
    widths = [max(len(row[i]) for row in rows) for i in range(len(SUMMARY_COLUMNS))]
    lines = ["  ".join(cell.rjust(w) for cell, w in zip(row, widths)) for row in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


@dataclass
class FrontierRow:
    k: int
    etc_usd: Optional[float]
    wctc_usd: Optional[float]
    retained: Optional[int]
    wall_ms: float
    status: str


def frontier(
    system: PowerSystem,
    scenarios: ScenarioSet,
    k_list: Sequence[int],
    seed: int = 0,
    epsilon: Optional[float] = None,
    rel_gap: float = 0.0,
    workers: int = 1,
    time_limit: Optional[float] = None,
    backend: Optional[str] = None,
    method: str = "spda",
) -> list[FrontierRow]:
    """ETC/WCTC of the hybrid plan for each k; failures become status rows."""
    rows = []
    for k in k_list:
        t0 = time.perf_counter()
        try:
            report, _ = solve(system, scenarios, "huc", method, k, seed, epsilon, rel_gap, workers, time_limit, backend)
        except (MaxIterations, SolverFailure, ValueError) as exc:
            rows.append(FrontierRow(k, None, None, None, (time.perf_counter() - t0) * 1e3, f"error: {exc}"))
            continue
        retained = sum(len(r) for r in report.retained)
        rows.append(FrontierRow(k, report.etc, report.wctc, retained, (time.perf_counter() - t0) * 1e3, report.status))
    return rows


def frontier_csv(rows: Sequence[FrontierRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(FRONTIER_COLUMNS)
    for r in rows:
        w.writerow([r.k, "" if r.etc_usd is None else repr(r.etc_usd), "" if r.wctc_usd is None else repr(r.wctc_usd),
                    "" if r.retained is None else r.retained, f"{r.wall_ms:.1f}", r.status])
    return buf.getvalue()
