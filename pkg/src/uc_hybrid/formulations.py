"""MILP builders for the stochastic, robust and hybrid unit-commitment models.

All builders share one constraint core: the first-stage commitment logic and,
per scenario, the DC-network dispatch block. They differ only in how the
scenario dispatch costs enter the objective:

* SUC: probability-weighted sum;
* RUC: a single epigraph variable ``alpha`` over all scenarios;
* HUC: one epigraph variable ``theta(p)`` per partition, weighted by the
  partition probability;
* CCG master: one ``theta`` over the retained scenarios of a partition.

Row and column labels follow ``family(args)``, e.g. ``u(g1,3)`` or
``balance(n5,3,w2)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .clustering import PartitionMap
from .milp import INF, MilpModel, ModelBuilder, Solution
from .system import CommitmentPlan, DispatchSolution, PowerSystem, ScenarioSet, initial_status

FIRST_STAGE = ("u", "y", "z")


class VariableIndex:
    """Bidirectional map between symbolic keys and column indices.

    Keys are tuples such as ``("u", g, t)``, ``("P", g, t, w)`` or
    ``("theta", p)`` with zero-based integer positions.
    """

    def __init__(self):
        self._col: dict[tuple, int] = {}
        self._key: dict[int, tuple] = {}

    def add(self, key: tuple, col: int) -> int:
        if key in self._col:
            raise KeyError(f"duplicate variable {key}")
        self._col[key] = col
        self._key[col] = key
        return col

    def __getitem__(self, key: tuple) -> int:
        return self._col[key]

    def __contains__(self, key) -> bool:
        return key in self._col

    def __len__(self):
        return len(self._col)

    def key(self, col: int) -> tuple:
        return self._key[col]

    def count(self, family: str) -> int:
        return sum(1 for k in self._col if k[0] == family)


@dataclass(frozen=True)
class Formulation:
    kind: str
    model: MilpModel
    index: VariableIndex
    system: PowerSystem
    scenario_ids: tuple[int, ...]
    # epigraph column per partition for HUC/master, or alpha for RUC
    worst_case_cols: tuple[int, ...] = ()

    def plan(self, solution: Solution) -> CommitmentPlan:
        x = solution.values
        G, T = len(self.system.generators), self.system.horizon
        arrays = []
        for fam in FIRST_STAGE:
            cols = [[self.index[(fam, g, t)] for t in range(T)] for g in range(G)]
            arrays.append(np.rint(x[np.array(cols, dtype=int).reshape(G, T)]) if G else np.zeros((0, T)))
        return CommitmentPlan(*arrays)

    def dispatch(self, solution: Solution, w: int) -> DispatchSolution:
        return _extract_dispatch(self.system, self.index, solution.values, w)


def _extract_dispatch(system: PowerSystem, index: VariableIndex, x: np.ndarray, w: int) -> DispatchSolution:
    T = system.horizon

    def grab(fam, n):
        return np.array([[x[index[(fam, i, t, w)]] for t in range(T)] for i in range(n)]).reshape(n, T)

    power = grab("P", len(system.generators))
    shed = grab("shed", len(system.loads))
    cost = float(
        sum(g.variable_cost * power[i].sum() for i, g in enumerate(system.generators))
        + system.shed_cost * shed.sum()
    )
    return DispatchSolution(power, shed, grab("spill", len(system.wind_farms)), grab("delta", len(system.nodes)), cost)


class _CoreBuilder:
    """Shared constraint core; first-stage terms are columns or plan constants."""

    def __init__(self, system: PowerSystem, scenarios: ScenarioSet, name: str, plan: Optional[CommitmentPlan] = None):
        self.system = system
        self.scenarios = scenarios
        self.plan = plan
        self.b = ModelBuilder(name)
        self.index = VariableIndex()
        self.T = system.horizon
        self.node_pos = {n: i for i, n in enumerate(system.nodes)}
        self.demand = system.demand_matrix()

    # -- helpers -----------------------------------------------------------
    def _var(self, key, label, lo=0.0, hi=INF, cost=0.0, integer=False):
        return self.index.add(key, self.b.add_var(label, lo, hi, cost, integer))

    def _u_terms(self, g: int, t: int, coef: float, terms: list, rhs: float) -> float:
        """Add ``coef * u[g,t]`` to ``terms`` or, with a fixed plan, move it to the rhs."""
        if self.plan is None:
            terms.append((self.index[("u", g, t)], coef))
            return rhs
        return rhs - coef * float(self.plan.on[g, t])

    # -- first stage -------------------------------------------------------
    def add_first_stage(self) -> None:
        sys_, T, b = self.system, self.T, self.b
        for g, gen in enumerate(sys_.generators):
            st = initial_status(gen, T)
            for t in range(T):
                tag = f"{gen.id},{t + 1}"
                u = self._var(("u", g, t), f"u({tag})", 0.0, 1.0, gen.fixed_cost, True)
                if t < st.fixed_periods:
                    b.set_bounds(u, st.on, st.on)
                self._var(("y", g, t), f"y({tag})", 0.0, 1.0, gen.startup_cost, True)
                self._var(("z", g, t), f"z({tag})", 0.0, 1.0, gen.shutdown_cost, True)
            idx = self.index
            for t in range(T):
                tag = f"{gen.id},{t + 1}"
                terms = [(idx[("y", g, t)], 1.0), (idx[("z", g, t)], -1.0), (idx[("u", g, t)], -1.0)]
                if t == 0:
                    b.add_row(terms, "=", -float(st.on), f"logic({tag})")
                else:
                    b.add_row(terms + [(idx[("u", g, t - 1)], 1.0)], "=", 0.0, f"logic({tag})")
                b.add_row([(idx[("y", g, t)], 1.0), (idx[("z", g, t)], 1.0)], "<=", 1.0, f"excl({tag})")
            for t in range(st.fixed_periods, T):
                tag = f"{gen.id},{t + 1}"
                window = range(max(0, t - gen.min_up + 1), t + 1)
                b.add_row([(idx[("y", g, s)], 1.0) for s in window] + [(idx[("u", g, t)], -1.0)], "<=", 0.0, f"minup({tag})")
                window = range(max(0, t - gen.min_down + 1), t + 1)
                b.add_row([(idx[("z", g, s)], 1.0) for s in window] + [(idx[("u", g, t)], 1.0)], "<=", 1.0, f"mindn({tag})")

    # -- second stage ------------------------------------------------------
    def add_scenario(self, w: int, weight: float = 0.0) -> list[tuple[int, float]]:
        """Emit the dispatch block of scenario ``w``; returns its dispatch-cost terms.

        ``weight`` multiplies the dispatch cost into the objective directly
        (SUC); epigraph formulations pass 0 and use the returned terms.
        """
        sys_, T, b, idx = self.system, self.T, self.b, self.index
        wl = self.scenarios.labels[w]
        wind = self.scenarios.values[:, :, w]
        cost_terms: list[tuple[int, float]] = []

        for g, gen in enumerate(sys_.generators):
            for t in range(T):
                col = self._var(("P", g, t, w), f"P({gen.id},{t + 1},{wl})", 0.0, INF, weight * gen.variable_cost)
                cost_terms.append((col, gen.variable_cost))
        for l, load in enumerate(sys_.loads):
            for t in range(T):
                col = self._var(("shed", l, t, w), f"shed({load.id},{t + 1},{wl})", 0.0, float(self.demand[l, t]),
                                weight * sys_.shed_cost)
                cost_terms.append((col, sys_.shed_cost))
        for f, farm in enumerate(sys_.wind_farms):
            for t in range(T):
                self._var(("spill", f, t, w), f"spill({farm.id},{t + 1},{wl})", 0.0, float(wind[f, t]))
        for n, node in enumerate(sys_.nodes):
            fixed = node == sys_.ref
            for t in range(T):
                self._var(("delta", n, t, w), f"delta({node},{t + 1},{wl})", 0.0 if fixed else -INF, 0.0 if fixed else INF)

        # nodal balance, flows leaving each node on the right-hand side
        for t in range(T):
            terms_by_node: list[list] = [[] for _ in sys_.nodes]
            rhs = np.zeros(len(sys_.nodes))
            for g, gen in enumerate(sys_.generators):
                terms_by_node[self.node_pos[gen.node]].append((idx[("P", g, t, w)], 1.0))
            for l, load in enumerate(sys_.loads):
                n = self.node_pos[load.node]
                terms_by_node[n].append((idx[("shed", l, t, w)], 1.0))
                rhs[n] += self.demand[l, t]
            for f, farm in enumerate(sys_.wind_farms):
                n = self.node_pos[farm.node]
                terms_by_node[n].append((idx[("spill", f, t, w)], -1.0))
                rhs[n] -= wind[f, t]
            for line in sys_.lines:
                a, c = self.node_pos[line.from_node], self.node_pos[line.to_node]
                k = sys_.base_mva / line.reactance
                da, dc = idx[("delta", a, t, w)], idx[("delta", c, t, w)]
                terms_by_node[a] += [(da, -k), (dc, k)]
                terms_by_node[c] += [(dc, -k), (da, k)]
            for n, node in enumerate(sys_.nodes):
                b.add_row(terms_by_node[n], "=", float(rhs[n]), f"balance({node},{t + 1},{wl})")

        for g, gen in enumerate(sys_.generators):
            for t in range(T):
                tag = f"{gen.id},{t + 1},{wl}"
                p = idx[("P", g, t, w)]
                terms = [(p, 1.0)]
                rhs = self._u_terms(g, t, -gen.p_max, terms, 0.0)
                b.add_row(terms, "<=", rhs, f"pmax({tag})")
                terms = [(p, 1.0)]
                rhs = self._u_terms(g, t, -gen.p_min, terms, 0.0)
                b.add_row(terms, ">=", rhs, f"pmin({tag})")
            # first period ramps against the initial output
            tag = f"{gen.id},1,{wl}"
            p1 = idx[("P", g, 0, w)]
            terms = [(p1, 1.0)]
            rhs = self._u_terms(g, 0, -(gen.initial_power + gen.ramp_up), terms, 0.0)
            b.add_row(terms, "<=", rhs, f"rampup0({tag})")
            terms = [(p1, 1.0)]
            rhs = self._u_terms(g, 0, -(gen.initial_power - gen.ramp_down), terms, 0.0)
            b.add_row(terms, ">=", rhs, f"rampdn0({tag})")
            for t in range(1, T):
                tag = f"{gen.id},{t + 1},{wl}"
                p, pp = idx[("P", g, t, w)], idx[("P", g, t - 1, w)]
                su, ru = gen.startup_ramp, gen.ramp_up
                terms = [(p, 1.0), (pp, -1.0)]
                rhs = 2 * su + ru
                rhs = self._u_terms(g, t - 1, su - ru, terms, rhs)
                rhs = self._u_terms(g, t, su + ru, terms, rhs)
                b.add_row(terms, "<=", rhs, f"rampup({tag})")
                sd, rd = gen.shutdown_ramp, gen.ramp_down
                terms = [(pp, 1.0), (p, -1.0)]
                rhs = 2 * sd + rd
                rhs = self._u_terms(g, t - 1, sd + rd, terms, rhs)
                rhs = self._u_terms(g, t, sd - rd, terms, rhs)
                b.add_row(terms, "<=", rhs, f"rampdn({tag})")

        for line in sys_.lines:
            a, c = self.node_pos[line.from_node], self.node_pos[line.to_node]
            k = sys_.base_mva / line.reactance
            for t in range(T):
                b.add_range(
                    [(idx[("delta", a, t, w)], k), (idx[("delta", c, t, w)], -k)],
                    -line.capacity,
                    line.capacity,
                    f"flow({line.from_node}-{line.to_node},{t + 1},{wl})",
                )
        return cost_terms

    def add_epigraph(self, key: tuple, label: str, cost: float) -> int:
        # dispatch costs are non-negative, so a zero floor is always valid
        return self._var(key, label, 0.0, INF, cost)

    def add_cut(self, theta: int, cost_terms, w: int, tag: str) -> None:
        self.b.add_row([(theta, 1.0)] + [(c, -v) for c, v in cost_terms], ">=", 0.0,
                       f"epi({tag},{self.scenarios.labels[w]})")


def build_constraint_core(system: PowerSystem, scenarios: ScenarioSet, subset: Optional[Iterable[int]] = None,
                          name: str = "core"):
    """First-stage logic plus the dispatch block of every scenario in ``subset``.

    Returns ``(builder, index, cost_terms)`` where ``cost_terms[w]`` lists the
    (column, coefficient) pairs of scenario ``w``'s dispatch cost. No
    scenario-cost objective terms are added.
    """
    core = _CoreBuilder(system, scenarios, name)
    core.add_first_stage()
    ids = range(scenarios.count) if subset is None else subset
    cost_terms = {w: core.add_scenario(w) for w in ids}
    return core.b, core.index, cost_terms


def _finish(kind: str, core: _CoreBuilder, ids, worst=()) -> Formulation:
    return Formulation(kind, core.b.build(), core.index, core.system, tuple(ids), tuple(worst))


def build_suc(system: PowerSystem, scenarios: ScenarioSet) -> Formulation:
    core = _CoreBuilder(system, scenarios, "suc")
    core.add_first_stage()
    ids = list(range(scenarios.count))
    for w in ids:
        core.add_scenario(w, float(scenarios.probabilities[w]))
    return _finish("suc", core, ids)


def build_ruc(system: PowerSystem, scenarios: ScenarioSet) -> Formulation:
    core = _CoreBuilder(system, scenarios, "ruc")
    core.add_first_stage()
    alpha = core.add_epigraph(("alpha",), "alpha", 1.0)
    ids = list(range(scenarios.count))
    for w in ids:
        core.add_cut(alpha, core.add_scenario(w), w, "alpha")
    return _finish("ruc", core, ids, [alpha])


def build_huc(system: PowerSystem, scenarios: ScenarioSet, partition: PartitionMap,
              reduced: Optional[Sequence[Sequence[int]]] = None) -> Formulation:
    """Hybrid model; ``reduced[p]`` restricts partition ``p`` to those scenarios.

    Partition weights always come from the full partition membership.
    """
    core = _CoreBuilder(system, scenarios, f"huc_k{partition.k}")
    core.add_first_stage()
    members = partition.members() if reduced is None else [list(r) for r in reduced]
    thetas = [core.add_epigraph(("theta", p), f"theta(p{p + 1})", float(partition.weights[p]))
              for p in range(partition.k)]
    ids = []
    for p in range(partition.k):
        for w in members[p]:
            core.add_cut(thetas[p], core.add_scenario(w), w, f"theta(p{p + 1})")
            ids.append(w)
    return _finish("huc", core, ids, thetas)


def build_master(system: PowerSystem, scenarios: ScenarioSet, retained: Sequence[int], partition: int = 0) -> Formulation:
    """CCG master for one partition over its retained scenarios (may be empty)."""
    core = _CoreBuilder(system, scenarios, f"master_p{partition + 1}")
    core.add_first_stage()
    theta = core.add_epigraph(("theta", partition), f"theta(p{partition + 1})", 1.0)
    for w in retained:
        core.add_cut(theta, core.add_scenario(w), w, f"theta(p{partition + 1})")
    return _finish("master", core, list(retained), [theta])


def build_subproblem(system: PowerSystem, scenarios: ScenarioSet, w: int, plan: CommitmentPlan) -> Formulation:
    """Dispatch LP of scenario ``w`` under a fixed commitment plan."""
    core = _CoreBuilder(system, scenarios, f"sub_{scenarios.labels[w]}", plan=plan)
    core.add_scenario(w, 1.0)
    return _finish("subproblem", core, [w])


def row_census(system: PowerSystem, n_scenarios: int, kind: str = "suc", n_cuts: int = 0) -> dict[str, int]:
    """Closed-form row count of every constraint family."""
    G, T, N = len(system.generators), system.horizon, len(system.nodes)
    free = sum(max(0, T - initial_status(g, T).fixed_periods) for g in system.generators)
    first = kind != "subproblem"
    census = {
        "logic": G * T if first else 0,
        "excl": G * T if first else 0,
        "minup": free if first else 0,
        "mindn": free if first else 0,
        "balance": N * T * n_scenarios,
        "pmax": G * T * n_scenarios,
        "pmin": G * T * n_scenarios,
        "rampup0": G * n_scenarios,
        "rampdn0": G * n_scenarios,
        "rampup": G * (T - 1) * n_scenarios,
        "rampdn": G * (T - 1) * n_scenarios,
        "flow": len(system.lines) * T * n_scenarios,
        "epi": n_cuts,
    }
    return census


def column_census(system: PowerSystem, n_scenarios: int, n_epigraph: int = 0, first_stage: bool = True) -> int:
    G, T = len(system.generators), system.horizon
    per_scenario = T * (G + len(system.loads) + len(system.wind_farms) + len(system.nodes))
    return (3 * G * T if first_stage else 0) + n_scenarios * per_scenario + n_epigraph
