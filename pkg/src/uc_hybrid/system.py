"""Power-system domain types, validation and initial-status arithmetic."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

DEFAULT_SHED_COST = 1000.0  # $/MWh
DEFAULT_BASE_MVA = 100.0


@dataclass(frozen=True)
class Generator:
    id: str
    node: str
    fixed_cost: float  # $/period online
    variable_cost: float  # $/MWh
    startup_cost: float
    shutdown_cost: float
    p_max: float
    p_min: float
    ramp_up: float  # MW/period
    ramp_down: float
    startup_ramp: float
    shutdown_ramp: float
    min_up: int  # periods
    min_down: int
    initial_power: float = 0.0
    periods_on: int = 0  # count before t=1
    periods_off: int = 0

    def problems(self) -> list[str]:
        out = []
        tag = f"generator {self.id}"
        if not 0 <= self.p_min <= self.p_max:
            out.append(f"{tag}: requires 0 <= p_min <= p_max")
        for name in ("ramp_up", "ramp_down", "startup_ramp", "shutdown_ramp"):
            if getattr(self, name) < 0:
                out.append(f"{tag}: {name} must be non-negative")
        if self.min_up < 1 or self.min_down < 1:
            out.append(f"{tag}: min_up and min_down must be >= 1")
        if self.periods_on < 0 or self.periods_off < 0:
            out.append(f"{tag}: periods_on/periods_off must be non-negative")
        if self.periods_on > 0 and self.periods_off > 0:
            out.append(f"{tag}: periods_on and periods_off cannot both be positive")
        if self.periods_on == 0 and self.initial_power != 0:
            out.append(f"{tag}: initial_power must be 0 when the unit starts offline")
        if self.initial_power < 0:
            out.append(f"{tag}: initial_power must be non-negative")
        return out


@dataclass(frozen=True)
class Line:
    from_node: str
    to_node: str
    reactance: float  # per unit
    capacity: float  # MW

    def problems(self) -> list[str]:
        out = []
        tag = f"line {self.from_node}-{self.to_node}"
        if self.reactance <= 0:
            out.append(f"{tag}: reactance must be positive")
        if self.capacity <= 0:
            out.append(f"{tag}: capacity must be positive")
        if self.from_node == self.to_node:
            out.append(f"{tag}: self-loop")
        return out


@dataclass(frozen=True)
class Load:
    id: str
    node: str
    demand: tuple[float, ...]  # MW per period


@dataclass(frozen=True)
class WindFarm:
    id: str
    node: str


@dataclass(frozen=True)
class PowerSystem:
    horizon: int
    nodes: tuple[str, ...]
    lines: tuple[Line, ...]
    generators: tuple[Generator, ...]
    loads: tuple[Load, ...]
    wind_farms: tuple[WindFarm, ...]
    shed_cost: float = DEFAULT_SHED_COST
    reference_node: Optional[str] = None
    base_mva: float = DEFAULT_BASE_MVA

    @property
    def ref(self) -> str:
        return self.reference_node if self.reference_node is not None else self.nodes[0]

    def demand_matrix(self) -> np.ndarray:
        """Demand as a (loads, periods) array."""
        if not self.loads:
            return np.zeros((0, self.horizon))
        return np.array([ld.demand for ld in self.loads], dtype=float)

    def generator(self, gid: str) -> Generator:
        for g in self.generators:
            if g.id == gid:
                return g
        raise KeyError(gid)


@dataclass(frozen=True)
class ScenarioSet:
    """Wind trajectories ``values[farm, period, scenario]`` with probabilities."""

    values: np.ndarray
    probabilities: np.ndarray
    farm_ids: tuple[str, ...] = ()
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        probs = np.asarray(self.probabilities, dtype=float)
        if values.ndim != 3:
            raise ValueError("scenario values must be indexed farm x period x scenario")
        values.setflags(write=False)
        probs.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "probabilities", probs)
        if not self.farm_ids:
            object.__setattr__(self, "farm_ids", tuple(f"f{i + 1}" for i in range(values.shape[0])))
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"w{i + 1}" for i in range(values.shape[2])))

    @property
    def count(self) -> int:
        return self.values.shape[2]

    @property
    def horizon(self) -> int:
        return self.values.shape[1]

    def subset(self, indices) -> "ScenarioSet":
        """Scenarios at ``indices``, probabilities kept unnormalised."""
        idx = list(indices)
        return ScenarioSet(
            self.values[:, :, idx],
            self.probabilities[idx],
            self.farm_ids,
            tuple(self.labels[i] for i in idx),
        )

    def flattened(self) -> np.ndarray:
        """One row per scenario: its farm x period trajectory."""
        return self.values.transpose(2, 0, 1).reshape(self.count, -1)

    def problems(self) -> list[str]:
        out = []
        if self.count < 1:
            out.append("scenario set is empty")
        if np.any(self.values < 0):
            out.append("scenario wind values must be non-negative")
        if self.probabilities.shape != (self.count,):
            out.append("probability vector length does not match scenario count")
        else:
            if np.any(self.probabilities < 0):
                out.append("probabilities must be non-negative")
            total = float(self.probabilities.sum())
            if abs(total - 1.0) > 1e-9:
                out.append(f"probabilities sum to {total:.12g}, expected 1")
        return out


def equiprobable(values) -> ScenarioSet:
    values = np.asarray(values, dtype=float)
    n = values.shape[2]
    return ScenarioSet(values, np.full(n, 1.0 / n))


@dataclass(frozen=True)
class InitialStatus:
    on: int  # IS
    must_up: int  # L_up
    must_down: int  # L_dw

    @property
    def fixed_periods(self) -> int:
        return self.must_up + self.must_down


def initial_status(gen: Generator, horizon: int) -> InitialStatus:
    """Initial on/off state and the periods the unit is locked into it.

    >>> g = Generator("g", "n", 0, 0, 0, 0, 100, 0, 10, 10, 10, 10, 5, 4, 50, 3, 0)
    >>> initial_status(g, 24)
    InitialStatus(on=1, must_up=2, must_down=0)
    """
    is_on = 1 if gen.periods_on > 0 else 0
    must_up = min(horizon, (gen.min_up - gen.periods_on) * is_on)
    must_down = min(horizon, (gen.min_down - gen.periods_off) * (1 - is_on))
    return InitialStatus(is_on, max(0, must_up), max(0, must_down))


@dataclass(frozen=True)
class CommitmentPlan:
    """First-stage decisions, each a (units, periods) 0/1 array."""

    on: np.ndarray
    start: np.ndarray
    stop: np.ndarray

    def __post_init__(self):
        for name in ("on", "start", "stop"):
            arr = np.asarray(np.rint(getattr(self, name)), dtype=np.int8)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def from_on(cls, system: PowerSystem, on) -> "CommitmentPlan":
        """Derive start/stop indicators from an on/off matrix."""
        on = np.asarray(on, dtype=np.int8)
        prev = np.array([initial_status(g, system.horizon).on for g in system.generators], dtype=np.int8)
        shifted = np.concatenate([prev[:, None], on[:, :-1]], axis=1)
        delta = on - shifted
        return cls(on, (delta > 0).astype(np.int8), (delta < 0).astype(np.int8))

    def __eq__(self, other):
        if not isinstance(other, CommitmentPlan):
            return NotImplemented
        return all(np.array_equal(getattr(self, n), getattr(other, n)) for n in ("on", "start", "stop"))

    def __hash__(self):
        return hash((self.on.tobytes(), self.on.shape))

    def commitment_cost(self, system: PowerSystem) -> float:
        cf = np.array([g.fixed_cost for g in system.generators])
        csu = np.array([g.startup_cost for g in system.generators])
        csd = np.array([g.shutdown_cost for g in system.generators])
        return float(cf @ self.on.sum(axis=1) + csu @ self.start.sum(axis=1) + csd @ self.stop.sum(axis=1))

    def violations(self, system: PowerSystem) -> list[str]:
        """Broken first-stage logic, min up/down or initial-fixing rules."""
        out = []
        T = system.horizon
        if self.on.shape != (len(system.generators), T):
            return [f"plan shape {self.on.shape} does not match units x periods"]
        for gi, g in enumerate(system.generators):
            st = initial_status(g, T)
            prev = st.on
            for t in range(T):
                u, y, z = int(self.on[gi, t]), int(self.start[gi, t]), int(self.stop[gi, t])
                if y - z != u - prev:
                    out.append(f"{g.id} t={t + 1}: start/stop inconsistent with on/off change")
                if y + z > 1:
                    out.append(f"{g.id} t={t + 1}: simultaneous start and stop")
                if t < st.fixed_periods and u != st.on:
                    out.append(f"{g.id} t={t + 1}: must stay at initial status")
                if t >= st.fixed_periods:
                    lo_up = max(0, t - g.min_up + 1)
                    if self.start[gi, lo_up : t + 1].sum() > u:
                        out.append(f"{g.id} t={t + 1}: minimum up time violated")
                    lo_dw = max(0, t - g.min_down + 1)
                    if self.stop[gi, lo_dw : t + 1].sum() > 1 - u:
                        out.append(f"{g.id} t={t + 1}: minimum down time violated")
                prev = u
        return out

    def to_grid(self) -> list[str]:
        return ["".join(str(int(v)) for v in row) for row in self.on]


@dataclass(frozen=True)
class DispatchSolution:
    power: np.ndarray  # (units, periods)
    shed: np.ndarray  # (loads, periods)
    spill: np.ndarray  # (farms, periods)
    angles: np.ndarray  # (nodes, periods)
    dispatch_cost: float


@dataclass
class ValidationReport:
    findings: list[str] = field(default_factory=list)

    def __bool__(self):
        # truthy when the instance is well formed
        return not self.findings

    def __len__(self):
        return len(self.findings)

    def __iter__(self):
        return iter(self.findings)


def _connected(nodes, lines) -> bool:
    if not nodes:
        return False
    adj = {n: set() for n in nodes}
    for ln in lines:
        if ln.from_node in adj and ln.to_node in adj:
            adj[ln.from_node].add(ln.to_node)
            adj[ln.to_node].add(ln.from_node)
    seen = {nodes[0]}
    queue = deque([nodes[0]])
    while queue:
        for m in adj[queue.popleft()]:
            if m not in seen:
                seen.add(m)
                queue.append(m)
    return len(seen) == len(nodes)


def validate_system(system: PowerSystem, scenarios: Optional[ScenarioSet] = None) -> ValidationReport:
    """Collect every broken invariant; never raises on bad data."""
    report = ValidationReport()
    add = report.findings.extend
    node_set = set(system.nodes)
    if len(node_set) != len(system.nodes):
        add(["duplicate node ids"])
    if system.horizon < 1:
        add(["horizon must be at least one period"])
    if system.ref not in node_set:
        add([f"reference node {system.ref} is not in the node set"])

    for line in system.lines:
        add(line.problems())
        for end in (line.from_node, line.to_node):
            if end not in node_set:
                add([f"line {line.from_node}-{line.to_node}: dangling node reference {end}"])
    if node_set and not _connected(list(system.nodes), system.lines):
        add(["network graph is disconnected"])

    for kind, items in (("generator", system.generators), ("load", system.loads), ("wind farm", system.wind_farms)):
        ids = [it.id for it in items]
        if len(set(ids)) != len(ids):
            add([f"duplicate {kind} ids"])
        for it in items:
            if it.node not in node_set:
                add([f"{kind} {it.id}: dangling node reference {it.node}"])

    for g in system.generators:
        add(g.problems())
        if system.shed_cost <= g.variable_cost:
            add([f"shed cost must exceed variable cost of generator {g.id}"])

    for ld in system.loads:
        if len(ld.demand) != system.horizon:
            add([f"load {ld.id}: demand has {len(ld.demand)} periods, horizon is {system.horizon}"])
        if any(d < 0 for d in ld.demand):
            add([f"load {ld.id}: negative demand"])

    if scenarios is not None:
        add(scenarios.problems())
        n_farms, n_periods = scenarios.values.shape[:2]
        if n_farms != len(system.wind_farms):
            add([f"scenario data has {n_farms} farms, system has {len(system.wind_farms)}"])
        if n_periods != system.horizon:
            add([f"scenario data has {n_periods} periods, horizon is {system.horizon}"])
    return report
