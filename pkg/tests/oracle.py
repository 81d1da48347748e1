"""Brute-force reference for single-bus instances with non-binding ramps.

Enumerates every on/off matrix, keeps those respecting the commitment rules
(checked by run lengths rather than the windowed sums the MILP uses), and
dispatches each period by merit order.
"""

from __future__ import annotations

import itertools

import numpy as np


class OracleNotApplicable(AssertionError):
    pass


def _initial(gen, T):
    on = 1 if gen.periods_on > 0 else 0
    if on:
        lock = max(0, min(T, gen.min_up - gen.periods_on))
    else:
        lock = max(0, min(T, gen.min_down - gen.periods_off))
    return on, lock


def _row_ok(gen, row, T):
    on0, lock = _initial(gen, T)
    if any(row[t] != on0 for t in range(lock)):
        return False
    prev = on0
    for t in range(T):
        if row[t] != prev:
            need = gen.min_up if row[t] else gen.min_down
            # the new state must hold for `need` periods or until the horizon ends
            if any(row[s] != row[t] for s in range(t, min(T, t + need))):
                return False
        prev = row[t]
    return True


def feasible_rows(gen, T):
    return [row for row in itertools.product((0, 1), repeat=T) if _row_ok(gen, row, T)]


def commitment_cost(system, on):
    total = 0.0
    for g, gen in enumerate(system.generators):
        prev = _initial(gen, system.horizon)[0]
        for t in range(system.horizon):
            u = on[g][t]
            total += gen.fixed_cost * u
            if u > prev:
                total += gen.startup_cost
            elif u < prev:
                total += gen.shutdown_cost
            prev = u
    return total


def merit_dispatch(system, on, wind_t, t):
    """Cheapest output of period ``t``; returns (cost, outputs per unit)."""
    demand = sum(ld.demand[t] for ld in system.loads)
    net = demand - wind_t
    units = [g for g in range(len(system.generators)) if on[g][t]]
    out = {g: system.generators[g].p_min for g in units}
    if sum(out.values()) > demand + 1e-9:
        raise OracleNotApplicable("minimum output exceeds demand")
    residual = net - sum(out.values())
    for g in sorted(units, key=lambda i: (system.generators[i].variable_cost, i)):
        if residual <= 0:
            break
        extra = min(residual, system.generators[g].p_max - out[g])
        out[g] += extra
        residual -= extra
    shed = max(0.0, residual)
    cost = sum(system.generators[g].variable_cost * p for g, p in out.items()) + system.shed_cost * shed
    return cost, out


def scenario_cost(system, on, wind):
    """Dispatch cost of one scenario (``wind`` indexed by period)."""
    T = system.horizon
    total = 0.0
    power = np.zeros((len(system.generators), T))
    for t in range(T):
        c, out = merit_dispatch(system, on, wind[t], t)
        total += c
        for g, p in out.items():
            power[g, t] = p
    _check_ramps(system, on, power)
    return total


def _check_ramps(system, on, power):
    for g, gen in enumerate(system.generators):
        u = on[g]
        if power[g, 0] > (gen.initial_power + gen.ramp_up) * u[0] + 1e-9:
            raise OracleNotApplicable("initial ramp-up binds")
        if power[g, 0] < (gen.initial_power - gen.ramp_down) * u[0] - 1e-9:
            raise OracleNotApplicable("initial ramp-down binds")
        for t in range(1, system.horizon):
            up = (2 - u[t - 1] - u[t]) * gen.startup_ramp + (1 + u[t - 1] - u[t]) * gen.ramp_up
            dn = (2 - u[t - 1] - u[t]) * gen.shutdown_ramp + (1 - u[t - 1] + u[t]) * gen.ramp_down
            if power[g, t] - power[g, t - 1] > up + 1e-9 or power[g, t - 1] - power[g, t] > dn + 1e-9:
                raise OracleNotApplicable("ramp limit binds")


def enumerate_plans(system):
    if len(system.nodes) != 1:
        raise OracleNotApplicable("oracle handles single-bus systems only")
    T = system.horizon
    rows = [feasible_rows(g, T) for g in system.generators]
    return list(itertools.product(*rows))


def plan_costs(system, scenarios, on):
    """(CCD, per-scenario dispatch costs) for an on/off matrix."""
    wind = scenarios.values.sum(axis=0)  # single bus: farms add up
    return commitment_cost(system, on), [scenario_cost(system, on, wind[:, w]) for w in range(scenarios.count)]


def hybrid_value(ccd, costs, groups, weights):
    return ccd + sum(rho * max(costs[w] for w in grp) for grp, rho in zip(groups, weights))


def best(system, scenarios, objective):
    """Minimum of ``objective(ccd, costs)`` over all feasible plans -> (value, on)."""
    best_val, best_on = np.inf, None
    for on in enumerate_plans(system):
        ccd, costs = plan_costs(system, scenarios, on)
        val = objective(ccd, costs)
        if val < best_val - 1e-12:
            best_val, best_on = val, on
    return best_val, best_on


def suc_value(system, scenarios):
    p = scenarios.probabilities
    return best(system, scenarios, lambda ccd, c: ccd + float(np.dot(p, c)))


def ruc_value(system, scenarios):
    return best(system, scenarios, lambda ccd, c: ccd + max(c))


def huc_value(system, scenarios, groups, weights):
    return best(system, scenarios, lambda ccd, c: hybrid_value(ccd, c, groups, weights))
