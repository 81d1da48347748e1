import numpy as np
import pytest

from cases import MICRO_HUC2, MICRO_RUC, MICRO_SUC, instance, single_bus, trace_problems, unit
from uc_hybrid import PartitionMap, run_ccg, run_spda, solve_extensive
from uc_hybrid.spda import MaxIterations, default_epsilon


def test_default_epsilon_is_relative():
    assert default_epsilon(0.0) == 1e-4
    assert default_epsilon(-9999.0) == pytest.approx(1.0)


@pytest.mark.parametrize("k, expected", [(1, MICRO_RUC), (2, MICRO_HUC2), (3, MICRO_SUC)])
def test_micro_spda_objectives(k, expected):
    system, scen = instance("micro")
    res = run_spda(system, scen, k)
    ext = solve_extensive(system, scen, "huc", k)
    assert res.objective == pytest.approx(expected, abs=1e-6)
    assert abs(res.objective - ext.objective) <= default_epsilon(ext.objective)
    assert res.plan.violations(system) == []
    assert res.retained_count == sum(len(r) for r in res.retained_sets())
    for r in res.reduced:
        assert trace_problems(r) == []


def test_single_partition_ccg_closes_at_ruc():
    system, scen = instance("micro")
    red = run_ccg(system, scen, [0, 1, 2])
    last = red.trace.records[-1]
    assert red.converged
    assert last.lb == pytest.approx(MICRO_RUC, abs=1e-6)
    assert last.best_ub == pytest.approx(MICRO_RUC, abs=1e-6)


def test_lowest_wind_scenario_is_retained_first():
    system, scen = instance("micro")
    # w3 is pointwise the calmest trajectory
    assert np.all(scen.values[:, :, 2] <= scen.values[:, :, :2].min(axis=2))
    red = run_ccg(system, scen, [0, 1, 2])
    first = red.trace.records[0]
    assert first.selected == 2
    assert max(first.subproblem_costs) == first.subproblem_costs[2]
    assert red.retained[0] == 2


@pytest.mark.parametrize("w", [0, 1, 2])
def test_singleton_partition_converges_in_two_iterations(w):
    system, scen = instance("micro")
    red = run_ccg(system, scen, [w], partition=w)
    assert red.retained == (w,)
    assert len(red.trace.records) <= 2
    assert trace_problems(red) == []


@pytest.mark.parametrize("workers", [1, 2, 8])
def test_result_independent_of_workers(workers):
    system, scen = instance("micro")
    base = run_spda(system, scen, 2, workers=1)
    res = run_spda(system, scen, 2, workers=workers)
    assert res.plan == base.plan
    assert res.objective == base.objective
    assert res.retained_sets() == base.retained_sets()
    assert [r.trace.records[-1].lb for r in res.reduced] == [r.trace.records[-1].lb for r in base.reduced]


def test_given_partition_is_used():
    system, scen = instance("micro")
    pm = PartitionMap(2, (0, 0, 1), (0.8, 0.2))
    res = run_spda(system, scen, 2, partition=pm)
    ext = solve_extensive(system, scen, "huc", partition=pm)
    assert res.partition == pm
    assert res.objective == pytest.approx(ext.objective, abs=1e-6)


def test_iteration_cap_raises_with_partial_trace():
    system, scen = instance("micro")
    with pytest.raises(MaxIterations) as info:
        run_ccg(system, scen, [0, 1, 2], max_iter=1)
    assert len(info.value.partial.trace.records) == 1


def test_negative_epsilon_rejected():
    system, scen = instance("micro")
    with pytest.raises(ValueError):
        run_ccg(system, scen, [0], epsilon=-1.0)


def test_zero_demand_any_formulation():
    system, scen = single_bus([unit("g1", cf=40.0)], [0.0, 0.0], [[3.0, 1.0], [0.0, 2.0]])
    for form in ("suc", "ruc"):
        assert solve_extensive(system, scen, form).objective == pytest.approx(0.0, abs=1e-9)
    assert run_spda(system, scen, 1).objective == pytest.approx(0.0, abs=1e-9)


def test_trace_jsonl_fields():
    import json

    system, scen = instance("micro")
    red = run_ccg(system, scen, [0, 1, 2])
    lines = red.trace.to_jsonl(scen.labels).splitlines()
    assert len(lines) == len(red.trace.records)
    rec = json.loads(lines[0])
    assert set(rec) == {"partition", "iter", "lb", "ub", "best_ub", "selected_scenario", "master_ms", "subproblems_ms"}
    assert rec["selected_scenario"] == "w3"
