import numpy as np
import pytest

import oracle
from cases import MICRO_HUC2, MICRO_K2_ASSIGNMENT, MICRO_K2_WEIGHTS, MICRO_RUC, MICRO_SUC, instance, single_bus, unit
from uc_hybrid import (
    CommitmentPlan,
    PartitionMap,
    build_huc,
    build_master,
    build_ruc,
    build_subproblem,
    build_suc,
    cluster_scenarios,
    evaluate_plan,
)
from uc_hybrid.formulations import build_constraint_core, column_census, row_census
from uc_hybrid.milp import Status, solve_lp, solve_milp, write_lp
from uc_hybrid.system import ScenarioSet

FAMILIES = ("logic", "excl", "minup", "mindn", "balance", "pmax", "pmin", "rampup0", "rampdn0", "rampup", "rampdn",
            "flow", "epi")


def _solve(form):
    sol = solve_milp(form.model)
    assert sol.status is Status.OPTIMAL
    return sol


def _census_matches(form, system, n_scen, kind, n_cuts, n_epi):
    m = form.model
    expected = row_census(system, n_scen, kind, n_cuts)
    for fam in FAMILIES:
        assert m.row_count(fam + "(") == expected[fam], fam
    assert m.n_rows == sum(expected.values())
    assert m.n_cols == column_census(system, n_scen, n_epi, kind != "subproblem")


# -- oracle values ---------------------------------------------------------------


def test_frozen_oracle_values_still_hold():
    system, scen = instance("micro")
    assert oracle.suc_value(system, scen)[0] == pytest.approx(MICRO_SUC, abs=1e-9)
    assert oracle.ruc_value(system, scen)[0] == pytest.approx(MICRO_RUC, abs=1e-9)
    groups = PartitionMap(2, MICRO_K2_ASSIGNMENT, MICRO_K2_WEIGHTS).members()
    assert oracle.huc_value(system, scen, groups, MICRO_K2_WEIGHTS)[0] == pytest.approx(MICRO_HUC2, abs=1e-9)


@pytest.mark.parametrize("backend", ["native", "highs"])
def test_micro_extensive_values(backend):
    system, scen = instance("micro")
    assert solve_milp(build_suc(system, scen).model, backend=backend).objective == pytest.approx(MICRO_SUC, abs=1e-6)
    assert solve_milp(build_ruc(system, scen).model, backend=backend).objective == pytest.approx(MICRO_RUC, abs=1e-6)
    pm = cluster_scenarios(scen, 2)
    assert pm.assignment == MICRO_K2_ASSIGNMENT
    got = solve_milp(build_huc(system, scen, pm).model, backend=backend).objective
    assert got == pytest.approx(MICRO_HUC2, abs=1e-6)


def test_micro_orderings_via_evaluation():
    system, scen = instance("micro")
    plans = {}
    for name, form in (("suc", build_suc(system, scen)), ("ruc", build_ruc(system, scen)),
                       ("huc2", build_huc(system, scen, cluster_scenarios(scen, 2)))):
        plans[name] = evaluate_plan(system, scen, form.plan(_solve(form)))
    assert plans["suc"].etc <= plans["huc2"].etc + 1e-9
    assert plans["ruc"].wctc <= plans["huc2"].wctc + 1e-9
    assert plans["suc"].etc == pytest.approx(MICRO_SUC)
    assert plans["ruc"].wctc == pytest.approx(MICRO_RUC)


def test_master_single_retained_matches_oracle():
    system, scen = instance("micro")
    form = build_master(system, scen, [0])
    sub = ScenarioSet(scen.values[:, :, [0]], [1.0], scen.farm_ids, ("w1",))
    assert _solve(form).objective == pytest.approx(oracle.ruc_value(system, sub)[0], abs=1e-6)


def test_master_full_partition_equals_ruc():
    system, scen = instance("micro")
    assert _solve(build_master(system, scen, [0, 1, 2])).objective == pytest.approx(MICRO_RUC, abs=1e-6)


def test_subproblem_matches_merit_order():
    system, scen = instance("micro")
    on = np.array([[1, 1], [0, 1]])
    plan = CommitmentPlan.from_on(system, on)
    for w in range(scen.count):
        sol = solve_lp(build_subproblem(system, scen, w, plan).model)
        _, costs = oracle.plan_costs(system, scen, on)
        assert sol.objective == pytest.approx(costs[w], abs=1e-6)


# -- limits and identities -----------------------------------------------------


def test_k1_hybrid_is_ruc():
    system, scen = instance("micro")
    huc = build_huc(system, scen, PartitionMap.single(scen.count))
    ruc = build_ruc(system, scen)
    assert huc.model.A.shape == ruc.model.A.shape
    assert huc.model.A.nnz == ruc.model.A.nnz
    assert _solve(huc).objective == pytest.approx(_solve(ruc).objective, rel=1e-9)


def test_k_lambda_hybrid_is_suc():
    system, scen = instance("micro")
    huc = build_huc(system, scen, PartitionMap.singletons(scen.probabilities))
    assert _solve(huc).objective == pytest.approx(MICRO_SUC, rel=1e-9)


def test_single_scenario_suc_equals_ruc_and_etc():
    system, scen = instance("micro")
    one = ScenarioSet(scen.values[:, :, [1]], [1.0], scen.farm_ids, ("w2",))
    suc = build_suc(system, one)
    sol = _solve(suc)
    assert _solve(build_ruc(system, one)).objective == pytest.approx(sol.objective, abs=1e-9)
    assert evaluate_plan(system, one, suc.plan(sol)).etc == pytest.approx(sol.objective, abs=1e-6)


def test_duplicated_scenarios_leave_ruc_unchanged():
    system, scen = instance("micro")
    vals = np.concatenate([scen.values, scen.values], axis=2)
    dup = ScenarioSet(vals, np.concatenate([scen.probabilities, scen.probabilities]) / 2, scen.farm_ids)
    assert _solve(build_ruc(system, dup)).objective == pytest.approx(MICRO_RUC, abs=1e-6)


def test_zero_demand_costs_nothing():
    system, scen = single_bus([unit("g1", cf=50.0, csu=10.0), unit("g2", cf=20.0)], [0.0, 0.0, 0.0], [[5.0], [0.0], [2.0]])
    for form in (build_suc(system, scen), build_ruc(system, scen), build_huc(system, scen, PartitionMap.single(1)),
                 build_master(system, scen, [])):
        sol = _solve(form)
        assert sol.objective == pytest.approx(0.0, abs=1e-9)
        assert form.plan(sol).on.sum() == 0


# -- structure -------------------------------------------------------------------


def test_one_unit_two_periods_logic_rows():
    system, scen = single_bus([unit()], [10.0, 20.0])
    b, _, _ = build_constraint_core(system, scen)
    m = b.build()
    assert m.row_count("logic(") == 2
    assert m.row_count("excl(") == 2


def test_initial_lock_fixes_commitment_by_bounds():
    gen = unit(ut=5, dt=4, on=2, pis=50.0)  # locked on for 3 periods
    system, scen = single_bus([gen], [10.0] * 24)
    form = build_suc(system, scen)
    lo, hi = form.model.col_lo, form.model.col_hi
    for t in range(24):
        col = form.index[("u", 0, t)]
        fixed = lo[col] == hi[col] == 1.0
        assert fixed == (t < 3), t
    assert form.model.row_count("minup(") == 21


def test_balance_row_transcription():
    system, scen = single_bus([unit()], [100.0], [[30.0]])
    form = build_suc(system, scen)
    m, idx = form.model, form.index
    (i,) = [r for r, n in enumerate(m.row_names) if n.startswith("balance(")]
    row = m.A.getrow(i).toarray().ravel()
    assert row[idx[("P", 0, 0, 0)]] == 1.0
    assert row[idx[("shed", 0, 0, 0)]] == 1.0
    assert row[idx[("spill", 0, 0, 0)]] == -1.0
    assert np.count_nonzero(row) == 3
    # P - 100 + shed + 30 - spill = 0
    assert m.row_lo[i] == m.row_hi[i] == 70.0


@pytest.mark.parametrize("name", ["micro", "ieee14"])
def test_row_and_column_census(name):
    system, scen = instance(name)
    lam = scen.count
    _census_matches(build_suc(system, scen), system, lam, "suc", 0, 0)
    _census_matches(build_ruc(system, scen), system, lam, "ruc", lam, 1)
    pm = cluster_scenarios(scen, min(3, lam))
    _census_matches(build_huc(system, scen, pm), system, lam, "huc", lam, pm.k)
    _census_matches(build_master(system, scen, []), system, 0, "master", 0, 1)
    _census_matches(build_master(system, scen, [0]), system, 1, "master", 1, 1)
    plan = CommitmentPlan.from_on(system, np.ones((len(system.generators), system.horizon), dtype=int))
    _census_matches(build_subproblem(system, scen, 0, plan), system, 1, "subproblem", 0, 0)


def test_reduced_hybrid_columns_scale_with_retained_count():
    system, scen = instance("ieee14")
    pm = cluster_scenarios(scen, 3)
    sizes = []
    for per_part in (1, 2):
        reduced = [grp[:per_part] for grp in pm.members()]
        n = sum(len(r) for r in reduced)
        form = build_huc(system, scen, pm, reduced)
        assert form.model.n_cols == column_census(system, n, pm.k)
        sizes.append(form.model.n_cols)
    assert sizes[1] > sizes[0]


def test_reference_angle_fixed_and_variable_families():
    system, scen = instance("ieee14")
    form = build_ruc(system, scen)
    idx = form.index
    ref = system.nodes.index(system.ref)
    for w in range(scen.count):
        for t in range(system.horizon):
            col = idx[("delta", ref, t, w)]
            assert form.model.col_lo[col] == form.model.col_hi[col] == 0.0
    G, T = len(system.generators), system.horizon
    assert idx.count("u") == idx.count("y") == idx.count("z") == G * T
    assert idx.count("alpha") == 1
    assert idx.count("P") == G * T * scen.count


def test_lp_dump_uses_readable_names():
    system, scen = instance("micro")
    text = write_lp(build_huc(system, scen, cluster_scenarios(scen, 2)).model)
    assert "u(g1,1)" in text and "theta(p1)" in text and "Binaries" in text
