"""Two-stage unit commitment under wind uncertainty.

Stochastic (SUC), robust (RUC) and hybrid (HUC) formulations over a DC
network, solved either as one extensive MILP or by scenario partition and
decomposition (k-means partitions, per-partition column-and-constraint
generation, then a reduced hybrid solve).
"""

from .clustering import InvalidK, PartitionMap, cluster_scenarios
from .evaluation import InfeasiblePlan, PlanEvaluation, dispatch, dispatch_cost, evaluate_plan
from .formulations import Formulation, build_huc, build_master, build_ruc, build_subproblem, build_suc
from .io import InputError, load_fixture, load_instance, load_scenarios, load_system
from .report import SolveReport, frontier, replay, solve, summary_table
from .spda import MaxIterations, SolverFailure, SpdaResult, run_ccg, run_spda, solve_extensive
from .system import (
    CommitmentPlan,
    Generator,
    Line,
    Load,
    PowerSystem,
    ScenarioSet,
    WindFarm,
    initial_status,
    validate_system,
)

__version__ = "0.1.0"

__all__ = [
    "CommitmentPlan", "Formulation", "Generator", "InfeasiblePlan", "InputError", "InvalidK", "Line", "Load",
    "MaxIterations", "PartitionMap", "PlanEvaluation", "PowerSystem", "ScenarioSet", "SolveReport",
    "SolverFailure", "SpdaResult", "WindFarm", "build_huc", "build_master", "build_ruc", "build_subproblem",
    "build_suc", "cluster_scenarios", "dispatch", "dispatch_cost", "evaluate_plan", "frontier",
    "initial_status", "load_fixture", "load_instance", "load_scenarios", "load_system", "replay", "run_ccg",
    "run_spda", "solve", "solve_extensive", "summary_table", "validate_system",
]
