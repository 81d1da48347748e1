"""Command-line entry point: ``uc-hybrid solve|frontier|cluster|validate``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .clustering import InvalidK, cluster_scenarios
from .io import InputError, load_instance, load_scenarios
from .milp import BACKENDS, ModelError
from .milp.lpfile import write_lp
from .parallel import default_workers
from .report import frontier, frontier_csv, solve, summary_table
from .spda import FORMULATIONS, MaxIterations, SolverFailure, build_extensive
from .system import validate_system

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_LIMIT = 3


def _k_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _instance_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--system", required=True, type=Path, help="system JSON")
    p.add_argument("--scenarios", required=True, type=Path, help="wind scenario CSV")
    p.add_argument("--probabilities", type=Path, help="probability JSON (default: sidecar next to the CSV)")


def _solver_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epsilon", type=float, default=None, help="CCG tolerance in $ (default relative 1e-4)")
    p.add_argument("--mip-gap", type=float, default=0.0)
    p.add_argument("--time-limit", type=float, default=None, help="seconds per MILP solve")
    p.add_argument("--workers", type=int, default=None, help="threads (default $UC_HYBRID_WORKERS or 1)")
    p.add_argument("--backend", choices=BACKENDS, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="uc-hybrid", description="Hybrid stochastic/robust unit commitment.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one formulation and write a report")
    _instance_args(p)
    _solver_args(p)
    p.add_argument("--formulation", choices=FORMULATIONS, default="huc")
    p.add_argument("--partitions", type=int, default=None, help="k for the hybrid model")
    p.add_argument("--method", choices=("extensive", "spda"), default="extensive")
    p.add_argument("--out", type=Path, help="report JSON path")
    p.add_argument("--trace", type=Path, help="CCG trace JSON-lines path (spda only)")
    p.add_argument("--lp-dump", type=Path, help="write the extensive model in LP format")
    p.add_argument("--label", default="", help="row label in the summary table")

    p = sub.add_parser("frontier", help="sweep k and write ETC/WCTC per k as CSV")
    _instance_args(p)
    _solver_args(p)
    p.add_argument("--k-list", type=_k_list, required=True)
    p.add_argument("--method", choices=("extensive", "spda"), default="spda")
    p.add_argument("--out", type=Path, help="CSV path (default stdout)")

    p = sub.add_parser("cluster", help="partition the scenarios with k-means")
    p.add_argument("--scenarios", required=True, type=Path)
    p.add_argument("--probabilities", type=Path)
    p.add_argument("--partitions", required=True, type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path)

    p = sub.add_parser("validate", help="check an instance and list its problems")
    _instance_args(p)
    return parser


def _load(args):
    system, scenarios = load_instance(args.system, args.scenarios, args.probabilities)
    report = validate_system(system, scenarios)
    if not report:
        raise InputError("invalid instance:\n" + "\n".join(f"  - {f}" for f in report.findings))
    return system, scenarios


def _instance_meta(args) -> dict:
    return {"system_path": str(args.system), "scenarios_path": str(args.scenarios)}


def _workers(args) -> int:
    return args.workers if args.workers is not None else default_workers()


def cmd_solve(args) -> int:
    system, scenarios = _load(args)
    if args.lp_dump:
        form, _ = build_extensive(system, scenarios, args.formulation, args.partitions, args.seed)
        with open(args.lp_dump, "w") as fh:
            write_lp(form.model, fh)
    report, res = solve(
        system, scenarios, args.formulation, args.method, args.partitions, args.seed, args.epsilon,
        args.mip_gap, _workers(args), args.time_limit, args.backend, _instance_meta(args), args.label,
    )
    if args.out:
        report.save(args.out)
    if args.trace and args.method == "spda":
        with open(args.trace, "w") as fh:
            for r in res.reduced:
                fh.write(r.trace.to_jsonl(scenarios.labels))
    print(summary_table([report]))
    print(f"objective {report.objective}  status {report.status}")
    if report.partial:
        print("warning: a partition hit the CCG iteration cap; result is a lower bound", file=sys.stderr)
        return EXIT_LIMIT
    return EXIT_OK


def cmd_frontier(args) -> int:
    system, scenarios = _load(args)
    rows = frontier(system, scenarios, args.k_list, args.seed, args.epsilon, args.mip_gap, _workers(args),
                    args.time_limit, args.backend, args.method)
    text = frontier_csv(rows)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_cluster(args) -> int:
    scenarios = load_scenarios(args.scenarios, probabilities_path=args.probabilities)
    pm = cluster_scenarios(scenarios, args.partitions, args.seed)
    text = json.dumps(pm.to_dict(), indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_validate(args) -> int:
    system, scenarios = load_instance(args.system, args.scenarios, args.probabilities)
    report = validate_system(system, scenarios)
    for f in report.findings:
        print(f)
    if report:
        print("ok")
        return EXIT_OK
    return EXIT_INPUT


COMMANDS = {"solve": cmd_solve, "frontier": cmd_frontier, "cluster": cmd_cluster, "validate": cmd_validate}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (InputError, InvalidK, ModelError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (SolverFailure, MaxIterations) as exc:
        print(f"solver stopped: {exc}", file=sys.stderr)
        return EXIT_LIMIT


if __name__ == "__main__":
    sys.exit(main())
