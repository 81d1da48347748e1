"""Reading and writing system JSON and long-format scenario CSV files."""

from __future__ import annotations

import csv
import json
from dataclasses import asdict
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .system import (
    DEFAULT_BASE_MVA,
    DEFAULT_SHED_COST,
    Generator,
    Line,
    Load,
    PowerSystem,
    ScenarioSet,
    WindFarm,
)

SCENARIO_COLUMNS = ("farm", "period", "scenario", "value_mw")


class InputError(ValueError):
    """Malformed input file."""


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("uc_hybrid") / "fixtures" / name))


def system_from_dict(doc: dict) -> PowerSystem:
    try:
        return PowerSystem(
            horizon=int(doc["horizon"]),
            nodes=tuple(str(n) for n in doc["nodes"]),
            lines=tuple(
                Line(str(d["from_node"]), str(d["to_node"]), float(d["reactance"]), float(d["capacity"]))
                for d in doc.get("lines", [])
            ),
            generators=tuple(_generator(d) for d in doc.get("generators", [])),
            loads=tuple(
                Load(str(d["id"]), str(d["node"]), tuple(float(v) for v in d["demand"])) for d in doc.get("loads", [])
            ),
            wind_farms=tuple(WindFarm(str(d["id"]), str(d["node"])) for d in doc.get("wind_farms", [])),
            shed_cost=float(doc.get("shed_cost", DEFAULT_SHED_COST)),
            reference_node=None if doc.get("reference_node") is None else str(doc["reference_node"]),
            base_mva=float(doc.get("base_mva", DEFAULT_BASE_MVA)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed system document: {exc!r}") from exc


def _generator(d: dict) -> Generator:
    kw = dict(d)
    kw["id"] = str(kw["id"])
    kw["node"] = str(kw["node"])
    for key in ("min_up", "min_down", "periods_on", "periods_off"):
        if key in kw:
            kw[key] = int(kw[key])
    kw.pop("notes", None)
    return Generator(**kw)


def system_to_dict(system: PowerSystem) -> dict:
    return {
        "horizon": system.horizon,
        "nodes": list(system.nodes),
        "lines": [asdict(x) for x in system.lines],
        "generators": [asdict(x) for x in system.generators],
        "loads": [{"id": x.id, "node": x.node, "demand": list(x.demand)} for x in system.loads],
        "wind_farms": [asdict(x) for x in system.wind_farms],
        "shed_cost": system.shed_cost,
        "reference_node": system.ref,
        "base_mva": system.base_mva,
    }


def load_system(path) -> PowerSystem:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc
    return system_from_dict(doc)


def save_system(system: PowerSystem, path) -> None:
    Path(path).write_text(json.dumps(system_to_dict(system), indent=2) + "\n")


def sidecar_path(csv_path) -> Path:
    return Path(csv_path).with_suffix(".json")


def load_scenarios(
    path,
    farm_ids: Optional[Sequence[str]] = None,
    probabilities_path=None,
) -> ScenarioSet:
    """Read a long-format scenario CSV plus its optional probability sidecar.

    Farms are ordered by ``farm_ids`` when given (normally the system's wind
    farm order), otherwise by first appearance. Scenarios and periods keep
    first-appearance and numeric order respectively.
    """
    path = Path(path)
    records = []
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        missing = set(SCENARIO_COLUMNS) - set(reader.fieldnames or ())
        if missing:
            raise InputError(f"{path}: missing columns {sorted(missing)}")
        for row in reader:
            try:
                records.append((row["farm"], int(row["period"]), row["scenario"], float(row["value_mw"])))
            except ValueError as exc:
                raise InputError(f"{path}: bad row {row}") from exc
    if not records:
        raise InputError(f"{path}: no scenario rows")

    farms = list(farm_ids) if farm_ids is not None else list(dict.fromkeys(r[0] for r in records))
    labels = list(dict.fromkeys(r[2] for r in records))
    periods = sorted({r[1] for r in records})
    f_idx = {f: i for i, f in enumerate(farms)}
    s_idx = {s: i for i, s in enumerate(labels)}
    t_idx = {t: i for i, t in enumerate(periods)}
    values = np.full((len(farms), len(periods), len(labels)), np.nan)
    for farm, t, scen, v in records:
        if farm not in f_idx:
            raise InputError(f"{path}: unknown farm {farm}")
        values[f_idx[farm], t_idx[t], s_idx[scen]] = v
    if np.isnan(values).any():
        raise InputError(f"{path}: incomplete farm x period x scenario grid")

    side = Path(probabilities_path) if probabilities_path else sidecar_path(path)
    if side.exists():
        probs = _read_probabilities(side, labels)
    else:
        probs = np.full(len(labels), 1.0 / len(labels))
    return ScenarioSet(values, probs, tuple(farms), tuple(labels))


def _read_probabilities(path: Path, labels) -> np.ndarray:
    try:
        doc = json.loads(path.read_text())
        raw = doc["probabilities"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise InputError(f"{path}: expected an object with a 'probabilities' key") from exc
    if isinstance(raw, dict):
        try:
            return np.array([float(raw[s]) for s in labels])
        except KeyError as exc:
            raise InputError(f"{path}: no probability for scenario {exc}") from exc
    if len(raw) != len(labels):
        raise InputError(f"{path}: {len(raw)} probabilities for {len(labels)} scenarios")
    return np.array([float(p) for p in raw])


def save_scenarios(scenarios: ScenarioSet, path, write_probabilities: bool = True) -> None:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(SCENARIO_COLUMNS)
        for s, label in enumerate(scenarios.labels):
            for f, farm in enumerate(scenarios.farm_ids):
                for t in range(scenarios.horizon):
                    w.writerow([farm, t + 1, label, repr(float(scenarios.values[f, t, s]))])
    if write_probabilities:
        probs = {lab: float(p) for lab, p in zip(scenarios.labels, scenarios.probabilities)}
        sidecar_path(path).write_text(json.dumps({"probabilities": probs}, indent=2) + "\n")


def load_instance(system_path, scenario_path, probabilities_path=None):
    system = load_system(system_path)
    scenarios = load_scenarios(scenario_path, [f.id for f in system.wind_farms], probabilities_path)
    return system, scenarios


def load_fixture(name: str):
    """``"micro"`` or ``"ieee14"``: the bundled test instances."""
    if name == "micro":
        return load_instance(fixture_path("micro_system.json"), fixture_path("micro_scenarios.csv"))
    if name == "ieee14":
        return load_instance(fixture_path("ieee14_system.json"), fixture_path("ieee14_wind_10scen.csv"))
    raise KeyError(name)
