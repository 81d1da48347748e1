"""Write the bundled 14-node system file.

Topology, reactances and base-case load shares are the standard IEEE 14-bus
values. Generator costs, ramp data, line ratings and the daily load profile
are synthesized for this package.
"""

import json
import sys
from pathlib import Path

LINES = [
    (1, 2, 0.05917), (1, 5, 0.22304), (2, 3, 0.19797), (2, 4, 0.17632), (2, 5, 0.17388),
    (3, 4, 0.17103), (4, 5, 0.04211), (4, 7, 0.20912), (4, 9, 0.55618), (5, 6, 0.25202),
    (6, 11, 0.19890), (6, 12, 0.25581), (6, 13, 0.13027), (7, 8, 0.17615), (7, 9, 0.11001),
    (9, 10, 0.08450), (9, 14, 0.27038), (10, 11, 0.19207), (12, 13, 0.19988), (13, 14, 0.34802),
]
RATINGS = {
    (1, 2): 160, (1, 5): 90, (2, 3): 90, (2, 4): 70, (2, 5): 70, (3, 4): 60, (4, 5): 90,
    (4, 7): 60, (4, 9): 40, (5, 6): 70, (6, 11): 40, (6, 12): 30, (6, 13): 50, (7, 8): 100,
    (7, 9): 80, (9, 10): 40, (9, 14): 40, (10, 11): 30, (12, 13): 20, (13, 14): 30,
}
BASE_LOAD = {2: 21.7, 3: 94.2, 4: 47.8, 5: 7.6, 6: 11.2, 9: 29.5, 10: 9.0, 11: 3.5, 12: 6.1, 13: 13.5, 14: 14.9}
PROFILE = [
    0.80, 0.76, 0.73, 0.72, 0.73, 0.78, 0.88, 0.98, 1.03, 1.05, 1.06, 1.07,
    1.06, 1.04, 1.03, 1.06, 1.12, 1.18, 1.20, 1.17, 1.12, 1.03, 0.94, 0.86,
]


def gen(id, node, cf, cv, csu, csd, pmax, pmin, ru, rd, psu, psd, ut, dt, pis=0.0, on=0, off=0):
    return dict(
        id=id, node=f"n{node}", fixed_cost=cf, variable_cost=cv, startup_cost=csu, shutdown_cost=csd,
        p_max=pmax, p_min=pmin, ramp_up=ru, ramp_down=rd, startup_ramp=psu, shutdown_ramp=psd,
        min_up=ut, min_down=dt, initial_power=pis, periods_on=on, periods_off=off,
    )


GENERATORS = [
    gen("g1", 1, 950, 19, 3500, 600, 200, 70, 60, 60, 80, 80, 8, 6, pis=120.0, on=12),
    gen("g2", 2, 420, 24, 1400, 250, 110, 30, 45, 45, 45, 45, 4, 3, pis=55.0, on=6),
    gen("g3", 3, 380, 31, 1300, 200, 100, 35, 35, 35, 40, 40, 5, 4, off=8),
    gen("g4", 6, 300, 27, 900, 150, 80, 20, 40, 40, 40, 40, 3, 3, pis=40.0, on=4),
    gen("g5", 8, 120, 38, 300, 60, 50, 8, 50, 50, 50, 50, 1, 1, off=2),
]


def main(out: Path) -> None:
    doc = {
        "provenance": (
            "artifact-defined: IEEE 14-bus topology, reactances and load shares; "
            "generator, rating and load-profile data synthesized"
        ),
        "horizon": len(PROFILE),
        "nodes": [f"n{i}" for i in range(1, 15)],
        "lines": [
            {"from_node": f"n{a}", "to_node": f"n{b}", "reactance": x, "capacity": float(RATINGS[(a, b)])}
            for a, b, x in LINES
        ],
        "generators": GENERATORS,
        "loads": [
            {"id": f"d{n}", "node": f"n{n}", "demand": [round(mw * f, 3) for f in PROFILE]}
            for n, mw in BASE_LOAD.items()
        ],
        "wind_farms": [{"id": "f1", "node": "n5"}],
        "shed_cost": 1000.0,
        "reference_node": "n1",
        "base_mva": 100.0,
    }
    out.write_text(json.dumps(doc, indent=2) + "\n")


if __name__ == "__main__":
    target = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).parents[1] / "src/uc_hybrid/fixtures/ieee14_system.json"
    main(target)
