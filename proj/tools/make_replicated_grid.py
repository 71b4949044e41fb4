#!/usr/bin/env python3
"""Write a scaling-test case made of identical areas joined in a ring.

Each area has a generator bus with its shunt capacitor, a step-up
transformer, a high-voltage bus and a constant-impedance load. Area 1 also
holds the ideal source that fixes the angle reference. Adjacent areas are
tied by Pi lines, and the last area closes the ring back to the first.

    python3 tools/make_replicated_grid.py --areas 10 --output grid10.json
    build/sasemt validate --case grid10.json
"""

import argparse
import copy
import json
import sys

MACHINE_PARAMS = {
    "H": 3.5, "D": 0.0, "n_poles": 2, "Rs": 0.003,
    "r_fd": 0.0006, "r_1d": 0.0284, "r_1q": 0.00619, "r_2q": 0.02368,
    "X_fd": 0.165, "X_1d": 0.1713, "X_1q": 0.7252, "X_2q": 0.125,
    "X_ad": 1.66, "X_aq": 1.61, "X_ls": 0.15, "X_0": 0.15,
}
GOVERNOR = {"R": 0.05, "T1": 0.5, "T2": 3.0, "T3": 10.0, "Dt": 0.0, "P_max": 1.2, "P_min": 0.0}
EXCITER = {"K": 50.0, "T_E": 0.05, "T_A": 1.0, "T_B": 10.0, "E_max": 6.0, "E_min": -4.0}


def area(k, p_gen):
    gen, hv = f"G{k}", f"H{k}"
    buses = [{"name": gen, "phases": 3}, {"name": hv, "phases": 3}]
    branches = [
        {"name": f"C_{gen}", "type": "shunt_c", "from": gen, "b": 0.1},
        {"name": f"T_{k}", "type": "transformer", "from": gen, "to": hv, "r": 0.002, "x": 0.1},
        {"name": f"C_{hv}", "type": "shunt_c", "from": hv, "b": 0.1},
        {"name": f"LOAD_{k}", "type": "shunt_rl", "from": hv, "r": 1.6, "x": 0.8},
    ]
    machine = {
        "name": f"M{k}",
        "bus": gen,
        "params": copy.deepcopy(MACHINE_PARAMS),
        "governor": copy.deepcopy(GOVERNOR),
        "exciter": copy.deepcopy(EXCITER),
        "operating_point": {"p": p_gen, "q": 0.1, "v": 1.0, "angle_deg": 0.0},
    }
    return buses, branches, machine


def build(areas, p_gen, fault_area, t_end):
    buses, branches, machines = [], [], []
    for k in range(1, areas + 1):
        b, br, m = area(k, p_gen)
        buses += b
        branches += br
        machines.append(m)
    ties = [(k, k % areas + 1) for k in range(1, areas + 1)] if areas > 2 else [(1, 2)] if areas == 2 else []
    for a, b in ties:
        branches.append({"name": f"TIE_{a}_{b}", "type": "pi_line", "from": f"H{a}", "to": f"H{b}",
                         "r": 0.01, "x": 0.3, "b": 0.1})
    buses.append({"name": "INF", "phases": 3})
    branches.append({"name": "TIE_INF", "type": "pi_line", "from": "H1", "to": "INF", "r": 0.01, "x": 0.3, "b": 0.1})
    events = []
    if fault_area:
        events = [
            {"type": "fault_on", "time": 0.1, "target": f"H{fault_area}", "r_fault": 0.01},
            {"type": "fault_off", "time": 0.15, "target": f"H{fault_area}"},
        ]
    return {
        "schema_version": 1,
        "name": f"replicated_{areas}",
        "description": f"{areas} identical generator areas joined in a ring, with an ideal source behind area 1.",
        "units": "pu",
        "frequency_hz": 60,
        "buses": buses,
        "branches": branches,
        "sources": [{"name": "GRID", "bus": "INF", "kind": "voltage", "magnitude": 1.0, "angle_deg": 0.0}],
        "machines": machines,
        "events": events,
        "initial_state": {"mode": "phasor"},
        "solver": {"order": 30, "eps_imbalance": 0.01, "dt_init": 1e-4, "dt_min": 1e-8, "dt_cap": 2e-3,
                   "growth": 1.5, "eps_switch": 1e-7, "switch_detection": True, "t_end": t_end,
                   "imbalance_mode": "full"},
        "output": {"states": "all", "dense_interval": 0},
        "islanding": "error",
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--areas", type=int, default=10, help="number of generator areas (default 10)")
    ap.add_argument("--p-gen", type=float, default=0.5, help="active power per machine, pu (default 0.5)")
    ap.add_argument("--fault-area", type=int, default=0,
                    help="area whose HV bus gets a 50 ms fault at t=0.1 s (0 for none)")
    ap.add_argument("--t-end", type=float, default=0.5, help="simulated time in seconds (default 0.5)")
    ap.add_argument("--output", default="-", help="output path, '-' for stdout")
    args = ap.parse_args()
    if args.areas < 1:
        ap.error("--areas must be at least 1")
    if not 0 <= args.fault_area <= args.areas:
        ap.error("--fault-area must be between 0 and --areas")
    text = json.dumps(build(args.areas, args.p_gen, args.fault_area, args.t_end), indent=2) + "\n"
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(text)


if __name__ == "__main__":
    main()
