"""Sweep H2 demand and wind availability on the toy hub and print the optimal cost.

The uniform case is linear in demand; halving availability in two of the four
steps doubles the wind capacity needed, and a free battery recovers part of it.
"""

import argparse
from pathlib import Path

from rreh.dsl import parse_file
from rreh.optimize import DemandSpec, Profile, load_annex, make_problem, solve

ROOT = Path(__file__).resolve().parent.parent
FIX = ROOT / "fixtures"


def objective(name, low, demand):
    hub = parse_file(FIX / f"{name}.rreh").hub
    econ = load_annex(FIX / f"{name}.econ.toml")
    wind = Profile("wind", (1.0, 1.0, low, low))
    sol = solve(make_problem(hub, econ, {"wind": wind}, [DemandSpec("H2", demand)]))
    return sol.objective if sol.optimal else float("nan")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--demands", type=float, nargs="+", default=[0.0, 0.5, 1.0, 2.0])
    ap.add_argument("--lows", type=float, nargs="+", default=[1.0, 0.75, 0.5, 0.25])
    args = ap.parse_args()

    print(f"{'demand':>7} {'low':>5} {'no storage':>11} {'battery':>9}")
    for d in args.demands:
        for low in args.lows:
            a = objective("toy_wind_h2", low, d)
            b = objective("toy_wind_h2_battery", low, d)
            print(f"{d:7.2f} {low:5.2f} {a:11.4f} {b:9.4f}")


if __name__ == "__main__":
    main()
