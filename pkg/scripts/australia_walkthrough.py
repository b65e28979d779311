"""Walk the methanol hub through characterization, design review and sizing."""

import argparse
from pathlib import Path

from rreh.diff import diff_hubs, render_diff
from rreh.dsl import parse_file
from rreh.model import SET_NAMES, validate
from rreh.optimize import load_annex, make_problem, profile_ids, report, resolve_profiles, solve

ROOT = Path(__file__).resolve().parent.parent
FIX = ROOT / "fixtures"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--compare", default="greenland", help="fixture to diff against")
    ap.add_argument("--format", choices=["text", "json", "csv"], default="text")
    args = ap.parse_args()

    hub = parse_file(FIX / "australia_ch3oh.rreh").hub
    rep = validate(hub)
    print(f"{hub.id}: {len(hub.technologies)} technologies, {len(hub.edges)} hyperedges, "
          f"{len(rep.errors)} errors, {len(rep.warnings)} warnings")
    for name in SET_NAMES:
        print(f"  {name} = {{{', '.join(hub.derived.get(name))}}}")

    other = parse_file(FIX / f"{args.compare}.rreh").hub
    print()
    print(render_diff(diff_hubs(other, hub), "table"), end="")

    econ = load_annex(FIX / "australia_ch3oh.econ.toml")
    profiles = resolve_profiles(profile_ids(hub, econ), econ.steps, FIX / "profiles" / "australia", None)
    problem = make_problem(hub, econ, profiles)
    sol = solve(problem)
    print()
    print(report(sol, problem, args.format), end="")


if __name__ == "__main__":
    main()
