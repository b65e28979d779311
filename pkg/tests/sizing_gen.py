"""Random small sizing problems built from a wind/PV -> electrolyzer -> export template."""

import numpy as np

from rreh.model import Hyperedge, Location, TechGraph, Technology, TechnologyKind, assemble_hub
from rreh.optimize import DemandSpec, Profile, SizingProblem, StorageSpec, TechEcon, TechnoEconomics

G, IM, EX = TechnologyKind.GENERIC, TechnologyKind.IMPORT, TechnologyKind.EXPORT


def random_sizing_problem(rng: np.random.Generator) -> SizingProblem:
    steps = int(rng.integers(1, 4))
    sources = ["Wind"] if rng.random() < 0.6 else ["Wind", "PV"]
    with_import = rng.random() < 0.3
    with_o2 = rng.random() < 0.4
    with_battery = rng.random() < 0.25

    techs = [Technology(s, "l1", G, frozenset(), {"electricity"}) for s in sources]
    el_in = {"electricity"} | ({"H2O"} if with_import else set())
    el_out = {"H2"} | ({"O2"} if with_o2 else set())
    techs.append(Technology("electrolyzer", "l1", G, el_in, el_out))
    techs.append(Technology("export", "l1", EX, {"H2"}, frozenset()))
    elec_takers = {"electrolyzer@l1"}
    if with_battery:
        techs.append(Technology("Battery", "l1", G, {"electricity"}, {"electricity"}))
        elec_takers.add("Battery@l1")
    if with_import:
        techs.append(Technology("import", "l1", IM, frozenset(), {"H2O"}))
    edges = [Hyperedge("electricity", {f"{s}@l1" for s in sources}, elec_takers)]
    if with_battery:
        edges.append(Hyperedge("electricity", {"Battery@l1"}, {"electrolyzer@l1"}))
    edges.append(Hyperedge("H2", {"electrolyzer@l1"}, {"export@l1"}))
    if with_import:
        edges.append(Hyperedge("H2O", {"import@l1"}, {"electrolyzer@l1"}))
    if with_o2:
        edges.append(Hyperedge("O2", {"electrolyzer@l1"}, frozenset()))
    loc = Location("l1", "site", (("wind", "high"),), "low")
    hub = assemble_hub("random", [loc], TechGraph(tuple(techs), tuple(edges)))

    def r(lo, hi):
        return float(np.round(rng.uniform(lo, hi), 3))

    econ = {}
    profiles = {}
    for s in sources:
        pid = s.lower()
        profiles[pid] = Profile(pid, tuple(float(v) for v in np.round(rng.uniform(0.0, 1.0, steps), 3)))
        hi = np.inf if rng.random() < 0.8 else r(0.5, 3.0)
        econ[f"{s}@l1"] = TechEcon(r(1, 20), r(0, 1), {"electricity": r(0.5, 1.5)}, (0.0, hi), profile=pid)
    conv = {"electricity": -r(0.5, 2.0), "H2": r(0.5, 1.5)}
    if with_import:
        conv["H2O"] = -r(0.1, 1.0)
    if with_o2:
        conv["O2"] = r(0.0, 1.0)
    lo = 0.0 if rng.random() < 0.8 else r(0.0, 1.0)
    econ["electrolyzer@l1"] = TechEcon(r(1, 20), r(0, 1), conv, (lo, np.inf))
    if with_battery:
        econ["Battery@l1"] = TechEcon(r(0, 5), 0.0, {}, storage=StorageSpec(r(0.5, 1.0), r(0.5, 1.0), r(0.5, 4.0)))
    if with_import:
        econ["import@l1"] = TechEcon(0.0, r(0, 1))
    target = "per_step" if rng.random() < 0.7 else "total_over_horizon"
    qty = 0.0 if rng.random() < 0.1 else r(0.1, 2.0)
    boundary = "cyclic" if rng.random() < 0.7 else "free-start-zero"
    return SizingProblem(
        hub, TechnoEconomics(econ, steps, 1.0, boundary), profiles, [DemandSpec("H2", qty, target)], steps, 1.0, boundary
    )
