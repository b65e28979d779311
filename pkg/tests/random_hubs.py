"""Seeded random hubs drawn from the same pools as the hypothesis strategies."""

import numpy as np

from rreh.model import Hyperedge, Location, TechGraph, Technology, TechnologyKind, accepts, assemble_hub
from strategies import COMMODITIES, LEVELS, LOC_IDS, RESOURCES, TECH_NAMES

NAMES = ["Greenland", "Algerian desert", 'Site "B"', "coast  line", "l"]
KINDS = list(TechnologyKind)


def _subset(rng, pool, lo, hi):
    k = int(rng.integers(lo, hi + 1))
    return frozenset(rng.choice(pool, size=min(k, len(pool)), replace=False).tolist())


def random_hub(rng: np.random.Generator, max_techs=12, max_edges=20, with_asserts=False):
    loc_ids = sorted(_subset(rng, LOC_IDS, 1, 3))
    locs = []
    for lid in loc_ids:
        res = sorted(_subset(rng, RESOURCES, 1, 3))
        pot = tuple((r, str(rng.choice(LEVELS))) for r in res)
        locs.append(Location(lid, str(rng.choice(NAMES)), pot, str(rng.choice(LEVELS))))

    pairs = [(n, l) for n in TECH_NAMES for l in loc_ids]
    picked = rng.choice(len(pairs), size=min(int(rng.integers(1, max_techs + 1)), len(pairs)), replace=False)
    techs = []
    for i in picked:
        name, loc = pairs[i]
        kind = KINDS[int(rng.integers(len(KINDS)))]
        ins = _subset(rng, COMMODITIES, 0, 4) if kind is not TechnologyKind.IMPORT else frozenset()
        generic_like = kind in (TechnologyKind.GENERIC, TechnologyKind.IMPORT)
        outs = _subset(rng, COMMODITIES, 0, 4) if generic_like else frozenset()
        techs.append(Technology(name, loc, kind, ins, outs))

    produced = sorted({c for t in techs for c in t.outputs})
    edges, seen = [], set()
    for _ in range(int(rng.integers(0, max_edges + 1)) if produced else 0):
        c = produced[int(rng.integers(len(produced)))]
        makers = sorted(t.key for t in techs if c in t.outputs)
        takers = sorted(t.key for t in techs if accepts(t.inputs, c) is not None)
        prod = _subset(rng, makers, 1, len(makers))
        cons = _subset(rng, takers, 0, len(takers)) if takers else frozenset()
        if (c, prod, cons) not in seen:
            seen.add((c, prod, cons))
            edges.append(Hyperedge(c, prod, cons))

    declared = None
    if with_asserts and rng.random() < 0.5:
        declared = {n: _subset(rng, COMMODITIES, 0, 4) for n in sorted(_subset(rng, list("CEIBO"), 0, 5))}
    hub_id = str(rng.choice(["h", "greenland", "algeria ch4", "r_1"]))
    return assemble_hub(hub_id, locs, TechGraph(tuple(techs), tuple(edges)), declared)
