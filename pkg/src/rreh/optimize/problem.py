"""Time-indexed sizing-and-dispatch LP built from a hub and its annex.

Variable ordering (columns), each block in the order shown:

1. ``K[t]``        capacity, generic technologies sorted by key
2. ``x[t,τ]``      activity, every technology sorted by key, then step
3. ``f[e,τ]``      flow on each expanded simple edge (expansion order), then step
4. ``s[t,τ]``      storage level for storage technologies, steps 0..T
5. ``d[t,c,τ]``    free disposal of output ``c`` of ``t`` that reaches no consumer

Rows are named after the variable block they constrain.  Balances are kept
per (technology, commodity, step); since each technology sits at one
location nothing moves between locations without a link technology.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from rreh.model import (
    Hub,
    SimpleEdge,
    Technology,
    TechnologyKind,
    accepts,
    byproduct_pairs,
    expand_hyperedges,
    validate,
)
from rreh.optimize.annex import AnnexError, DemandSpec, TechnoEconomics, stored_commodity
from rreh.optimize.profiles import Profile
from rreh.optimize.simplex import LinearProgram

SINK_KINDS = (TechnologyKind.EXPORT, TechnologyKind.OPPORTUNITY)


class ProblemError(ValueError):
    pass


class UnreachableDemand(ProblemError):
    def __init__(self, commodity: str, reached: list[str]):
        cut = ", ".join(reached) if reached else "nothing"
        super().__init__(f"demand for {commodity} cannot be reached from any source; sources reach only: {cut}")
        self.commodity = commodity
        self.reached = reached


@dataclass
class SizingProblem:
    hub: Hub
    econ: TechnoEconomics
    profiles: dict[str, Profile]
    demands: list[DemandSpec]
    steps: int
    step_hours: float = 1.0
    storage_boundary: str = "cyclic"

    def __post_init__(self):
        if self.steps < 1:
            raise ProblemError("horizon needs at least one step")
        errors = validate(self.hub).errors
        if errors:
            raise ProblemError(f"hub has validation errors: {', '.join(sorted({f.code for f in errors}))}")
        self.econ.check_against(self.hub)
        for t in self.hub.technologies:
            ref = self.econ.for_tech(t).profile
            if ref is None:
                continue
            if ref not in self.profiles:
                raise ProblemError(f"{t.key}: profile {ref!r} is not available")
            if len(self.profiles[ref]) != self.steps:
                raise ProblemError(f"profile {ref!r} has {len(self.profiles[ref])} values, horizon is {self.steps}")
        for d in self.demands:
            if not sinks_for(self.hub, d.commodity):
                raise ProblemError(f"demand commodity {d.commodity} is not consumed by an export or opportunity technology")
        check_reachability(self.hub, self.demands)

    def availability(self, tech: Technology) -> np.ndarray:
        ref = self.econ.for_tech(tech).profile
        if ref is None:
            return np.ones(self.steps)
        return np.asarray(self.profiles[ref].values, dtype=float)


def sinks_for(hub: Hub, commodity: str) -> list[tuple[Technology, str]]:
    out = []
    for t in hub.technologies:
        if t.kind in SINK_KINDS:
            key = accepts(t.inputs, commodity)
            if key is not None:
                out.append((t, key))
    return out


def check_reachability(hub: Hub, demands: list[DemandSpec]) -> None:
    """Forward search from sources (imports and input-free generic techs) over expanded edges."""
    if not demands:
        return
    edges = expand_hyperedges(hub.graph)
    reached = {
        t.key
        for t in hub.technologies
        if t.kind is TechnologyKind.IMPORT or (t.kind is TechnologyKind.GENERIC and not t.inputs)
    }
    delivered: set[tuple[str, str]] = set()
    changed = True
    while changed:
        changed = False
        for e in edges:
            if e.producer in reached:
                delivered.add((e.consumer, e.commodity))
                if e.consumer not in reached:
                    reached.add(e.consumer)
                    changed = True
    for d in demands:
        ok = any(
            t.key in reached and any(accepts([key], c) for (k, c) in delivered if k == t.key)
            for t, key in sinks_for(hub, d.commodity)
        )
        if not ok:
            raise UnreachableDemand(d.commodity, sorted(reached))


@dataclass
class SizingLP:
    lp: LinearProgram
    problem: SizingProblem
    edges: list[SimpleEdge]
    cap: dict[str, int] = field(default_factory=dict)
    act: dict[tuple[str, int], int] = field(default_factory=dict)
    flow: dict[tuple[int, int], int] = field(default_factory=dict)
    level: dict[tuple[str, int], int] = field(default_factory=dict)
    disposal: dict[tuple[str, str, int], int] = field(default_factory=dict)
    balance_rows: list[int] = field(default_factory=list)
    capacity_rows: list[int] = field(default_factory=list)
    storage: dict[str, str] = field(default_factory=dict)


class _Builder:
    def __init__(self):
        self.names: list[str] = []
        self.cost: list[float] = []
        self.upper: list[float] = []
        self.eq: list[tuple[dict[int, float], float, str]] = []
        self.ub: list[tuple[dict[int, float], float, str]] = []

    def var(self, name: str, cost: float = 0.0, upper: float = np.inf) -> int:
        self.names.append(name)
        self.cost.append(cost)
        self.upper.append(upper)
        return len(self.names) - 1

    def row(self, kind: str, coefs: dict[int, float], rhs: float, name: str) -> int:
        rows = self.eq if kind == "eq" else self.ub
        rows.append((coefs, rhs, name))
        return len(rows) - 1

    def build(self) -> LinearProgram:
        n = len(self.names)

        def dense(rows):
            A = np.zeros((len(rows), n))
            for i, (coefs, _, _) in enumerate(rows):
                for j, v in coefs.items():
                    A[i, j] += v
            return A, np.array([r[1] for r in rows], dtype=float), [r[2] for r in rows]

        A_ub, b_ub, ub_names = dense(self.ub)
        A_eq, b_eq, eq_names = dense(self.eq)
        return LinearProgram(
            np.array(self.cost), A_ub, b_ub, A_eq, b_eq, np.array(self.upper), list(self.names), ub_names, eq_names
        )


def _add(coefs: dict[int, float], j: int, v: float) -> None:
    coefs[j] = coefs.get(j, 0.0) + v


def build_lp(problem: SizingProblem) -> SizingLP:
    hub, econ, T = problem.hub, problem.econ, problem.steps
    techs = hub.technologies
    edges = expand_hyperedges(hub.graph)
    b = _Builder()
    out = SizingLP(lp=None, problem=problem, edges=edges)  # type: ignore[arg-type]

    storage = {t.key: stored_commodity(t) for t in techs if econ.for_tech(t).storage is not None}
    out.storage = storage

    for t in techs:
        if t.kind is TechnologyKind.GENERIC:
            e = econ.for_tech(t)
            out.cap[t.key] = b.var(f"K[{t.key}]", e.capex_annuity, e.bounds[1])
    for t in techs:
        opex = econ.for_tech(t).opex_var
        for tau in range(T):
            out.act[(t.key, tau)] = b.var(f"x[{t.key},{tau}]", opex)
    for i, e in enumerate(edges):
        for tau in range(T):
            out.flow[(i, tau)] = b.var(f"f[{e.commodity}:{e.producer}->{e.consumer},{tau}]")
    for key in sorted(storage):
        for tau in range(T + 1):
            out.level[(key, tau)] = b.var(f"s[{key},{tau}]")

    vented = {(p, e.commodity) for e in hub.edges if e.vented for p in e.producers}
    disp_pairs = sorted((set(byproduct_pairs(hub.graph)) | vented) - set(storage.items()))
    for key, c in disp_pairs:
        for tau in range(T):
            out.disposal[(key, c, tau)] = b.var(f"d[{key},{c},{tau}]")

    # edge lookups: outgoing per (producer, commodity), incoming per (consumer, input key)
    outgoing: dict[tuple[str, str], list[int]] = defaultdict(list)
    incoming: dict[tuple[str, str], list[int]] = defaultdict(list)
    by_key = hub.graph.by_key
    for i, e in enumerate(edges):
        outgoing[(e.producer, e.commodity)].append(i)
        incoming[(e.consumer, accepts(by_key[e.consumer].inputs, e.commodity))].append(i)

    # (a) balances
    for t in techs:
        consume, produce = econ.for_tech(t).coefficients(t)
        stored = storage.get(t.key)
        for c in sorted(t.outputs):
            if c == stored:
                continue
            for tau in range(T):
                coefs: dict[int, float] = {}
                _add(coefs, out.act[(t.key, tau)], produce[c])
                for i in outgoing[(t.key, c)]:
                    _add(coefs, out.flow[(i, tau)], -1.0)
                if (t.key, c, tau) in out.disposal:
                    _add(coefs, out.disposal[(t.key, c, tau)], -1.0)
                out.balance_rows.append(b.row("eq", coefs, 0.0, f"out[{t.key},{c},{tau}]"))
        for c in sorted(t.inputs):
            for tau in range(T):
                coefs = {}
                for i in incoming[(t.key, c)]:
                    _add(coefs, out.flow[(i, tau)], 1.0)
                _add(coefs, out.act[(t.key, tau)], -1.0 if c == stored else -consume[c])
                out.balance_rows.append(b.row("eq", coefs, 0.0, f"in[{t.key},{c},{tau}]"))

    # (b) capacity and availability
    for t in techs:
        if t.key not in out.cap:
            continue
        k = out.cap[t.key]
        avail = problem.availability(t)
        for tau in range(T):
            out.capacity_rows.append(
                b.row("ub", {out.act[(t.key, tau)]: 1.0, k: -float(avail[tau])}, 0.0, f"cap[{t.key},{tau}]")
            )

    # (c) storage dynamics
    for key in sorted(storage):
        t = by_key[key]
        spec = econ.for_tech(t).storage
        c = storage[key]
        k = out.cap[key]
        ratio = spec.energy_ratio_hours / problem.step_hours
        for tau in range(T):
            coefs = {out.level[(key, tau + 1)]: 1.0, out.level[(key, tau)]: -1.0}
            _add(coefs, out.act[(key, tau)], -spec.charge_efficiency)
            dis = {}
            for i in outgoing[(key, c)]:
                _add(coefs, out.flow[(i, tau)], 1.0 / spec.discharge_efficiency)
                dis[out.flow[(i, tau)]] = 1.0
            b.row("eq", coefs, 0.0, f"store[{key},{tau}]")
            if dis:
                dis[k] = -1.0
                out.capacity_rows.append(b.row("ub", dis, 0.0, f"discharge[{key},{tau}]"))
        for tau in range(T + 1):
            out.capacity_rows.append(
                b.row("ub", {out.level[(key, tau)]: 1.0, k: -ratio}, 0.0, f"energy[{key},{tau}]")
            )
        if problem.storage_boundary == "cyclic":
            b.row("eq", {out.level[(key, 0)]: 1.0, out.level[(key, T)]: -1.0}, 0.0, f"cyclic[{key}]")
        else:
            b.row("eq", {out.level[(key, 0)]: 1.0}, 0.0, f"start[{key}]")

    # (d) demand
    for n, d in enumerate(problem.demands):
        sink_flows = [i for t, key in sinks_for(hub, d.commodity) for i in incoming[(t.key, key)]]
        steps = [[tau] for tau in range(T)] if d.target == "per_step" else [list(range(T))]
        for group in steps:
            coefs = {}
            for tau in group:
                for i in sink_flows:
                    _add(coefs, out.flow[(i, tau)], 1.0)
            label = group[0] if len(group) == 1 else "all"
            b.row("eq", coefs, d.quantity, f"demand[{n}:{d.commodity},{label}]")

    # (e) capacity minimums (maximums are variable bounds)
    for t in techs:
        if t.key in out.cap:
            lo = econ.for_tech(t).bounds[0]
            if lo > 0:
                b.row("ub", {out.cap[t.key]: -1.0}, -lo, f"capmin[{t.key}]")

    out.lp = b.build()
    return out


def make_problem(
    hub: Hub,
    econ: TechnoEconomics,
    profiles: dict[str, Profile],
    demands: list[DemandSpec] | None = None,
    steps: int | None = None,
) -> SizingProblem:
    """Assemble a problem, taking horizon and demands from the annex unless overridden."""
    steps = steps if steps is not None else econ.steps
    if steps is None:
        raise AnnexError("horizon length is neither in the annex nor given explicitly")
    return SizingProblem(
        hub,
        econ,
        profiles,
        list(econ.demands if demands is None else demands),
        steps,
        econ.step_hours,
        econ.storage_boundary,
    )


def profile_ids(hub: Hub, econ: TechnoEconomics) -> list[str]:
    return sorted({econ.for_tech(t).profile for t in hub.technologies if econ.for_tech(t).profile})
