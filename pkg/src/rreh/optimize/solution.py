"""Solve a sizing LP and map the raw vector back onto hub entities."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from rreh.optimize.problem import SizingLP, SizingProblem, build_lp
from rreh.optimize.simplex import LPResult, Status, Tolerances, optimality_report, solve_lp


@dataclass
class SizingSolution:
    status: Status
    objective: float | None = None
    capacities: dict[str, float] = field(default_factory=dict)
    activities: dict[str, list[float]] = field(default_factory=dict)
    flows: dict[str, list[float]] = field(default_factory=dict)
    storage_levels: dict[str, list[float]] = field(default_factory=dict)
    disposal: dict[str, list[float]] = field(default_factory=dict)
    cost_breakdown: dict[str, tuple[float, float]] = field(default_factory=dict)
    duals: dict[str, float] = field(default_factory=dict)
    raw: LPResult | None = None
    model: SizingLP | None = None

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL

    def disposal_totals(self) -> dict[str, float]:
        """Disposed amount per commodity over the horizon."""
        totals: dict[str, float] = {}
        for label, series in self.disposal.items():
            c = label.split(",", 1)[1]
            totals[c] = totals.get(c, 0.0) + float(sum(series))
        return dict(sorted(totals.items()))


def _clean(v: float) -> float:
    # suppress round-off noise so reports print 0 instead of 1e-17
    return 0.0 if abs(v) < 1e-12 else float(v)


def solve(problem: SizingProblem | SizingLP, tol: Tolerances | None = None) -> SizingSolution:
    model = problem if isinstance(problem, SizingLP) else build_lp(problem)
    res = solve_lp(model.lp, tol)
    if res.status is not Status.OPTIMAL:
        return SizingSolution(res.status, raw=res, model=model)

    x = res.x
    prob = model.problem
    T = prob.steps
    sol = SizingSolution(Status.OPTIMAL, objective=_clean(res.objective), raw=res, model=model)
    for t in prob.hub.technologies:
        key = t.key
        econ = prob.econ.for_tech(t)
        series = [_clean(x[model.act[(key, tau)]]) for tau in range(T)]
        sol.activities[key] = series
        cap = _clean(x[model.cap[key]]) if key in model.cap else None
        if cap is not None:
            sol.capacities[key] = cap
        capex = econ.capex_annuity * (cap or 0.0)
        opex = econ.opex_var * sum(series)
        sol.cost_breakdown[key] = (_clean(capex), _clean(opex))
    for i, e in enumerate(model.edges):
        sol.flows[f"{e.commodity}:{e.producer}->{e.consumer}"] = [_clean(x[model.flow[(i, tau)]]) for tau in range(T)]
    for key in sorted(model.storage):
        sol.storage_levels[key] = [_clean(x[model.level[(key, tau)]]) for tau in range(T + 1)]
    pairs = sorted({(k, c) for (k, c, _) in model.disposal})
    for k, c in pairs:
        sol.disposal[f"{k},{c}"] = [_clean(x[model.disposal[(k, c, tau)]]) for tau in range(T)]
    lp = model.lp
    sol.duals = {name: float(v) for name, v in zip(lp.ub_names + lp.eq_names, np.concatenate([res.y_ub, res.y_eq]))}
    return sol


def check_solution(sol: SizingSolution) -> dict[str, float]:
    """Worst violations of the solution's post-conditions (all should be ~0)."""
    model, res = sol.model, sol.raw
    lp = model.lp
    x = res.x
    checks = optimality_report(lp, res)

    def scaled(rows):
        if not rows:
            return 0.0
        A = lp.A_eq[rows]
        s = np.abs(A).max(axis=1)
        s[s == 0] = 1.0
        return float((np.abs(A @ x - lp.b_eq[rows]) / s).max())

    checks["conservation"] = scaled(model.balance_rows)
    cap_rows = model.capacity_rows
    checks["capacity"] = float(np.maximum(lp.A_ub[cap_rows] @ x - lp.b_ub[cap_rows], 0.0).max(initial=0.0))
    T = model.problem.steps
    checks["cyclicity"] = (
        float(max((abs(x[model.level[(k, 0)]] - x[model.level[(k, T)]]) for k in model.storage), default=0.0))
        if model.problem.storage_boundary == "cyclic"
        else 0.0
    )
    return checks
