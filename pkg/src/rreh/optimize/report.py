"""Text, JSON and CSV renderings of an optimal sizing solution."""

from __future__ import annotations

import csv
import io
import json

from rreh.optimize.problem import SizingProblem
from rreh.optimize.solution import SizingSolution

SIZING_SCHEMA = "rreh-sizing/1"


class NotOptimal(ValueError):
    pass


def _num(v: float) -> str:
    return f"{v:.6g}"


def cost_drivers(sol: SizingSolution) -> list[tuple[str, float, float]]:
    """(tech, total cost, share) sorted by cost descending, then key."""
    totals = {k: capex + opex for k, (capex, opex) in sol.cost_breakdown.items()}
    grand = sum(totals.values())
    rows = [(k, v, (v / grand if grand > 0 else 0.0)) for k, v in totals.items()]
    return sorted(rows, key=lambda r: (-r[1], r[0]))


def utilization(sol: SizingSolution) -> dict[str, float | str]:
    """Mean activity over capacity; "idle" when both are zero."""
    out: dict[str, float | str] = {}
    for key, cap in sol.capacities.items():
        series = sol.activities[key]
        mean = sum(series) / len(series) if series else 0.0
        if cap <= 0:
            out[key] = "idle" if mean <= 0 else float("inf")
        else:
            out[key] = mean / cap
    return out


def report(sol: SizingSolution, problem: SizingProblem, format: str = "text") -> str:
    if not sol.optimal:
        raise NotOptimal(f"no report for a {sol.status.value} solution")
    if format == "text":
        return _text(sol, problem)
    if format == "json":
        return _json(sol, problem)
    if format == "csv":
        return _csv(sol, problem)
    raise ValueError(f"unknown report format {format!r}")


def _text(sol: SizingSolution, problem: SizingProblem) -> str:
    util = utilization(sol)
    lines = [
        f"hub: {problem.hub.id}",
        f"status: {sol.status.value}",
        f"horizon: {problem.steps} steps of {_num(problem.step_hours)} h",
        f"objective: {_num(sol.objective)}",
        "",
        "cost drivers:",
    ]
    width = max((len(k) for k in sol.cost_breakdown), default=4)
    for key, total, share in cost_drivers(sol):
        capex, opex = sol.cost_breakdown[key]
        cap = sol.capacities.get(key)
        u = util.get(key)
        cap_s = "-" if cap is None else _num(cap)
        u_s = "-" if u is None else (u if isinstance(u, str) else f"{u:.3f}")
        lines.append(
            f"  {key.ljust(width)}  {share * 100:6.2f}%  cost {_num(total)} (capex {_num(capex)}, opex {_num(opex)})"
            f"  capacity {cap_s}  utilization {u_s}"
        )
    totals = sol.disposal_totals()
    lines += ["", "byproduct disposal:"]
    if totals:
        lines += [f"  {c}: {_num(v)}" for c, v in totals.items()]
    else:
        lines.append("  none")
    if sol.storage_levels:
        lines += ["", "storage levels:"]
        lines += [f"  {k}: " + " ".join(_num(v) for v in vals) for k, vals in sol.storage_levels.items()]
    return "\n".join(lines) + "\n"


def _r(v):
    # 12 significant digits hides round-off without losing anything meaningful
    return float(f"{v:.12g}") if isinstance(v, float) else v


def _json(sol: SizingSolution, problem: SizingProblem) -> str:
    util = utilization(sol)
    doc = {
        "schema": SIZING_SCHEMA,
        "hub": problem.hub.id,
        "status": sol.status.value,
        "steps": problem.steps,
        "objective": _r(sol.objective),
        "capacities": {k: _r(v) for k, v in sol.capacities.items()},
        "costBreakdown": [
            {
                "tech": key,
                "capex": _r(sol.cost_breakdown[key][0]),
                "opex": _r(sol.cost_breakdown[key][1]),
                "share": _r(share),
                "utilization": _r(util.get(key)),
            }
            for key, _, share in cost_drivers(sol)
        ],
        "disposal": {k: _r(v) for k, v in sol.disposal_totals().items()},
        "storageLevels": {k: [_r(v) for v in vals] for k, vals in sol.storage_levels.items()},
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _csv(sol: SizingSolution, problem: SizingProblem) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["tech", "timestep", "activity"])
    for key in sorted(sol.activities):
        for tau, v in enumerate(sol.activities[key]):
            w.writerow([key, tau, _num(v)])
    return buf.getvalue()
