"""``rrehc``: validate, derive, diff, export and size renewable energy hubs.

Exit codes:

    0  success
    1  validation errors (or warnings / assert mismatches with --strict)
    2  usage, parse, annex or I/O error
    3  optimization infeasible or unbounded
    4  internal numerical failure
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import numpy as np

from rreh.diff import InvalidOperand, diff_hubs, render_diff
from rreh.dsl import ParseError, export_dot, export_model_skeleton, parse_file
from rreh.dsl.serialize import hub_header, render_flow, render_location, render_tech
from rreh.model import SET_NAMES, Hub, TechnologyKind, validate

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_NUMERICAL = 0, 1, 2, 3, 4
VALIDATE_SCHEMA = "rreh-validate/1"

STEPS = (
    "Define Export Commodities",
    "Select locations",
    "Construct Technological Graph",
    "Consider Imports",
    "Assess Byproducts",
    "Identify Local Opportunities",
    "Optimize",
)


class Ctx:
    def __init__(self, quiet: bool, strict: bool):
        self.quiet = quiet
        self.strict = strict


def _err(msg: str) -> None:
    click.echo(msg, err=True)


def _load(path: str):
    """Parse a file, or print its diagnostics and exit 2."""
    try:
        return parse_file(path)
    except ParseError as exc:
        for d in exc.diagnostics:
            _err(str(d))
        sys.exit(EXIT_USAGE)
    except OSError as exc:
        _err(f"{path}: cannot read file: {exc.strerror}")
        sys.exit(EXIT_USAGE)


def _braced(items) -> str:
    return "{" + ", ".join(items) + "}"


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--no-color", is_flag=True, help="Plain output (output is never colored; accepted for scripts).")
@click.option("--quiet", "-q", is_flag=True, help="Only print primary results.")
@click.option("--strict", is_flag=True, help="Treat warnings and assert mismatches as failures.")
@click.pass_context
def main(ctx, no_color, quiet, strict):
    """Characterize, compare and size remote renewable energy hubs."""
    ctx.obj = Ctx(quiet, strict)


# -- validate -----------------------------------------------------------------


def _validate_one(path: str) -> tuple[dict, int]:
    try:
        doc = parse_file(path)
    except (ParseError, OSError) as exc:
        diags = (
            [{"location": str(d.span), "message": d.message, "notes": list(d.notes)} for d in exc.errors]
            if isinstance(exc, ParseError)
            else [{"location": path, "message": f"cannot read file: {exc.strerror}", "notes": []}]
        )
        return {"file": path, "parsed": False, "parseErrors": diags}, EXIT_USAGE
    rep = validate(doc.hub)
    rep.sort()
    entry = {"file": path, "parsed": True, "hub": doc.hub.id, **rep.as_dict()}
    entry["parseWarnings"] = [
        {"location": str(d.span), "message": d.message} for d in doc.diagnostics if d.severity == "warning"
    ]
    return entry, EXIT_OK


def _validate_text(entry: dict) -> list[str]:
    path = entry["file"]
    if not entry["parsed"]:
        lines = [f"{path}: parse failed"]
        for d in entry["parseErrors"]:
            lines.append(f"  {d['location']}: error: {d['message']}")
            lines += [f"    note: {n}" for n in d["notes"]]
        return lines
    ne, nw, ni = len(entry["errors"]), len(entry["warnings"]) + len(entry["parseWarnings"]), len(entry["infos"])
    status = "valid" if entry["valid"] else "invalid"
    lines = [f"{path}: {status} ({ne} error{'s' * (ne != 1)}, {nw} warning{'s' * (nw != 1)}, {ni} info{'s' * (ni != 1)})"]
    for level in ("errors", "warnings", "infos"):
        for f in entry[level]:
            lines.append(f"  {level[:-1]} {f['code']} {f['subject']}: {f['message']}")
    for w in entry["parseWarnings"]:
        lines.append(f"  warning {w['location']}: {w['message']}")
    return lines


@main.command("validate")
@click.argument("files", nargs=-1, required=True)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True)
@click.option("--strict", is_flag=True, help="Warnings also make the exit code 1.")
@click.pass_obj
def cmd_validate(obj: Ctx, files, fmt, strict):
    """Check hub files against every structural invariant."""
    strict = strict or obj.strict
    code = EXIT_OK
    entries = []
    for path in files:
        entry, parse_code = _validate_one(path)
        entries.append(entry)
        if parse_code:
            code = max(code, parse_code)
        elif entry["errors"] or (strict and (entry["warnings"] or entry["parseWarnings"])):
            code = max(code, EXIT_INVALID)
    if fmt == "json":
        click.echo(json.dumps({"schema": VALIDATE_SCHEMA, "files": entries}, indent=2, ensure_ascii=False))
    else:
        for entry in entries:
            lines = _validate_text(entry)
            if obj.quiet:
                lines = lines[:1]
            click.echo("\n".join(lines))
    sys.exit(code)


# -- derive -------------------------------------------------------------------


@main.command("derive")
@click.argument("file")
@click.option("--set", "which", type=click.Choice(list(SET_NAMES) + ["all"]), default="all", show_default=True)
@click.option("--strict", is_flag=True, help="Exit 1 if an assert block disagrees.")
@click.pass_obj
def cmd_derive(obj: Ctx, file, which, strict):
    """Print the derived commodity sets."""
    hub = _load(file).hub
    derived = hub.derived
    names = SET_NAMES if which == "all" else (which,)
    if which == "all":
        for n in names:
            click.echo(f"{n} = {_braced(derived.get(n))}")
    else:
        click.echo(", ".join(derived.get(which)))
    mismatch = False
    if hub.declared_sets and not obj.quiet:
        for n in names:
            if n not in hub.declared_sets:
                continue
            got, want = set(derived.get(n)), set(hub.declared_sets[n])
            if got == want:
                click.echo(f"assert {n}: MATCH")
            else:
                mismatch = True
                detail = []
                if want - got:
                    detail.append(f"declared only {_braced(sorted(want - got))}")
                if got - want:
                    detail.append(f"derived only {_braced(sorted(got - want))}")
                click.echo(f"assert {n}: MISMATCH ({'; '.join(detail)})")
    elif hub.declared_sets:
        mismatch = any(set(derived.get(n)) != set(hub.declared_sets[n]) for n in names if n in hub.declared_sets)
    sys.exit(EXIT_INVALID if mismatch and (strict or obj.strict) else EXIT_OK)


# -- diff ---------------------------------------------------------------------


@main.command("diff")
@click.argument("left")
@click.argument("right")
@click.option("--format", "fmt", type=click.Choice(["table", "json"]), default="table", show_default=True)
@click.option("--expect-same", is_flag=True, help="Exit 1 if any set differs.")
def cmd_diff(left, right, fmt, expect_same):
    """Compare two hubs set by set."""
    a, b = _load(left).hub, _load(right).hub
    try:
        report = diff_hubs(a, b)
    except InvalidOperand as exc:
        path = left if exc.side == "left" else right
        _err(f"{path}: {exc}")
        sys.exit(EXIT_INVALID)
    click.echo(render_diff(report, fmt), nl=False)
    sys.exit(EXIT_INVALID if expect_same and not report.identical else EXIT_OK)


# -- export -------------------------------------------------------------------


@main.command("export")
@click.argument("file")
@click.option("--dot", "mode", flag_value="dot", help="Graph description for graphviz.")
@click.option("--skeleton", "mode", flag_value="skeleton", help="Node/hyperedge skeleton for an optimization model.")
@click.option("--expand", is_flag=True, help="With --dot: draw every producer-consumer edge.")
@click.option("-o", "--output", type=click.Path(dir_okay=False), help="Write here instead of stdout.")
@click.pass_obj
def cmd_export(obj: Ctx, file, mode, expand, output):
    """Write a DOT graph or a model skeleton."""
    if mode is None:
        raise click.UsageError("choose one of --dot or --skeleton")
    if expand and mode != "dot":
        raise click.UsageError("--expand only applies to --dot")
    hub = _load(file).hub
    rep = validate(hub)
    if rep.errors:
        _err(f"{file}: hub has validation errors: {', '.join(sorted({f.code for f in rep.errors}))}")
        sys.exit(EXIT_INVALID)
    if mode == "dot":
        text, counts = export_dot(hub, expand=expand)
        summary = f"{counts.nodes} nodes, {counts.edges} edges"
    else:
        text, counts = export_model_skeleton(hub)
        summary = f"{counts.nodes} node blocks, {counts.edges} hyperedge blocks"
    if output:
        try:
            Path(output).write_text(text, encoding="utf-8")
        except OSError as exc:
            _err(f"{output}: cannot write: {exc.strerror}")
            sys.exit(EXIT_USAGE)
        if not obj.quiet:
            click.echo(f"wrote {output}: {summary}")
    else:
        click.echo(text, nl=False)
        if not obj.quiet:
            _err(summary)
    sys.exit(EXIT_OK)


# -- optimize -----------------------------------------------------------------


def _certificate_summary(model, res) -> list[str]:
    from rreh.optimize import Status, verify_farkas, verify_ray

    lp = model.lp
    if res.status is Status.INFEASIBLE:
        y_ub, y_eq = res.farkas
        ok = verify_farkas(lp, y_ub, y_eq)
        names = lp.ub_names + lp.eq_names
        y = np.concatenate([y_ub, y_eq])
        order = np.argsort(-np.abs(y), kind="stable")
        top = [f"{names[i]} ({y[i]:+.4g})" for i in order[:5] if abs(y[i]) > 1e-9]
        lines = [f"Farkas certificate {'verified' if ok else 'NOT verified'}; {int(np.sum(np.abs(y) > 1e-9))} rows involved"]
        lines += [f"  {t}" for t in top]
        return lines
    ok = verify_ray(lp, res.ray)
    top = [lp.var_names[j] for j in np.flatnonzero(np.abs(res.ray) > 1e-9)[:5]]
    return [f"unbounded ray {'verified' if ok else 'NOT verified'} along: {', '.join(top)}"]


@main.command("optimize")
@click.argument("file")
@click.argument("annex")
@click.argument("profiles_dir", required=False)
@click.option("--horizon", type=click.IntRange(min=1), help="Number of time steps (overrides the annex).")
@click.option("--demand", "demands", multiple=True, metavar="SPEC", help="COMMODITY:QTY[:total]; replaces annex demands.")
@click.option("--format", "fmt", type=click.Choice(["text", "json", "csv"]), default="text", show_default=True)
@click.option("--seed", type=int, help="Synthesize missing profiles with this seed.")
def cmd_optimize(file, annex, profiles_dir, horizon, demands, fmt, seed):
    """Size capacities and dispatch at minimum cost."""
    from rreh.optimize import (
        AnnexError,
        DemandSpec,
        NumericalBreakdown,
        ProblemError,
        ProfileError,
        UnreachableDemand,
        load_annex,
        make_problem,
        profile_ids,
        report,
        resolve_profiles,
        solve,
    )

    hub = _load(file).hub
    rep = validate(hub)
    if rep.errors:
        _err(f"{file}: hub has validation errors: {', '.join(sorted({f.code for f in rep.errors}))}")
        sys.exit(EXIT_INVALID)
    try:
        econ = load_annex(annex)
        econ.check_against(hub)
        steps = horizon or econ.steps
        if steps is None:
            raise AnnexError("horizon length is neither in the annex nor given with --horizon")
        specs = [DemandSpec.parse(s) for s in demands] if demands else None
        profiles = resolve_profiles(profile_ids(hub, econ), steps, profiles_dir, seed)
        problem = make_problem(hub, econ, profiles, specs, steps)
    except UnreachableDemand as exc:
        _err(f"infeasible: {exc}")
        sys.exit(EXIT_INFEASIBLE)
    except (AnnexError, ProfileError, ProblemError) as exc:
        _err(f"error: {exc}")
        sys.exit(EXIT_USAGE)
    try:
        sol = solve(problem)
    except NumericalBreakdown as exc:
        _err(f"numerical failure: {exc}")
        sys.exit(EXIT_NUMERICAL)
    if not sol.optimal:
        click.echo(f"status: {sol.status.value}")
        for line in _certificate_summary(sol.model, sol.raw):
            click.echo(line)
        sys.exit(EXIT_INFEASIBLE)
    click.echo(report(sol, problem, fmt), nl=False)
    sys.exit(EXIT_OK)


# -- design -------------------------------------------------------------------


def _assess(hub: Hub) -> list[tuple[str, str]]:
    d = hub.derived
    rep = validate(hub)
    codes = sorted({f.code for f in rep.errors})
    return [
        ("satisfied", f"E = {_braced(d.E)}") if d.E else ("unsatisfied", "no export technology, E is empty"),
        ("review required", f"{len(hub.locations)} location(s): " + ", ".join(l.id for l in hub.locations)),
        ("satisfied", "graph validates without errors") if not codes else ("unsatisfied", "errors " + ", ".join(codes)),
        ("review required", f"I = {_braced(d.I)}"),
        ("review required", f"B = {_braced(d.B)}"),
        ("satisfied", f"O = {_braced(d.O)}") if d.O else ("unsatisfied", "no opportunity technology, O is empty"),
        ("pending", "run rrehc optimize with a techno-economic annex"),
    ]


_TEMPLATE = '''hub "new_hub" {
  # -- Step 2: Select locations --
  location l1 {
    name = "site";
    potential = wind: high;
    demand = low;
  }

  # -- Step 3: Construct Technological Graph --
  tech Wind@l1 {
    in: ;
    out: electricity;
  }
  tech electrolyzer@l1 {
    in: electricity, H2O;
    out: H2, O2;
  }

  # -- Step 4: Consider Imports --
  tech import@l1 kind import {
    in: ;
    out: H2O;
  }

  # -- Step 1: Define Export Commodities --
  tech export@l1 kind export {
    in: H2;
    out: ;
  }

  # -- Step 6: Identify Local Opportunities --
  # tech local_use@l1 kind opportunity { in: ...; out: ; }

  flows {
    flow electricity {
      from: Wind@l1;
      to: electrolyzer@l1;
    }
    flow H2O {
      from: import@l1;
      to: electrolyzer@l1;
    }
    flow H2 {
      from: electrolyzer@l1;
      to: export@l1;
    }
    # -- Step 5: Assess Byproducts --
    flow O2 {
      from: electrolyzer@l1;
      to: ;
    }
  }
  # -- Step 7: Optimize --
  # rrehc optimize <this file> <annex.econ.toml> <profiles dir>
}
'''


def _scaffold_from(hub: Hub) -> str:
    by_kind = {k: [t for t in hub.technologies if t.kind is k] for k in TechnologyKind}
    out = [hub_header(hub), "  # -- Step 2: Select locations --"]
    for loc in hub.locations:
        out += render_location(loc)
    sections = (
        ("Step 3: Construct Technological Graph", TechnologyKind.GENERIC),
        ("Step 4: Consider Imports", TechnologyKind.IMPORT),
        ("Step 1: Define Export Commodities", TechnologyKind.EXPORT),
        ("Step 6: Identify Local Opportunities", TechnologyKind.OPPORTUNITY),
    )
    for title, kind in sections:
        out += ["", f"  # -- {title} --"]
        for t in by_kind[kind]:
            out += render_tech(t)
    routed = [e for e in hub.edges if not e.vented]
    vented = [e for e in hub.edges if e.vented]
    out += ["", "  flows {"]
    for e in routed:
        out += render_flow(e)
    out.append("    # -- Step 5: Assess Byproducts --")
    for e in vented:
        out += render_flow(e)
    out += ["  }", "  # -- Step 7: Optimize --", "}"]
    return "\n".join(out) + "\n"


@main.command("design")
@click.option("--from", "source", help="Annotate an existing hub instead of starting from a template.")
def cmd_design(source):
    """Print a commented .rreh scaffold following the seven design steps."""
    lines = ["# rreh design checklist"]
    if source:
        hub = _load(source).hub
        for i, (step, (status, note)) in enumerate(zip(STEPS, _assess(hub)), start=1):
            lines.append(f"# Step {i}: {step} [{status}] {note}")
        lines.append("# Judgment steps are never marked complete automatically.")
        body = _scaffold_from(hub)
    else:
        for i, step in enumerate(STEPS, start=1):
            lines.append(f"# Step {i}: {step} [todo]")
        body = _TEMPLATE
    click.echo("\n".join(lines) + "\n#\n" + body, nl=False)
    sys.exit(EXIT_OK)


if __name__ == "__main__":
    main()
