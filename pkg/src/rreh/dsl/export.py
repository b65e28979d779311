"""Graph-description (DOT) and optimization-skeleton exporters."""

from __future__ import annotations

import re
from dataclasses import dataclass

from rreh.model import Hub, TechnologyKind, expand_hyperedges

SKELETON_HEADER = "# rreh-skeleton v1"

_SHAPES = {
    TechnologyKind.GENERIC: "box",
    TechnologyKind.IMPORT: "invhouse",
    TechnologyKind.EXPORT: "house",
    TechnologyKind.OPPORTUNITY: "doubleoctagon",
}


@dataclass(frozen=True)
class ExportCounts:
    nodes: int
    edges: int


def _q(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(hub: Hub, expand: bool = True) -> tuple[str, ExportCounts]:
    """Render the hub as a DOT digraph.

    Technologies become nodes whose shape depends on their kind.  With
    ``expand`` every hyperedge is emitted as its producer x consumer simple
    edges; otherwise each hyperedge gets a junction point node.
    """
    lines = [f"digraph {_q(hub.id)} {{", "  rankdir=LR;"]
    for t in hub.technologies:
        lines.append(f"  {_q(t.key)} [shape={_SHAPES[t.kind]}, kind={_q(t.kind.value)}, label={_q(t.key)}];")
    nodes = len(hub.technologies)
    edges = 0
    if expand:
        for se in expand_hyperedges(hub.graph):
            lines.append(f"  {_q(se.producer)} -> {_q(se.consumer)} [commodity={_q(se.commodity)}, label={_q(se.commodity)}];")
            edges += 1
    else:
        for i, e in enumerate(hub.edges):
            j = _q(f"h{i}")
            lines.append(f"  {j} [shape=point, kind=\"junction\", commodity={_q(e.commodity)}];")
            nodes += 1
            for p in sorted(e.producers):
                lines.append(f"  {_q(p)} -> {j} [commodity={_q(e.commodity)}, label={_q(e.commodity)}];")
                edges += 1
            for c in sorted(e.consumers):
                lines.append(f"  {j} -> {_q(c)} [commodity={_q(e.commodity)}];")
                edges += 1
    lines.append("}")
    return "\n".join(lines) + "\n", ExportCounts(nodes, edges)


def _ident(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9_]", "_", text)


def export_model_skeleton(hub: Hub) -> tuple[str, ExportCounts]:
    """Emit a node/hyperedge text skeleton for an external optimization model.

    The layout follows graph-based modeling languages (one ``#NODE`` block
    per technology, one ``#HYPEREDGE`` block per flow) but is not guaranteed
    to be accepted by any particular tool.
    """
    lines = [SKELETON_HEADER, f"# hub: {hub.id}", "#TIMEHORIZON", "T = 0; // set horizon length", ""]
    for t in hub.technologies:
        lines.append(f"#NODE {_ident(t.key)} // {t.key} ({t.kind.value})")
        lines.append("#PARAMETERS")
        if t.kind is TechnologyKind.GENERIC:
            lines += ["capex_annuity = 0; // placeholder", "opex_var = 0; // placeholder"]
        else:
            lines.append("opex_var = 0; // placeholder")
        lines.append("#VARIABLES")
        if t.kind is TechnologyKind.GENERIC:
            lines.append("internal: capacity;")
        lines.append("internal: activity[T];")
        for c in sorted(t.inputs):
            lines.append(f"external: {_ident(c)}_in[T]; // consumes {c}")
        for c in sorted(t.outputs):
            lines.append(f"external: {_ident(c)}_out[T]; // produces {c}")
        lines.append("#CONSTRAINTS")
        if t.kind is TechnologyKind.GENERIC:
            lines.append("activity[t] <= capacity;")
        lines.append("")
    for i, e in enumerate(hub.edges):
        lines.append(f"#HYPEREDGE flow_{i}_{_ident(e.commodity)} // {e.render()}")
        lines.append("#CONSTRAINTS")
        prod = " + ".join(f"{_ident(p)}.{_ident(e.commodity)}_out[t]" for p in sorted(e.producers))
        if e.consumers:
            cons = " + ".join(f"{_ident(c)}.{_ident(e.commodity)}_in[t]" for c in sorted(e.consumers))
            lines.append(f"{prod} == {cons};")
        else:
            lines.append(f"{prod} >= 0; // vented")
        lines.append("")
    return "\n".join(lines).rstrip("\n") + "\n", ExportCounts(len(hub.technologies), len(hub.edges))
