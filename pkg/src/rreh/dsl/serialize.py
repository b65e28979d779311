from __future__ import annotations

from rreh.dsl.lexer import IDENT_RE
from rreh.model import Commodity, Hub, Hyperedge, Location, Technology, TechnologyKind


def quote(text: str) -> str:
    if IDENT_RE.fullmatch(text):
        return text
    escaped = text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\t", "\\t")
    return f'"{escaped}"'


def _string(text: str) -> str:
    escaped = text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\t", "\\t")
    return f'"{escaped}"'


def commodity_text(cid: str) -> str:
    c = Commodity.parse(cid)
    if c.phase_tag:
        return f"{quote(c.base)}({quote(c.phase_tag)})"
    return quote(c.base)


def _commodities(items) -> str:
    return ", ".join(commodity_text(c) for c in sorted(items))


def _ref(key: str) -> str:
    name, _, loc = key.rpartition("@")
    return f"{quote(name)}@{quote(loc)}"


def render_location(loc: Location, indent: str = "  ") -> list[str]:
    potential = ", ".join(f"{quote(r)}: {lv}" for r, lv in loc.potential)
    return [
        f"{indent}location {quote(loc.id)} {{",
        f"{indent}  name = {_string(loc.name)};",
        f"{indent}  potential = {potential};",
        f"{indent}  demand = {loc.demand};",
        f"{indent}}}",
    ]


def render_tech(t: Technology, indent: str = "  ") -> list[str]:
    kind = "" if t.kind is TechnologyKind.GENERIC else f" kind {t.kind.value}"
    ins = _commodities(t.inputs)
    outs = _commodities(t.outputs)
    return [
        f"{indent}tech {quote(t.name)}@{quote(t.location)}{kind} {{",
        f"{indent}  in: {ins};" if ins else f"{indent}  in: ;",
        f"{indent}  out: {outs};" if outs else f"{indent}  out: ;",
        f"{indent}}}",
    ]


def render_flow(e: Hyperedge, indent: str = "    ") -> list[str]:
    prod = ", ".join(_ref(k) for k in sorted(e.producers))
    cons = ", ".join(_ref(k) for k in sorted(e.consumers))
    return [
        f"{indent}flow {commodity_text(e.commodity)} {{",
        f"{indent}  from: {prod};",
        f"{indent}  to: {cons};" if cons else f"{indent}  to: ;",
        f"{indent}}}",
    ]


def render_asserts(hub: Hub, indent: str = "  ") -> list[str]:
    if hub.declared_sets is None:
        return []
    out = [f"{indent}assert {{"]
    for name, items in hub.declared_sets.items():
        out.append(f"{indent}  {name} = {{{_commodities(items)}}};")
    out.append(f"{indent}}}")
    return out


def hub_header(hub: Hub) -> str:
    return f"hub {_string(hub.id)} {{"


def serialize(hub: Hub) -> str:
    """Render ``hub`` as canonical ``.rreh`` text.

    Locations and technologies are sorted by id; flows keep their declared
    order because expansion order depends on it.
    """
    out = [hub_header(hub)]
    for loc in hub.locations:
        out += render_location(loc)
    for t in hub.technologies:
        out += render_tech(t)
    if hub.edges:
        out.append("  flows {")
        for e in hub.edges:
            out += render_flow(e)
        out.append("  }")
    else:
        out.append("  flows {}")
    out += render_asserts(hub)
    out.append("}")
    return "\n".join(out) + "\n"
