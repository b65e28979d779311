"""Per-set structural comparison of two hubs.

The report has one delta per set (L, T, H, C, E, I, B, O) in that fixed
order.  Commodity sets come from derivation, never from ``assert`` blocks.
"""

from __future__ import annotations

import json
import textwrap
from dataclasses import dataclass

from rreh.model import Hub, validate

DIFF_SCHEMA = "rreh-diff/1"
SET_ORDER = ("L", "T", "H", "C", "E", "I", "B", "O")

_LABELS = {
    "L": "locations",
    "T": "technologies",
    "H": "flows",
    "C": "commodities",
    "E": "exports",
    "I": "imports",
    "B": "byproducts",
    "O": "local opportunities",
}


class InvalidOperand(ValueError):
    def __init__(self, side: str, hub_id: str, codes: list[str]):
        super().__init__(f"{side} hub {hub_id!r} has validation errors: {', '.join(codes)}")
        self.side = side
        self.hub_id = hub_id


@dataclass(frozen=True)
class SetDelta:
    set_name: str
    only_left: tuple[str, ...]
    only_right: tuple[str, ...]
    common: int

    @property
    def same(self) -> bool:
        return not self.only_left and not self.only_right


@dataclass(frozen=True)
class DiffReport:
    left_id: str
    right_id: str
    deltas: tuple[SetDelta, ...]

    def __post_init__(self):
        if tuple(d.set_name for d in self.deltas) != SET_ORDER:
            raise ValueError("a diff report needs exactly one delta per set, in L,T,H,C,E,I,B,O order")

    def delta(self, name: str) -> SetDelta:
        return self.deltas[SET_ORDER.index(name)]

    @property
    def identical(self) -> bool:
        return all(d.same for d in self.deltas)

    @property
    def summary(self) -> dict[str, str]:
        return {d.set_name: verdict(d) for d in self.deltas}

    def to_json(self) -> str:
        doc = {
            "schema": DIFF_SCHEMA,
            "left": self.left_id,
            "right": self.right_id,
            "deltas": [
                {"set": d.set_name, "onlyLeft": list(d.only_left), "onlyRight": list(d.only_right), "common": d.common}
                for d in self.deltas
            ],
        }
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "DiffReport":
        doc = json.loads(text)
        if doc.get("schema") != DIFF_SCHEMA:
            raise ValueError(f"expected schema {DIFF_SCHEMA!r}, got {doc.get('schema')!r}")
        deltas = tuple(
            SetDelta(d["set"], tuple(d["onlyLeft"]), tuple(d["onlyRight"]), int(d["common"])) for d in doc["deltas"]
        )
        return cls(doc["left"], doc["right"], deltas)


def _delta(name: str, left: set[str], right: set[str]) -> SetDelta:
    return SetDelta(name, tuple(sorted(left - right)), tuple(sorted(right - left)), len(left & right))


def _tech_delta(a: Hub, b: Hub) -> SetDelta:
    left = {t.key: t for t in a.technologies}
    right = {t.key: t for t in b.technologies}
    only_left, only_right, common = [], [], 0
    for key in sorted(left.keys() | right.keys()):
        lt, rt = left.get(key), right.get(key)
        if lt is None:
            only_right.append(key)
        elif rt is None:
            only_left.append(key)
        elif (lt.kind, lt.inputs, lt.outputs) == (rt.kind, rt.inputs, rt.outputs):
            common += 1
        else:
            only_left.append(f"{lt.signature()} (changed)")
            only_right.append(f"{rt.signature()} (changed)")
    return SetDelta("T", tuple(sorted(only_left)), tuple(sorted(only_right)), common)


def diff_hubs(left: Hub, right: Hub) -> DiffReport:
    """Compare two valid hubs set by set.

    Locations compare by their (name, potential, demand) triplet, not by id.
    A technology whose key exists on both sides with a different signature
    shows up on both sides, annotated as changed.
    """
    for side, hub in (("left", left), ("right", right)):
        rep = validate(hub)
        if rep.errors:
            raise InvalidOperand(side, hub.id, sorted({f.code for f in rep.errors}))

    deltas = [
        _delta("L", {loc.triplet() for loc in left.locations}, {loc.triplet() for loc in right.locations}),
        _tech_delta(left, right),
        _delta("H", {e.render() for e in left.edges}, {e.render() for e in right.edges}),
    ]
    for name in ("C", "E", "I", "B", "O"):
        deltas.append(_delta(name, set(left.derived.get(name)), set(right.derived.get(name))))
    return DiffReport(left.id, right.id, tuple(deltas))


def verdict(d: SetDelta) -> str:
    if d.same:
        return f"Same as {d.set_name}_r1"
    if d.set_name == "E":
        return "Energy export differs"
    if d.set_name in ("T", "H"):
        return "Different technological and hub structures"
    if d.set_name == "L":
        return "Different locations"
    if not d.only_left:
        return f"{', '.join(d.only_right)} present in r2 but not in r1"
    if not d.only_right:
        return f"{', '.join(d.only_left)} present in r1 but not in r2"
    return f"Different {_LABELS[d.set_name]}: {', '.join(d.only_left)} vs. {', '.join(d.only_right)}"


CELL_WIDTH = 44


def _cell(items) -> list[str]:
    # one item per line; long items continue on indented lines
    if not items:
        return ["-"]
    lines = []
    for item in items:
        lines += textwrap.wrap(item, CELL_WIDTH, subsequent_indent="  ", break_on_hyphens=False, break_long_words=False)
    return lines


def render_table(report: DiffReport) -> str:
    """Fixed-width table with one row per set and one set element per line."""
    header = (["Set"], ["Only in r1"], ["Only in r2"], ["Differences"])
    rows = [header]
    for d in report.deltas:
        rows.append(([f"{d.set_name}_r"], _cell(d.only_left), _cell(d.only_right), [verdict(d)]))
    widths = [max(len(line) for r in rows for line in r[i]) for i in range(3)]
    lines = [f"r1 = {report.left_id}", f"r2 = {report.right_id}", ""]
    for i, r in enumerate(rows):
        height = max(len(c) for c in r)
        for k in range(height):
            cells = [(r[j][k] if k < len(r[j]) else "").ljust(widths[j]) for j in range(3)]
            cells.append(r[3][k] if k < len(r[3]) else "")
            lines.append(" | ".join(cells).rstrip())
        if i == 0:
            lines.append("-+-".join("-" * w for w in widths) + "-+-" + "-" * len("Differences"))
    return "\n".join(lines) + "\n"


def render_diff(report: DiffReport, format: str = "table") -> str:
    if format == "table":
        return render_table(report)
    if format == "json":
        return report.to_json()
    raise ValueError(f"unknown diff format {format!r}")
