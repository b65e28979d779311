"""Domain types for renewable energy hubs and the derived commodity sets.

A hub is described by its locations and a technology hypergraph.  Everything
else (commodities, exports, imports, byproducts, opportunities) is derived
from the graph; a hub may additionally carry *declared* sets transcribed from
some external source so that the two can be cross-checked by :func:`validate`.

Technologies are identified by ``name@location`` keys and commodities by
opaque strings.  All set-valued outputs are returned as sorted tuples so that
printing them is deterministic.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Mapping

SET_NAMES = ("C", "E", "I", "B", "O")
LEVELS = ("low", "medium", "high")

_WS = re.compile(r"\s+")
_PHASE = re.compile(r"^(?P<base>.+?)\s*\((?P<phase>[^()]+)\)$")


class ModelError(Exception):
    pass


class UndeclaredTechnology(ModelError):
    def __init__(self, name: str, commodity: str):
        super().__init__(f"hyperedge for {commodity!r} references undeclared technology {name!r}")
        self.name = name
        self.commodity = commodity


def normalize_id(text: str) -> str:
    return _WS.sub(" ", text.strip())


@dataclass(frozen=True, order=True)
class Commodity:
    """A commodity id, optionally qualified by a phase tag (``CH4(l)``)."""

    base: str
    phase_tag: str | None = None
    display_name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "base", normalize_id(self.base))
        if self.phase_tag is not None:
            object.__setattr__(self, "phase_tag", normalize_id(self.phase_tag))
        if not self.base:
            raise ModelError("commodity id must be non-empty")

    @property
    def id(self) -> str:
        if self.phase_tag:
            return f"{self.base}({self.phase_tag})"
        return self.base

    @classmethod
    def parse(cls, text: str) -> "Commodity":
        text = normalize_id(text)
        m = _PHASE.match(text)
        if m:
            return cls(m["base"], m["phase"])
        return cls(text)

    def __str__(self):
        return self.id


def accepts(inputs: Iterable[str], commodity: str) -> str | None:
    """Return the input entry of a technology that accepts ``commodity``.

    An exact id match wins.  An untagged input (``CH4``) also accepts any
    phase of the same base (``CH4(l)``).  Returns ``None`` if nothing matches.
    """
    inputs = set(inputs)
    if commodity in inputs:
        return commodity
    c = Commodity.parse(commodity)
    if c.phase_tag and c.base in inputs:
        return c.base
    return None


@dataclass(frozen=True)
class Location:
    id: str
    name: str
    potential: tuple[tuple[str, str], ...]
    demand: str

    def __post_init__(self):
        object.__setattr__(self, "name", normalize_id(self.name))
        object.__setattr__(self, "potential", tuple(sorted((normalize_id(r), lv) for r, lv in self.potential)))
        if not self.potential:
            raise ModelError(f"location {self.id!r} needs at least one resource potential")
        for _, lv in self.potential:
            if lv not in LEVELS:
                raise ModelError(f"location {self.id!r}: invalid potential level {lv!r}")
        if self.demand not in LEVELS:
            raise ModelError(f"location {self.id!r}: invalid demand level {self.demand!r}")

    @property
    def is_load_centre(self) -> bool:
        return self.demand == "high" and all(lv == "low" for _, lv in self.potential)

    def triplet(self) -> str:
        pot = ", ".join(f"{r}:{lv}" for r, lv in self.potential)
        return f"({self.name}; {pot}; demand:{self.demand})"


class TechnologyKind(str, enum.Enum):
    GENERIC = "generic"
    IMPORT = "import"
    EXPORT = "export"
    OPPORTUNITY = "opportunity"


def tech_key(name: str, location: str) -> str:
    return f"{name}@{location}"


@dataclass(frozen=True)
class Technology:
    name: str
    location: str
    kind: TechnologyKind = TechnologyKind.GENERIC
    inputs: frozenset[str] = frozenset()
    outputs: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "kind", TechnologyKind(self.kind))
        object.__setattr__(self, "inputs", frozenset(Commodity.parse(c).id for c in self.inputs))
        object.__setattr__(self, "outputs", frozenset(Commodity.parse(c).id for c in self.outputs))

    @property
    def key(self) -> str:
        return tech_key(self.name, self.location)

    def signature(self) -> str:
        ins = ", ".join(sorted(self.inputs))
        outs = ", ".join(sorted(self.outputs))
        kind = "" if self.kind is TechnologyKind.GENERIC else f" [{self.kind.value}]"
        return f"{self.key}{kind}: {{{ins}}} -> {{{outs}}}"


@dataclass(frozen=True)
class Hyperedge:
    """Flow of one commodity from every producer to every consumer."""

    commodity: str
    producers: frozenset[str]
    consumers: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "commodity", Commodity.parse(self.commodity).id)
        object.__setattr__(self, "producers", frozenset(self.producers))
        object.__setattr__(self, "consumers", frozenset(self.consumers))
        if not self.producers:
            raise ModelError(f"hyperedge for {self.commodity!r} has no producers")

    @property
    def expansion_count(self) -> int:
        return len(self.producers) * len(self.consumers)

    @property
    def vented(self) -> bool:
        return not self.consumers

    def render(self) -> str:
        prod = ", ".join(sorted(self.producers))
        cons = ", ".join(sorted(self.consumers))
        return f"({self.commodity}, {{{prod}}}, {{{cons}}})"


@dataclass(frozen=True)
class SimpleEdge:
    commodity: str
    producer: str
    consumer: str


@dataclass(frozen=True)
class TechGraph:
    technologies: tuple[Technology, ...] = ()
    edges: tuple[Hyperedge, ...] = ()

    def __post_init__(self):
        # technologies are a set; keep a canonical order so equality is structural
        techs = tuple(sorted(self.technologies, key=lambda t: (t.key, t.kind.value, sorted(t.inputs), sorted(t.outputs))))
        object.__setattr__(self, "technologies", techs)
        object.__setattr__(self, "edges", tuple(self.edges))

    @cached_property
    def by_key(self) -> dict[str, Technology]:
        return {t.key: t for t in self.technologies}

    def check_endpoints(self) -> None:
        known = self.by_key
        for e in self.edges:
            for name in sorted(e.producers | e.consumers):
                if name not in known:
                    raise UndeclaredTechnology(name, e.commodity)

    def of_kind(self, kind: TechnologyKind) -> list[Technology]:
        return [t for t in self.technologies if t.kind is kind]


def _canon(items: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(set(items)))


def derive_commodities(graph: TechGraph) -> tuple[str, ...]:
    graph.check_endpoints()
    out: set[str] = set()
    for t in graph.technologies:
        out |= t.inputs | t.outputs
    return _canon(out)


def derive_exports(graph: TechGraph) -> tuple[str, ...]:
    graph.check_endpoints()
    return _canon(c for t in graph.of_kind(TechnologyKind.EXPORT) for c in t.inputs)


def derive_imports(graph: TechGraph) -> tuple[str, ...]:
    graph.check_endpoints()
    return _canon(c for t in graph.of_kind(TechnologyKind.IMPORT) for c in t.outputs)


def derive_opportunities(graph: TechGraph) -> tuple[str, ...]:
    graph.check_endpoints()
    return _canon(c for t in graph.of_kind(TechnologyKind.OPPORTUNITY) for c in t.inputs)


def byproduct_pairs(graph: TechGraph) -> tuple[tuple[str, str], ...]:
    """(technology key, commodity) pairs whose output is never routed to a consumer."""
    graph.check_endpoints()
    routed = {(p, e.commodity) for e in graph.edges if e.consumers for p in e.producers}
    pairs = {(t.key, c) for t in graph.technologies for c in t.outputs if (t.key, c) not in routed}
    return tuple(sorted(pairs))


def derive_byproducts(graph: TechGraph) -> tuple[str, ...]:
    return _canon(c for _, c in byproduct_pairs(graph))


def expand_hyperedges(graph: TechGraph) -> list[SimpleEdge]:
    graph.check_endpoints()
    return [
        SimpleEdge(e.commodity, p, c)
        for e in graph.edges
        for p, c in product(sorted(e.producers), sorted(e.consumers))
    ]


@dataclass(frozen=True)
class DerivedSets:
    C: tuple[str, ...]
    E: tuple[str, ...]
    I: tuple[str, ...]  # noqa: E741
    B: tuple[str, ...]
    O: tuple[str, ...]  # noqa: E741

    def get(self, name: str) -> tuple[str, ...]:
        return getattr(self, name)

    def as_dict(self) -> dict[str, tuple[str, ...]]:
        return {n: self.get(n) for n in SET_NAMES}


def derive_all(graph: TechGraph) -> DerivedSets:
    return DerivedSets(
        C=derive_commodities(graph),
        E=derive_exports(graph),
        I=derive_imports(graph),
        B=derive_byproducts(graph),
        O=derive_opportunities(graph),
    )


@dataclass(frozen=True)
class Hub:
    """The hub 7-tuple: locations, graph, and the five commodity sets.

    ``declared_sets`` is optional; when present it maps a set name to the
    commodity ids as transcribed from a source table.
    """

    id: str
    locations: tuple[Location, ...] = ()
    graph: TechGraph = field(default_factory=TechGraph)
    declared_sets: Mapping[str, frozenset[str]] | None = None

    def __post_init__(self):
        object.__setattr__(self, "locations", tuple(sorted(self.locations, key=lambda l: l.id)))
        if self.declared_sets is not None:
            declared = {}
            for name, items in self.declared_sets.items():
                if name not in SET_NAMES:
                    raise ModelError(f"unknown set name {name!r}")
                declared[name] = frozenset(Commodity.parse(c).id for c in items)
            object.__setattr__(self, "declared_sets", dict(sorted(declared.items(), key=lambda kv: SET_NAMES.index(kv[0]))))

    @cached_property
    def derived(self) -> DerivedSets:
        return derive_all(self.graph)

    @property
    def technologies(self) -> tuple[Technology, ...]:
        return self.graph.technologies

    @property
    def edges(self) -> tuple[Hyperedge, ...]:
        return self.graph.edges

    def location(self, loc_id: str) -> Location | None:
        for loc in self.locations:
            if loc.id == loc_id:
                return loc
        return None


def assemble_hub(
    hub_id: str,
    locations: Iterable[Location],
    graph: TechGraph,
    declared_sets: Mapping[str, Iterable[str]] | None = None,
) -> Hub:
    declared = None if declared_sets is None else {k: frozenset(v) for k, v in declared_sets.items()}
    hub = Hub(hub_id, tuple(locations), graph, declared)
    hub.derived  # raises UndeclaredTechnology on dangling endpoints
    return hub


# -- validation ---------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Finding:
    code: str
    subject: str
    message: str

    def as_dict(self) -> dict[str, str]:
        return {"code": self.code, "subject": self.subject, "message": self.message}


@dataclass
class ValidationReport:
    errors: list[Finding] = field(default_factory=list)
    warnings: list[Finding] = field(default_factory=list)
    infos: list[Finding] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.errors

    def codes(self) -> list[str]:
        return [f.code for f in self.errors + self.warnings + self.infos]

    def sort(self) -> None:
        for bucket in (self.errors, self.warnings, self.infos):
            bucket.sort()

    def as_dict(self) -> dict:
        return {
            "valid": self.valid,
            "errors": [f.as_dict() for f in self.errors],
            "warnings": [f.as_dict() for f in self.warnings],
            "infos": [f.as_dict() for f in self.infos],
        }


def _fmt(items: Iterable[str]) -> str:
    return "{" + ", ".join(sorted(items)) + "}"


def validate(hub: Hub) -> ValidationReport:
    """Check every structural invariant of ``hub`` and collect findings.

    Never raises; undeclared edge endpoints are reported as E006 and the
    derivation-dependent checks are skipped for them.
    """
    rep = ValidationReport()
    graph = hub.graph
    techs: dict[str, Technology] = {}
    seen: set[str] = set()
    for t in graph.technologies:
        if t.key in seen:
            rep.errors.append(Finding("E005", t.key, f"technology {t.key} is declared more than once"))
        seen.add(t.key)
        techs.setdefault(t.key, t)

    loc_ids = [loc.id for loc in hub.locations]
    for lid in sorted({i for i in loc_ids if loc_ids.count(i) > 1}):
        rep.errors.append(Finding("E005", lid, f"location {lid} is declared more than once"))

    for t in graph.technologies:
        if t.kind is TechnologyKind.IMPORT and t.inputs:
            rep.errors.append(Finding("E003", t.key, f"import technology {t.key} must have no inputs, has {_fmt(t.inputs)}"))
        if t.kind in (TechnologyKind.EXPORT, TechnologyKind.OPPORTUNITY) and t.outputs:
            rep.errors.append(
                Finding("E003", t.key, f"{t.kind.value} technology {t.key} must have no outputs, has {_fmt(t.outputs)}")
            )
        if t.location not in loc_ids:
            rep.errors.append(Finding("E004", t.key, f"technology {t.key} sits at undeclared location {t.location!r}"))

    edge_seen: set[Hyperedge] = set()
    supplied: set[tuple[str, str]] = set()
    dangling_endpoints = False
    for e in graph.edges:
        subject = e.render()
        if e in edge_seen:
            rep.errors.append(Finding("E007", subject, f"hyperedge {subject} is declared more than once"))
        edge_seen.add(e)
        for p in sorted(e.producers):
            t = techs.get(p)
            if t is None:
                dangling_endpoints = True
                rep.errors.append(Finding("E006", subject, f"producer {p} is not a declared technology"))
            elif e.commodity not in t.outputs:
                rep.errors.append(
                    Finding("E001", subject, f"{e.commodity} is not an output of producer {p} (outputs {_fmt(t.outputs)})")
                )
        for c in sorted(e.consumers):
            t = techs.get(c)
            if t is None:
                dangling_endpoints = True
                rep.errors.append(Finding("E006", subject, f"consumer {c} is not a declared technology"))
                continue
            accepted = accepts(t.inputs, e.commodity)
            if accepted is None:
                rep.errors.append(
                    Finding("E002", subject, f"{e.commodity} is not an input of consumer {c} (inputs {_fmt(t.inputs)})")
                )
            else:
                supplied.add((c, accepted))

    if dangling_endpoints:
        rep.sort()
        return rep

    derived = hub.derived
    importable = set(derived.I)
    for t in graph.technologies:
        if t.kind is not TechnologyKind.GENERIC:
            continue
        for c in sorted(t.inputs):
            if (t.key, c) not in supplied and c not in importable:
                rep.warnings.append(
                    Finding("W001", t.key, f"input {c} of {t.key} is never supplied by any flow and is not imported")
                )

    if hub.declared_sets is not None:
        for name, declared in hub.declared_sets.items():
            got = set(derived.get(name))
            if got != declared:
                missing = got - declared
                extra = declared - got
                rep.warnings.append(
                    Finding(
                        "W002",
                        name,
                        f"declared {name} differs from derived: derived only {_fmt(missing)}, declared only {_fmt(extra)}",
                    )
                )

    consumed_anywhere = {e.commodity for e in graph.edges if e.consumers}
    producers_of: dict[str, list[str]] = {}
    for key, c in byproduct_pairs(graph):
        producers_of.setdefault(c, []).append(key)
    for c, keys in sorted(producers_of.items()):
        scope = "consumed elsewhere in the hub" if c in consumed_anywhere else "never consumed anywhere in the hub"
        rep.infos.append(Finding("I001", c, f"{c} is a byproduct of {', '.join(keys)} ({scope})"))

    rep.sort()
    return rep
