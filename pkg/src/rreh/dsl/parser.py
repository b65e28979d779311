"""Recursive-descent parser for ``.rreh`` hub descriptions.

Grammar (keywords are contextual; any name may also be a quoted string)::

    document     := hubDecl
    hubDecl      := "hub" STRING "{" locationDecl* techDecl* flowsBlock assertBlock? "}"
    locationDecl := "location" IDENT "{" "name" "=" STRING ";"
                    "potential" "=" resourceLevel ("," resourceLevel)* ";"
                    "demand" "=" LEVEL ";" "}"
    resourceLevel:= IDENT ":" LEVEL
    techDecl     := "tech" IDENT "@" IDENT ("kind" KIND)? "{"
                    "in" ":" commodityList? ";" "out" ":" commodityList? ";" "}"
    flowsBlock   := "flows" "{" flowDecl* "}"
    flowDecl     := "flow" COMMODITY "{" "from" ":" techRefList ";" "to" ":" techRefList? ";" "}"
    assertBlock  := "assert" "{" (SETNAME "=" "{" commodityList? "}" ";")* "}"
    COMMODITY    := IDENT ("(" IDENT ")")?

Errors inside one declaration are reported and the parser skips to the next
declaration, so independent mistakes surface in a single run.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from rreh import model
from rreh.dsl.lexer import SourceSpan, Token, tokenize
from rreh.model import Hub, Hyperedge, Location, TechGraph, Technology, TechnologyKind

LEVELS = ("low", "medium", "high")
KINDS = ("import", "export", "opportunity")
SUGGEST_DISTANCE = 2


@dataclass(frozen=True)
class ParseDiagnostic:
    span: SourceSpan
    severity: str  # "error" | "warning"
    message: str
    expected: str | None = None
    notes: tuple[str, ...] = ()

    def __str__(self):
        text = f"{self.span}: {self.severity}: {self.message}"
        for note in self.notes:
            text += f"\n  note: {note}"
        return text


class ParseError(Exception):
    def __init__(self, diagnostics: list[ParseDiagnostic]):
        self.diagnostics = diagnostics
        super().__init__("\n".join(str(d) for d in diagnostics))

    @property
    def errors(self) -> list[ParseDiagnostic]:
        return [d for d in self.diagnostics if d.severity == "error"]


@dataclass
class HubDocument:
    hub: Hub
    spans: dict[tuple, SourceSpan]
    source_hash: str
    diagnostics: list[ParseDiagnostic] = field(default_factory=list)


def levenshtein(a: str, b: str) -> int:
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def near_misses(name: str, candidates, limit: int = SUGGEST_DISTANCE) -> list[str]:
    scored = sorted((levenshtein(name, c), c) for c in set(candidates))
    return [c for d, c in scored if d <= limit]


class _Sync(Exception):
    """Raised after a syntax error to unwind to the nearest recovery point."""


@dataclass
class _RawTech:
    name: str
    loc: str
    kind: TechnologyKind
    inputs: list[tuple[str, SourceSpan]]
    outputs: list[tuple[str, SourceSpan]]
    span: SourceSpan
    loc_span: SourceSpan


@dataclass
class _RawFlow:
    commodity: str
    producers: list[tuple[str, SourceSpan]]
    consumers: list[tuple[str, SourceSpan]]
    span: SourceSpan


class _Parser:
    def __init__(self, source: str, file: str):
        self.file = file
        tokens, lex_errors = tokenize(source, file)
        self.toks = tokens
        self.pos = 0
        self.diags: list[ParseDiagnostic] = [ParseDiagnostic(e.span, "error", e.message) for e in lex_errors]

    # -- token helpers

    def peek(self, k: int = 0) -> Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def advance(self) -> Token:
        tok = self.peek()
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def at_word(self, *words: str) -> bool:
        tok = self.peek()
        return tok.kind == "IDENT" and tok.value in words

    def at_punct(self, ch: str) -> bool:
        tok = self.peek()
        return tok.kind == "PUNCT" and tok.value == ch

    def error(self, span: SourceSpan, message: str, expected: str | None = None, notes=()) -> None:
        self.diags.append(ParseDiagnostic(span, "error", message, expected, tuple(notes)))

    def warning(self, span: SourceSpan, message: str) -> None:
        self.diags.append(ParseDiagnostic(span, "warning", message))

    def fail(self, expected: str):
        tok = self.peek()
        self.error(tok.span, f"expected {expected}, found {tok.describe()}", expected)
        raise _Sync

    def expect_punct(self, ch: str) -> Token:
        if not self.at_punct(ch):
            self.fail(f"'{ch}'")
        return self.advance()

    def expect_word(self, word: str) -> Token:
        if not self.at_word(word):
            self.fail(f"'{word}'")
        return self.advance()

    def expect_name(self, what: str, allow_at: bool = True) -> Token:
        tok = self.peek()
        if tok.kind not in ("IDENT", "STRING"):
            self.fail(what)
        if not tok.value.strip():
            self.error(tok.span, f"{what} must not be empty")
            raise _Sync
        if not allow_at and "@" in tok.value:
            self.error(tok.span, f"{what} must not contain '@'")
            raise _Sync
        return self.advance()

    def expect_level(self) -> str:
        tok = self.peek()
        if tok.kind != "IDENT" or tok.value not in LEVELS:
            self.fail("one of 'low', 'medium', 'high'")
        return self.advance().value

    def skip_to(self, stop_words: tuple[str, ...], depth: int) -> None:
        """Skip tokens until a stop word or closing brace at nesting ``depth``.

        ``depth`` is the number of braces that were open when the failing
        declaration started, counted from the current token.
        """
        level = self._open
        while True:
            tok = self.peek()
            if tok.kind == "EOF":
                return
            if level == depth and (self.at_word(*stop_words) or self.at_punct("}")):
                return
            if tok.kind == "PUNCT" and tok.value == "{":
                level += 1
            elif tok.kind == "PUNCT" and tok.value == "}":
                level -= 1
                if level < depth:
                    return
            self.advance()
            self._open = level

    # -- grammar

    def parse(self):
        self._open = 0
        self.hub_name = None
        self.hub_span = None
        self.locations: list[tuple[Location, SourceSpan]] = []
        self.techs: list[_RawTech] = []
        self.flows: list[_RawFlow] = []
        self.has_asserts = False
        self.asserts: dict[str, tuple[list[tuple[str, SourceSpan]], SourceSpan]] = {}
        self.saw_flows = False
        try:
            self.hub_decl()
        except _Sync:
            pass

    def hub_decl(self):
        self.expect_word("hub")
        tok = self.peek()
        if tok.kind != "STRING":
            self.fail("hub name string")
        self.advance()
        self.hub_name, self.hub_span = tok.value, tok.span
        self.expect_punct("{")
        self._open = 1
        seen_tech = False
        stop = ("location", "tech", "flows", "assert")
        while True:
            start = self.pos
            try:
                if self.at_word("location"):
                    if seen_tech or self.saw_flows:
                        self.error(self.peek().span, "location declarations must come before technologies and flows")
                    self.location_decl()
                elif self.at_word("tech"):
                    if self.saw_flows:
                        self.error(self.peek().span, "technology declarations must come before the flows block")
                    seen_tech = True
                    self.tech_decl()
                elif self.at_word("flows"):
                    if self.saw_flows:
                        self.error(self.peek().span, "duplicate flows block")
                    self.saw_flows = True
                    self.flows_block()
                elif self.at_word("assert"):
                    if not self.saw_flows:
                        self.error(self.peek().span, "expected 'flows' before 'assert'", "'flows'")
                    self.assert_block()
                elif self.at_punct("}"):
                    if not self.saw_flows:
                        self.error(self.peek().span, f"expected 'flows', found {self.peek().describe()}", "'flows'")
                    self.advance()
                    self._open = 0
                    break
                else:
                    self.fail("'location', 'tech', 'flows', 'assert' or '}'")
            except _Sync:
                self.skip_to(stop, 1)
                if self.pos == start:
                    self.advance()
                if self.peek().kind == "EOF":
                    return
        tok = self.peek()
        if tok.kind != "EOF":
            self.error(tok.span, f"expected end of input, found {tok.describe()}", "end of input")

    def location_decl(self):
        self.expect_word("location")
        tok = self.expect_name("location id", allow_at=False)
        self.expect_punct("{")
        self._open += 1
        self.expect_word("name")
        self.expect_punct("=")
        name_tok = self.peek()
        if name_tok.kind != "STRING":
            self.fail("location name string")
        self.advance()
        self.expect_punct(";")
        self.expect_word("potential")
        self.expect_punct("=")
        potential = [self.resource_level()]
        while self.at_punct(","):
            self.advance()
            potential.append(self.resource_level())
        self.expect_punct(";")
        self.expect_word("demand")
        self.expect_punct("=")
        demand = self.expect_level()
        self.expect_punct(";")
        self.expect_punct("}")
        self._open -= 1
        tags = [r for r, _ in potential]
        for r in sorted({r for r in tags if tags.count(r) > 1}):
            self.error(tok.span, f"location {tok.value}: resource {r!r} listed more than once")
        if any(tok.value == loc.id for loc, _ in self.locations):
            self.error(tok.span, f"duplicate declaration of location {tok.value!r}")
            return
        self.locations.append((Location(tok.value, name_tok.value, tuple(potential), demand), tok.span))

    def resource_level(self) -> tuple[str, str]:
        res = self.expect_name("resource name")
        self.expect_punct(":")
        return (res.value, self.expect_level())

    def commodity(self) -> tuple[str, SourceSpan]:
        tok = self.expect_name("commodity")
        text = tok.value
        if self.at_punct("("):
            self.advance()
            phase = self.expect_name("phase tag")
            self.expect_punct(")")
            c = model.Commodity(text, phase.value)
        else:
            c = model.Commodity.parse(text)
        return c.id, tok.span

    def commodity_list(self, closer: str) -> list[tuple[str, SourceSpan]]:
        items = []
        if self.at_punct(closer):
            return items
        items.append(self.commodity())
        while self.at_punct(","):
            self.advance()
            items.append(self.commodity())
        seen = set()
        for c, span in items:
            if c in seen:
                self.warning(span, f"commodity {c!r} listed more than once")
            seen.add(c)
        return items

    def tech_ref(self) -> tuple[str, SourceSpan]:
        name = self.expect_name("technology name", allow_at=False)
        self.expect_punct("@")
        loc = self.expect_name("location id", allow_at=False)
        return model.tech_key(name.value, loc.value), name.span

    def tech_ref_list(self, allow_empty: bool) -> list[tuple[str, SourceSpan]]:
        items = []
        if allow_empty and self.at_punct(";"):
            return items
        items.append(self.tech_ref())
        while self.at_punct(","):
            self.advance()
            items.append(self.tech_ref())
        seen = set()
        for key, span in items:
            if key in seen:
                self.warning(span, f"technology {key!r} listed more than once")
            seen.add(key)
        return items

    def tech_decl(self):
        self.expect_word("tech")
        name = self.expect_name("technology name", allow_at=False)
        self.expect_punct("@")
        loc = self.expect_name("location id", allow_at=False)
        kind = TechnologyKind.GENERIC
        if self.at_word("kind"):
            self.advance()
            tok = self.peek()
            if tok.kind != "IDENT" or tok.value not in KINDS:
                self.fail("one of 'import', 'export', 'opportunity'")
            kind = TechnologyKind(self.advance().value)
        self.expect_punct("{")
        self._open += 1
        self.expect_word("in")
        self.expect_punct(":")
        inputs = self.commodity_list(";")
        self.expect_punct(";")
        self.expect_word("out")
        self.expect_punct(":")
        outputs = self.commodity_list(";")
        self.expect_punct(";")
        self.expect_punct("}")
        self._open -= 1
        key = model.tech_key(name.value, loc.value)
        if any(t.name == name.value and t.loc == loc.value for t in self.techs):
            self.error(name.span, f"duplicate declaration of technology {key!r}")
            return
        self.techs.append(_RawTech(name.value, loc.value, kind, inputs, outputs, name.span, loc.span))

    def flows_block(self):
        self.expect_word("flows")
        self.expect_punct("{")
        self._open += 1
        depth = self._open
        while True:
            start = self.pos
            try:
                if self.at_word("flow"):
                    self.flow_decl()
                elif self.at_punct("}"):
                    self.advance()
                    self._open -= 1
                    return
                else:
                    self.fail("'flow' or '}'")
            except _Sync:
                self.skip_to(("flow",), depth)
                if self.pos == start:
                    self.advance()
                if self._open < depth or self.peek().kind == "EOF":
                    return

    def flow_decl(self):
        self.expect_word("flow")
        commodity, span = self.commodity()
        self.expect_punct("{")
        self._open += 1
        self.expect_word("from")
        self.expect_punct(":")
        producers = self.tech_ref_list(allow_empty=False)
        self.expect_punct(";")
        self.expect_word("to")
        self.expect_punct(":")
        consumers = self.tech_ref_list(allow_empty=True)
        self.expect_punct(";")
        self.expect_punct("}")
        self._open -= 1
        triple = (commodity, frozenset(k for k, _ in producers), frozenset(k for k, _ in consumers))
        for f in self.flows:
            if (f.commodity, frozenset(k for k, _ in f.producers), frozenset(k for k, _ in f.consumers)) == triple:
                self.error(span, f"duplicate declaration of flow {commodity!r} with identical producers and consumers")
                return
        self.flows.append(_RawFlow(commodity, producers, consumers, span))

    def assert_block(self):
        self.expect_word("assert")
        self.has_asserts = True
        self.expect_punct("{")
        self._open += 1
        depth = self._open
        while True:
            start = self.pos
            try:
                if self.at_punct("}"):
                    self.advance()
                    self._open -= 1
                    return
                tok = self.peek()
                if tok.kind != "IDENT" or tok.value not in model.SET_NAMES:
                    self.fail("one of 'C', 'E', 'I', 'B', 'O' or '}'")
                self.advance()
                self.expect_punct("=")
                self.expect_punct("{")
                self._open += 1
                items = self.commodity_list("}")
                self.expect_punct("}")
                self._open -= 1
                self.expect_punct(";")
                if tok.value in self.asserts:
                    self.error(tok.span, f"duplicate assertion for set {tok.value}")
                else:
                    self.asserts[tok.value] = (items, tok.span)
            except _Sync:
                self.skip_to(model.SET_NAMES, depth)
                if self.pos == start:
                    self.advance()
                if self._open < depth or self.peek().kind == "EOF":
                    return

    # -- name resolution

    def resolve(self) -> tuple[Hub, dict[tuple, SourceSpan]] | None:
        spans: dict[tuple, SourceSpan] = {}
        if self.hub_name is not None:
            spans[("hub", self.hub_name)] = self.hub_span
        loc_ids = [loc.id for loc, _ in self.locations]
        for loc, span in self.locations:
            spans[("location", loc.id)] = span

        techs = []
        for t in self.techs:
            key = model.tech_key(t.name, t.loc)
            spans[("tech", key)] = t.span
            if t.loc not in loc_ids:
                self.error(
                    t.loc_span,
                    f"technology {key!r} references undeclared location {t.loc!r}",
                    notes=_suggest(t.loc, loc_ids),
                )
            techs.append(Technology(t.name, t.loc, t.kind, frozenset(c for c, _ in t.inputs), frozenset(c for c, _ in t.outputs)))

        keys = [t.key for t in techs]
        edges = []
        for i, f in enumerate(self.flows):
            spans[("flow", i)] = f.span
            for ref, span in f.producers + f.consumers:
                if ref not in keys:
                    self.error(span, f"flow {f.commodity!r} references undeclared technology {ref!r}", notes=_suggest(ref, keys))
            edges.append(
                Hyperedge(f.commodity, frozenset(k for k, _ in f.producers), frozenset(k for k, _ in f.consumers))
            )

        declared = None
        if self.has_asserts:
            declared = {}
            for name, (items, span) in self.asserts.items():
                spans[("assert", name)] = span
                for c, cspan in items:
                    spans.setdefault(("assert", name, c), cspan)
                declared[name] = frozenset(c for c, _ in items)

        if any(d.severity == "error" for d in self.diags) or self.hub_name is None:
            return None
        hub = model.assemble_hub(self.hub_name, [loc for loc, _ in self.locations], TechGraph(tuple(techs), tuple(edges)), declared)
        return hub, spans


def _suggest(name: str, candidates) -> tuple[str, ...]:
    close = near_misses(name, candidates)
    if not close:
        return ()
    return ("did you mean " + ", ".join(repr(c) for c in close) + "?",)


def parse(source: str, file_name: str = "<string>") -> HubDocument:
    """Parse ``source`` into a :class:`HubDocument`.

    Raises :class:`ParseError` carrying every diagnostic if any error was
    found; warnings alone are attached to the returned document.
    """
    p = _Parser(source, file_name)
    p.parse()
    result = p.resolve()
    diags = sorted(p.diags, key=lambda d: (d.span.line, d.span.column, d.severity, d.message))
    if result is None:
        if not any(d.severity == "error" for d in diags):
            diags.append(ParseDiagnostic(SourceSpan(file_name, 1, 1), "error", "no hub declaration found", "'hub'"))
        raise ParseError(diags)
    hub, spans = result
    digest = hashlib.sha256(source.encode("utf-8")).hexdigest()
    return HubDocument(hub, spans, digest, diags)


def parse_file(path) -> HubDocument:
    from pathlib import Path

    path = Path(path)
    data = path.read_bytes()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(
            [ParseDiagnostic(SourceSpan(str(path), 1, 1), "error", f"file is not valid UTF-8 ({exc.reason} at byte {exc.start})")]
        ) from None
    return parse(text, str(path))
