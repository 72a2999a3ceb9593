"""Plain-text atlas documents (``.gsa``) and their JSON mirror.

A document looks like::

    atlas vector rank 2
    coord x even @(0,0)
    coord y odd @(1,0)
    coord Y odd @(0,1)
    coord z even @(1,1)
    chart U V
    transition U -> V {
      z' = z + y*Y
    }
    inverse {
      z' = z - y*Y
    }

Coordinates not assigned in a block are mapped to themselves.  Action tables
use 1-based one-line permutations, ``action sigma(2 1) on U { y -> Y }``;
without ``on`` the entry is used on every chart.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction

from . import perms
from .bundle import Atlas, BundleKind, Transition
from .superalg import (
    Chart,
    Coordinate,
    GsaError,
    Polynomial,
    PolynomialMap,
    format_fraction,
    format_polynomial,
)
from .symmetry import SKEW, SYMMETRIC, ActionTable

SCHEMA = "gsa-atlas/1"
MAX_EXPONENT = 64

NAME_RE = r"[A-Za-z_]\w*(?:@\(\d+(?:,\d+)*\))?(?:~\d+(?:\.\d+)*)?(?:\#\d+)?"


class DslError(GsaError, ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


class DslSyntaxError(DslError):
    pass


class DslSemanticError(DslError):
    pass


@dataclass(frozen=True, eq=False)
class AtlasDocument:
    atlas: Atlas
    action: ActionTable | None = None


# -- tokens ---------------------------------------------------------------------

_TOKEN = re.compile(
    rf"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>//[^\n]*)
  | (?P<nl>\n)
  | (?P<arrow>->)
  | (?P<tuple>@\(\s*(?:\d+(?:\s*,\s*\d+)*)?\s*\))
  | (?P<name>{NAME_RE})
  | (?P<number>\d+(?:/\d+)?)
  | (?P<op>[-+*^=(){{}}'])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    out = []
    line, start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise DslSyntaxError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            out.append(Token("nl", "\n", line, pos - start + 1))
            line, start = line + 1, m.end()
        elif kind not in ("ws", "comment"):
            out.append(Token(kind, m.group(), line, pos - start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - start + 1))
    return out


# -- parser ---------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.kind: BundleKind | None = None
        self.nmanifold = False
        self.coords: list[Coordinate] = []
        self.coord_at: dict[str, Token] = {}
        self.chart: Chart | None = None
        self.charts: list[str] = []
        self.flavor = SYMMETRIC
        self.transitions: list[Transition] = []
        self.overlaps: list[tuple[str, str, str]] = []
        self.actions: dict[tuple, dict[str, PolynomialMap]] = {}
        self.shared_actions: list[tuple[tuple, PolynomialMap]] = []

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def at(self, kind: str, text: str | None = None) -> bool:
        t = self.tok
        return t.kind == kind and (text is None or t.text == text)

    def expect(self, kind: str, text: str | None = None, what: str | None = None) -> Token:
        if not self.at(kind, text):
            t = self.tok
            want = what or (repr(text) if text else kind)
            got = "end of input" if t.kind == "eof" else ("end of line" if t.kind == "nl" else repr(t.text))
            raise DslSyntaxError(f"expected {want}, got {got}", t.line, t.column)
        return self.advance()

    def keyword(self, word: str) -> Token:
        return self.expect("name", word, what=f"'{word}'")

    def skip_nl(self) -> None:
        while self.at("nl"):
            self.advance()

    def end_line(self) -> None:
        if not self.at("eof"):
            self.expect("nl", what="end of line")
        self.skip_nl()

    def integer(self) -> int:
        t = self.expect("number", what="an integer")
        if "/" in t.text:
            raise DslSyntaxError("expected an integer", t.line, t.column)
        return int(t.text)

    def semantic(self, msg: str, t: Token | None = None):
        t = self.tok if t is None else t
        return DslSemanticError(msg, t.line, t.column)

    # document
    def parse(self) -> AtlasDocument:
        self.skip_nl()
        self.header()
        while not self.at("eof"):
            t = self.tok
            if t.kind != "name":
                raise DslSyntaxError(f"expected a statement, got {t.text!r}", t.line, t.column)
            handler = {
                "coord": self.coord,
                "chart": self.chart_decl,
                "transition": self.transition,
                "overlap": self.overlap,
                "flavor": self.flavor_decl,
                "action": self.action,
            }.get(t.text)
            if handler is None:
                raise DslSyntaxError(f"unknown statement {t.text!r}", t.line, t.column)
            handler()
        return self.finish()

    def header(self) -> None:
        self.keyword("atlas")
        t = self.expect("name", what="bundle kind")
        if t.text == "weighted":
            self.keyword("degree")
            self.kind = BundleKind.weighted(self._positive(self.integer, t))
        elif t.text == "vector":
            self.keyword("rank")
            self.kind = BundleKind.vector(self._positive(self.integer, t))
        elif t.text == "mixed":
            self.keyword("rank")
            k = self._positive(self.integer, t)
            self.keyword("degree")
            self.kind = BundleKind(k, self._positive(self.integer, t))
        elif t.text == "manifold":
            self.kind = BundleKind.manifold()
        else:
            raise DslSyntaxError(f"unknown bundle kind {t.text!r}", t.line, t.column)
        if self.at("name", "nmanifold"):
            self.advance()
            self.nmanifold = True
        self.end_line()

    def _positive(self, read, at: Token) -> int:
        t = self.tok
        v = read()
        if v < 1:
            raise self.semantic("rank and degree must be positive", t)
        return v

    def coord(self) -> None:
        self.keyword("coord")
        if self.chart is not None:
            raise self.semantic("coordinates must be declared before charts and transitions")
        nt = self.expect("name", what="coordinate name")
        if nt.text in self.coord_at:
            first = self.coord_at[nt.text]
            raise self.semantic(f"duplicate coordinate {nt.text!r} (first declared on line {first.line})", nt)
        pt = self.expect("name", what="parity keyword")
        if pt.text not in ("even", "odd"):
            raise self.semantic(f"invalid parity keyword {pt.text!r}, use even or odd", pt)
        parity = 0 if pt.text == "even" else 1
        length = self.kind.weight_length
        if self.at("tuple"):
            wt = self.advance()
            inner = wt.text[2:-1].strip()
            weight = tuple(int(x) for x in inner.split(",")) if inner else ()
            if len(weight) != length:
                raise self.semantic(f"weight {wt.text} has length {len(weight)}, {self.kind.describe()} needs {length}", wt)
            for w, b in zip(weight, self.kind.bounds()):
                if w > b:
                    raise self.semantic(f"weight {wt.text} out of range for {self.kind.describe()}", wt)
        else:
            weight = (0,) * length
        self.coords.append(Coordinate(nt.text, parity, weight))
        self.coord_at[nt.text] = nt
        self.end_line()

    def _chart(self) -> Chart:
        if self.chart is None:
            if not self.coords:
                raise self.semantic("no coordinates declared")
            self.chart = Chart(self.coords)
        return self.chart

    def chart_decl(self) -> None:
        self.keyword("chart")
        self._chart()
        if not self.at("name"):
            self.expect("name", what="chart name")
        while self.at("name"):
            t = self.advance()
            if t.text in self.charts:
                raise self.semantic(f"duplicate chart {t.text!r}", t)
            self.charts.append(t.text)
        self.end_line()

    def chart_ref(self) -> str:
        t = self.expect("name", what="chart name")
        if t.text not in self.charts:
            raise self.semantic(f"unknown chart {t.text!r}", t)
        return t.text

    def transition(self) -> None:
        start = self.keyword("transition")
        src = self.chart_ref()
        self.expect("arrow", what="'->'")
        tgt = self.chart_ref()
        if src == tgt:
            raise self.semantic("transition from a chart to itself", start)
        for t in self.transitions:
            if {t.source, t.target} == {src, tgt}:
                raise self.semantic(f"second transition between {src} and {tgt}", start)
        fwd = self.assignment_block("=")
        self.skip_nl()
        self.keyword("inverse")
        inv = self.assignment_block("=")
        self.end_line()
        self.transitions.append(Transition(src, tgt, fwd, inv))

    def assignment_block(self, sep: str) -> PolynomialMap:
        chart = self._chart()
        self.skip_nl()
        self.expect("op", "{")
        self.skip_nl()
        images = list(chart.vars())
        seen: set[str] = set()
        while not self.at("op", "}"):
            nt = self.expect("name", what="coordinate name")
            if nt.text not in chart.names:
                raise self.semantic(f"unknown coordinate {nt.text!r}", nt)
            if nt.text in seen:
                raise self.semantic(f"coordinate {nt.text!r} assigned twice", nt)
            seen.add(nt.text)
            if sep == "=" and self.at("op", "'"):
                self.advance()
            if sep == "=":
                self.expect("op", "=")
            else:
                self.expect("arrow", what="'->'")
            images[chart.index(nt.text)] = self.expr()
            if not self.at("op", "}"):
                self.expect("nl", what="end of line")
            self.skip_nl()
        self.advance()
        return PolynomialMap(chart, chart, images)

    def overlap(self) -> None:
        start = self.keyword("overlap")
        tri = (self.chart_ref(), self.chart_ref(), self.chart_ref())
        if len(set(tri)) != 3:
            raise self.semantic("an overlap needs three distinct charts", start)
        self.overlaps.append(tri)
        self.end_line()

    def flavor_decl(self) -> None:
        self.keyword("flavor")
        t = self.expect("name", what="symmetric or skew")
        if t.text not in (SYMMETRIC, SKEW):
            raise self.semantic(f"unknown flavor {t.text!r}", t)
        self.flavor = t.text
        self.end_line()

    def action(self) -> None:
        start = self.keyword("action")
        if not self.kind.vector_slots:
            raise self.semantic("actions need vector slots", start)
        st = self.keyword("sigma")
        self.expect("op", "(")
        raw = []
        while not self.at("op", ")"):
            raw.append(self.integer())
        self.advance()
        n = self.kind.vector_slots
        sigma = tuple(x - 1 for x in raw)
        if len(sigma) != n or not perms.is_perm(sigma):
            raise self.semantic(f"sigma({' '.join(map(str, raw))}) is not a permutation of 1..{n}", st)
        chart = None
        if self.at("name", "on"):
            self.advance()
            chart = self.chart_ref()
        m = self.assignment_block("->")
        self.end_line()
        per = self.actions.setdefault(sigma, {})
        targets = self.charts if chart is None else [chart]
        for u in targets:
            if u in per:
                raise self.semantic(f"action of sigma({' '.join(map(str, raw))}) on {u} given twice", start)
            per[u] = m

    # expressions: sum of signed products of powers
    def expr(self) -> Polynomial:
        chart = self._chart()
        sign = 1
        if self.at("op", "-") or self.at("op", "+"):
            sign = -1 if self.advance().text == "-" else 1
        acc = self.product().scale(sign)
        while self.at("op", "+") or self.at("op", "-"):
            op = self.advance().text
            term = self.product()
            acc = acc + term if op == "+" else acc - term
        return acc if acc.chart is chart else chart.zero() + acc

    def product(self) -> Polynomial:
        acc = self.power()
        while self.at("op", "*"):
            self.advance()
            acc = acc * self.power()
        return acc

    def power(self) -> Polynomial:
        base = self.atom()
        if self.at("op", "^"):
            self.advance()
            t = self.tok
            k = self.integer()
            if k > MAX_EXPONENT:
                raise self.semantic(f"exponent {k} exceeds {MAX_EXPONENT}", t)
            base = base ** k
        return base

    def atom(self) -> Polynomial:
        chart = self._chart()
        t = self.tok
        if t.kind == "number":
            self.advance()
            num, _, den = t.text.partition("/")
            if den and int(den) == 0:
                raise self.semantic("zero denominator", t)
            return chart.const(Fraction(int(num), int(den or 1)))
        if t.kind == "name":
            self.advance()
            if t.text not in chart.names:
                raise self.semantic(f"unknown identifier {t.text!r}", t)
            return chart.var(t.text)
        if self.at("op", "("):
            self.advance()
            self.skip_nl()
            inner = self.expr()
            self.skip_nl()
            self.expect("op", ")")
            return inner
        if self.at("op", "-"):
            self.advance()
            return -self.atom()
        got = "end of input" if t.kind == "eof" else ("end of line" if t.kind == "nl" else repr(t.text))
        raise DslSyntaxError(f"expected an expression, got {got}", t.line, t.column)

    def finish(self) -> AtlasDocument:
        chart = self._chart()
        if not self.charts:
            raise self.semantic("no charts declared")
        try:
            atlas = Atlas(self.kind, chart, tuple(self.charts), tuple(self.transitions),
                          tuple(self.overlaps), self.nmanifold)
        except ValueError as exc:
            raise self.semantic(str(exc))
        action = ActionTable(atlas, self.actions, self.flavor) if self.actions else None
        return AtlasDocument(atlas, action)


def parse_atlas(text: str) -> AtlasDocument:
    """Parse a ``.gsa`` document; every rejection is a :class:`DslError` with a location."""
    try:
        return _Parser(text).parse()
    except RecursionError:
        raise DslSyntaxError("expression nested too deeply", 1, 1) from None


# -- emission -------------------------------------------------------------------


def _header(a: Atlas) -> str:
    k = a.kind
    if k.is_manifold:
        head = "atlas manifold"
    elif k.is_vector:
        head = f"atlas vector rank {k.vector_slots}"
    elif k.is_weighted:
        head = f"atlas weighted degree {k.degree}"
    else:
        head = f"atlas mixed rank {k.vector_slots} degree {k.degree}"
    return head + (" nmanifold" if a.nmanifold else "")


def _assignments(m: PolynomialMap, sep: str) -> list[str]:
    out = []
    for c, img in zip(m.codomain, m.images):
        if img != m.domain.var(c.name):
            out.append(f"  {c.name}{sep}{format_polynomial(img)}")
    return out


def _block(lines: list[str]) -> str:
    return "{\n" + "".join(x + "\n" for x in lines) + "}" if lines else "{ }"


def _format_sigma(sigma) -> str:
    return "sigma(" + " ".join(str(x + 1) for x in sigma) + ")"


def emit_dsl(a: Atlas, action: ActionTable | None = None) -> str:
    lines = [_header(a)]
    for c in a.chart:
        w = "" if a.kind.is_manifold else " @(" + ",".join(map(str, c.weight)) + ")"
        lines.append(f"coord {c.name} {'odd' if c.parity else 'even'}{w}")
    lines.append("chart " + " ".join(sorted(a.chart_names)))
    for t in sorted(a.transitions, key=lambda t: (t.source, t.target)):
        lines.append(f"transition {t.source} -> {t.target} " + _block(_assignments(t.forward, "' = ")))
        lines.append("inverse " + _block(_assignments(t.inverse, "' = ")))
    for tri in sorted(a.overlaps):
        lines.append("overlap " + " ".join(tri))
    if action is not None:
        lines.append(f"flavor {action.flavor}")
        for sigma in sorted(action.entries):
            per = action.entries[sigma]
            maps = list(per.values())
            if set(per) == set(a.chart_names) and all(m == maps[0] for m in maps):
                lines.append(f"action {_format_sigma(sigma)} " + _block(_assignments(maps[0], " -> ")))
                continue
            for u in sorted(per):
                lines.append(f"action {_format_sigma(sigma)} on {u} " + _block(_assignments(per[u], " -> ")))
    return "\n".join(lines) + "\n"


def _terms_json(p: Polynomial) -> list:
    names = p.chart.names
    return [{"monomial": [names[i] for i in mono], "coeff": format_fraction(c)} for mono, c in sorted(p.terms)]


def _map_json(m: PolynomialMap) -> dict:
    return {c.name: _terms_json(img) for c, img in zip(m.codomain, m.images)
            if img != m.domain.var(c.name)}


def to_json(a: Atlas, action: ActionTable | None = None) -> dict:
    doc = {
        "schema": SCHEMA,
        "kind": {"vector_slots": a.kind.vector_slots, "degree": a.kind.degree},
        "nmanifold": a.nmanifold,
        "coordinates": [{"name": c.name, "parity": c.parity, "weight": list(c.weight)} for c in a.chart],
        "charts": sorted(a.chart_names),
        "transitions": [
            {"source": t.source, "target": t.target, "forward": _map_json(t.forward), "inverse": _map_json(t.inverse)}
            for t in sorted(a.transitions, key=lambda t: (t.source, t.target))
        ],
        "overlaps": [list(tri) for tri in sorted(a.overlaps)],
    }
    if action is not None:
        doc["action"] = {
            "flavor": action.flavor,
            "entries": [
                {"sigma": [x + 1 for x in sigma], "chart": u, "images": _map_json(action.entries[sigma][u])}
                for sigma in sorted(action.entries) for u in sorted(action.entries[sigma])
            ],
        }
    return doc


def emit_json(a: Atlas, action: ActionTable | None = None) -> str:
    return json.dumps(to_json(a, action), indent=2, sort_keys=True) + "\n"


def emit_atlas(a: Atlas, fmt: str = "dsl", action: ActionTable | None = None) -> str:
    if fmt == "dsl":
        return emit_dsl(a, action)
    if fmt == "json":
        return emit_json(a, action)
    raise ValueError(f"unknown format {fmt!r}")


def _json_error(msg: str) -> DslSemanticError:
    return DslSemanticError(msg, 1, 1)


def _json_poly(chart: Chart, terms) -> Polynomial:
    p = chart.zero()
    for t in terms:
        term = chart.const(Fraction(t["coeff"]))
        for name in t["monomial"]:
            if name not in chart.names:
                raise _json_error(f"unknown identifier {name!r}")
            term = term * chart.var(name)
        p = p + term
    return p


def _json_map(chart: Chart, images: dict) -> PolynomialMap:
    out = list(chart.vars())
    for name, terms in images.items():
        if name not in chart.names:
            raise _json_error(f"unknown coordinate {name!r}")
        out[chart.index(name)] = _json_poly(chart, terms)
    return PolynomialMap(chart, chart, out)


def from_json(data: dict | str) -> AtlasDocument:
    """Inverse of :func:`to_json`.  Malformed input raises :class:`DslSemanticError`."""
    try:
        if isinstance(data, str):
            data = json.loads(data)
        if data.get("schema") != SCHEMA:
            raise _json_error(f"unsupported schema {data.get('schema')!r}, expected {SCHEMA}")
        kind = BundleKind(data["kind"]["vector_slots"], data["kind"]["degree"])
        coords = [Coordinate(c["name"], int(c["parity"]), tuple(c["weight"])) for c in data["coordinates"]]
        chart = Chart(coords)
        ts = tuple(
            Transition(t["source"], t["target"], _json_map(chart, t["forward"]), _json_map(chart, t["inverse"]))
            for t in data["transitions"]
        )
        atlas = Atlas(kind, chart, tuple(data["charts"]), ts, tuple(tuple(x) for x in data["overlaps"]),
                      bool(data["nmanifold"]))
        action = None
        if "action" in data:
            entries: dict = {}
            for e in data["action"]["entries"]:
                sigma = tuple(x - 1 for x in e["sigma"])
                entries.setdefault(sigma, {})[e["chart"]] = _json_map(chart, e["images"])
            action = ActionTable(atlas, entries, data["action"]["flavor"])
        return AtlasDocument(atlas, action)
    except DslError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError, ZeroDivisionError) as exc:
        raise _json_error(f"malformed JSON atlas: {exc}") from None


def loads(text: str) -> AtlasDocument:
    """Parse either format; JSON is recognised by a leading brace."""
    return from_json(text) if text.lstrip().startswith("{") else parse_atlas(text)
