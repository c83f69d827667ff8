"""Line-oriented description language for curves, models and flat surfaces.

Every declaration is one line starting with a keyword; ``#`` starts a
comment when it follows whitespace or begins the line. Problems are
collected over the whole document and raised together as ParseErrors.
"""

from __future__ import annotations

import logging
import re
from collections.abc import Callable
from dataclasses import dataclass
from fractions import Fraction

from .const import DEFAULT_EFFECTIVE_SEARCH_BOUND
from .curve import Edge, Leg, StableCurve, Vertex, insert_rational_chain
from .divisor import FACT_KINDS, Axiom, AxiomKind, ComponentModel, DivisorClass, model_for
from .exceptions import ParseErrors, ParseIssue, TwistcalcError
from .flat import Circle, Polygon, Slit, TranslationSurface, point
from .strata import Signature
from .typedefs import HalfEdge, Point2
from .util import format_fraction, format_order, parse_fraction, parse_order
from .weierstrass import ChainInput

_LOGGER = logging.getLogger(__name__)

NAME = r"[A-Za-z_][A-Za-z0-9_#]*"
POINT = NAME + r"'{0,2}"
ORDER = r"\d+|inf"
NUMBER = r"-?\d+(?:/\d+)?"

_VERTEX = re.compile(
    rf"vertex\s+(?P<label>{NAME})\s+genus\s+(?P<genus>\d+)(?P<exceptional>\s+exceptional)?"
)
_EDGE = re.compile(rf"edge\s+(?P<label>{NAME})\s+(?P<first>{NAME})\s+(?P<second>{NAME})")
_LEG = re.compile(rf"leg\s+(?P<label>{NAME})\s+(?P<vertex>{NAME})\s+order\s+(?P<order>-?\d+)")
_SIGNATURE = re.compile(r"signature(?P<orders>(?:\s+-?\d+)+)")
_INSERT = re.compile(rf"insert\s+(?P<edge>{NAME})\s+length\s+(?P<length>\d+)")
_TORSION = re.compile(
    rf"torsion\s+(?P<vertex>{NAME})\s*:\s*(?P<first>{POINT})\s*-\s*(?P<second>{POINT})"
    rf"\s+order\s+(?P<order>{ORDER})"
)
_AXIOM = re.compile(rf"axiom\s+(?P<vertex>{NAME})\s*:\s*(?P<kind>[a-z0-9]+)\s*(?P<body>.*)")
_CHAIN = re.compile(rf"chain\s+g=(?P<genus>\d+)(?P<orders>(?:\s+t\d+=(?:{ORDER}))*)")
_BDIM = re.compile(r"bdim\s+(?P<value>-?\d+)")
_POLYGON = re.compile(rf"polygon\s+(?P<label>{NAME})\s*:\s*(?P<points>.+)")
_PAIR = re.compile(rf"pair\s+(?P<first>{NAME}\.\d+)\s+(?P<second>{NAME}\.\d+)")
_BOUNDARY = re.compile(rf"boundary\s+(?P<name>{NAME})\s*:\s*(?P<edges>.+)")
_SLIT = re.compile(
    rf"slit\s+(?P<name>{NAME})\s+(?P<polygon>{NAME})\s*:\s*(?P<start>\S+)\s+(?P<end>\S+)"
)
_PLUMB = re.compile(
    rf"plumb\s+(?P<alpha>{NAME})\s+(?P<beta>{NAME})\s+height\s+(?P<height>{NUMBER})"
    rf"(?:\s+twist\s+(?P<twist>{NUMBER}))?"
)
_HALF_EDGE = re.compile(rf"(?P<label>{NAME})\.(?P<index>\d+)")
_COORDINATE = re.compile(rf"(?P<x>{NUMBER}),(?P<y>{NUMBER})")
_H0 = re.compile(r"(?P<divisor>.+?)\s*=\s*(?P<value>\d+)")


@dataclass(frozen=True)
class TorsionDeclaration:
    vertex: str
    first: str
    second: str
    order: int | None


@dataclass(frozen=True)
class AxiomDeclaration:
    vertex: str
    axiom: Axiom


@dataclass(frozen=True)
class NamedSlit:
    name: str
    slit: Slit


@dataclass(frozen=True)
class Plumbing:
    alpha: str
    beta: str
    height: Fraction
    twist: Fraction = Fraction(0)


@dataclass(frozen=True)
class CurveDocument:
    signature: Signature | None = None
    vertices: tuple[Vertex, ...] = ()
    edges: tuple[Edge, ...] = ()
    legs: tuple[Leg, ...] = ()
    inserts: tuple[tuple[str, int], ...] = ()
    torsion: tuple[TorsionDeclaration, ...] = ()
    axioms: tuple[AxiomDeclaration, ...] = ()
    base_dimension: int | None = None
    chain: ChainInput | None = None
    polygons: tuple[Polygon, ...] = ()
    pairings: tuple[tuple[HalfEdge, HalfEdge], ...] = ()
    circles: tuple[Circle, ...] = ()
    slits: tuple[NamedSlit, ...] = ()
    plumbings: tuple[Plumbing, ...] = ()

    @property
    def has_curve(self) -> bool:
        return bool(self.vertices)

    @property
    def has_surface(self) -> bool:
        return bool(self.polygons)

    def curve(self) -> StableCurve:
        """The declared curve with the requested rational chains inserted."""
        curve = StableCurve(self.vertices, self.edges, self.legs)
        for label, length in self.inserts:
            curve = insert_rational_chain(curve, label, length)
        return curve

    def models(
        self, search_bound: int = DEFAULT_EFFECTIVE_SEARCH_BOUND
    ) -> dict[str, ComponentModel]:
        curve = self.curve()
        models: dict[str, ComponentModel] = {}
        for vertex in self.vertices:
            axioms = tuple(a.axiom for a in self.axioms if a.vertex == vertex.label)
            torsion = tuple(
                (t.first, t.second, t.order) for t in self.torsion if t.vertex == vertex.label
            )
            models[vertex.label] = model_for(curve, vertex.label, axioms, torsion, search_bound)
        return models

    def surface(self) -> TranslationSurface:
        return TranslationSurface(self.polygons, self.pairings, self.circles)


def _half_edge(text: str) -> HalfEdge:
    match = _HALF_EDGE.fullmatch(text)
    if match is None:
        raise ValueError(f"{text!r} is not POLYGON.INDEX")
    return match["label"], int(match["index"])


def _coordinate(text: str) -> Point2:
    match = _COORDINATE.fullmatch(text)
    if match is None:
        raise ValueError(f"{text!r} is not x,y")
    return point(parse_fraction(match["x"]), parse_fraction(match["y"]))


def _column(line: str, token: str) -> int:
    """1-based column of ``token``, searched after the keyword unless it is one."""
    words = line.split(maxsplit=1)
    start = len(line) - len(line.lstrip())
    if words and words[0] != token:
        start += len(words[0])
    found = line.find(token, start)
    return found + 1 if found >= 0 else 1


def _strip_comment(line: str) -> str:
    for index, char in enumerate(line):
        if char == "#" and (index == 0 or line[index - 1].isspace()):
            return line[:index]
    return line


class _Parser:
    def __init__(self) -> None:
        self.issues: list[ParseIssue] = []
        self.fields: dict[str, list] = {
            "vertices": [],
            "edges": [],
            "legs": [],
            "inserts": [],
            "torsion": [],
            "polygons": [],
            "pairings": [],
            "circles": [],
            "slits": [],
            "plumbings": [],
        }
        self.signature: Signature | None = None
        self.base_dimension: int | None = None
        self.chain: ChainInput | None = None
        # raw axiom lines, read once the curve is known
        self.axiom_lines: list[tuple[int, str, re.Match[str]]] = []
        self.lines: dict[tuple[str, str], int] = {}

    def issue(self, number: int, line: str, message: str, token: str | None = None) -> None:
        column = _column(line, token) if token else 1
        self.issues.append(ParseIssue(number, column, message))

    def declare(self, kind: str, name: str, number: int, line: str) -> bool:
        if (kind, name) in self.lines:
            self.issue(
                number,
                line,
                f"duplicate {kind} {name!r} (first declared on line {self.lines[(kind, name)]})",
                name,
            )
            return False
        self.lines[(kind, name)] = number
        return True

    def line(self, number: int, line: str) -> None:
        stripped = line.strip()
        keyword = stripped.split(maxsplit=1)[0]
        handler: Callable[[int, str, re.Match[str]], None] | None = getattr(
            self, f"_{keyword}", None
        )
        pattern = _PATTERNS.get(keyword)
        if handler is None or pattern is None:
            self.issue(number, line, f"unknown keyword {keyword!r}", keyword)
            return
        match = pattern.fullmatch(stripped)
        if match is None:
            self.issue(number, line, f"malformed {keyword} declaration")
            return
        try:
            handler(number, line, match)
        except (TwistcalcError, ValueError) as e:
            self.issue(number, line, str(e))

    def _signature(self, number: int, line: str, match: re.Match[str]) -> None:
        if self.signature is not None:
            self.issue(number, line, "signature declared twice")
            return
        self.signature = Signature(tuple(int(x) for x in match["orders"].split()))

    def _vertex(self, number: int, line: str, match: re.Match[str]) -> None:
        if self.declare("vertex", match["label"], number, line):
            self.fields["vertices"].append(
                (
                    number,
                    Vertex(match["label"], int(match["genus"]), bool(match["exceptional"])),
                )
            )

    def _edge(self, number: int, line: str, match: re.Match[str]) -> None:
        if self.declare("node or leg", match["label"], number, line):
            edge = Edge(match["label"], (match["first"], match["second"]))
            self.fields["edges"].append((number, edge))

    def _leg(self, number: int, line: str, match: re.Match[str]) -> None:
        if self.declare("node or leg", match["label"], number, line):
            leg = Leg(match["label"], match["vertex"], int(match["order"]))
            self.fields["legs"].append((number, leg))

    def _insert(self, number: int, line: str, match: re.Match[str]) -> None:
        self.fields["inserts"].append((number, (match["edge"], int(match["length"]))))

    def _torsion(self, number: int, line: str, match: re.Match[str]) -> None:
        declaration = TorsionDeclaration(
            match["vertex"], match["first"], match["second"], parse_order(match["order"])
        )
        self.fields["torsion"].append((number, declaration))

    def _axiom(self, number: int, line: str, match: re.Match[str]) -> None:
        self.axiom_lines.append((number, line, match))

    def _chain(self, number: int, line: str, match: re.Match[str]) -> None:
        genus = int(match["genus"])
        given: dict[int, int | None] = {}
        for item in match["orders"].split():
            key, _, value = item.partition("=")
            index = int(key[1:])
            if index in given:
                raise ValueError(f"t{index} given twice")
            given[index] = parse_order(value)
        expected = set(range(2, genus + 1))
        if set(given) != expected:
            raise ValueError(
                f"chain of genus {genus} needs exactly t2..t{genus}, got "
                + (", ".join(f"t{i}" for i in sorted(given)) or "none")
            )
        self.chain = ChainInput(genus, tuple(given[i] for i in sorted(given)))

    def _bdim(self, number: int, line: str, match: re.Match[str]) -> None:
        self.base_dimension = int(match["value"])

    def _polygon(self, number: int, line: str, match: re.Match[str]) -> None:
        if self.declare("polygon", match["label"], number, line):
            vertices = tuple(_coordinate(text) for text in match["points"].split())
            self.fields["polygons"].append((number, Polygon(match["label"], vertices)))

    def _pair(self, number: int, line: str, match: re.Match[str]) -> None:
        pair = (_half_edge(match["first"]), _half_edge(match["second"]))
        self.fields["pairings"].append((number, pair))

    def _boundary(self, number: int, line: str, match: re.Match[str]) -> None:
        if self.declare("boundary circle", match["name"], number, line):
            edges = tuple(_half_edge(text) for text in match["edges"].split())
            self.fields["circles"].append((number, Circle(match["name"], edges)))

    def _slit(self, number: int, line: str, match: re.Match[str]) -> None:
        if self.declare("slit", match["name"], number, line):
            slit = Slit(match["polygon"], _coordinate(match["start"]), _coordinate(match["end"]))
            self.fields["slits"].append((number, NamedSlit(match["name"], slit)))

    def _plumb(self, number: int, line: str, match: re.Match[str]) -> None:
        twist = parse_fraction(match["twist"]) if match["twist"] else Fraction(0)
        plumbing = Plumbing(match["alpha"], match["beta"], parse_fraction(match["height"]), twist)
        self.fields["plumbings"].append((number, plumbing))

    def values(self, key: str) -> tuple:
        return tuple(value for _, value in self.fields[key])

    def cross_check(self, text_lines: list[str]) -> None:
        """References between declarations, checked once everything is read."""
        vertices = {vertex.label for vertex in self.values("vertices")}
        edges = {edge.label: edge for edge in self.values("edges")}

        def line_of(number: int) -> str:
            return text_lines[number - 1]

        for number, edge in self.fields["edges"]:
            for end in edge.ends:
                if end not in vertices:
                    self.issue(
                        number,
                        line_of(number),
                        f"edge {edge.label} references unknown vertex {end!r}",
                        end,
                    )
        for number, leg in self.fields["legs"]:
            if leg.vertex not in vertices:
                self.issue(
                    number,
                    line_of(number),
                    f"leg {leg.label} references unknown vertex {leg.vertex!r}",
                    leg.vertex,
                )
        for number, (label, _) in self.fields["inserts"]:
            if label not in edges:
                self.issue(number, line_of(number), f"unknown edge {label!r}", label)
        for number, declaration in self.fields["torsion"]:
            if declaration.vertex not in vertices:
                self.issue(
                    number,
                    line_of(number),
                    f"torsion on unknown vertex {declaration.vertex!r}",
                    declaration.vertex,
                )
        if self.signature is not None and self.fields["legs"]:
            orders = tuple(leg.order for leg in self.values("legs"))
            if orders != self.signature.orders:
                number = self.fields["legs"][0][0]
                self.issue(
                    number,
                    line_of(number),
                    f"leg orders {Signature(orders)} do not match the signature {self.signature}",
                )
        polygons = {polygon.label: polygon for polygon in self.values("polygons")}
        for key in ("pairings", "circles"):
            for number, item in self.fields[key]:
                half_edges = item if key == "pairings" else item.edges
                for label, index in half_edges:
                    if label not in polygons or index >= len(polygons[label]):
                        self.issue(
                            number, line_of(number), f"no edge {label}.{index}", f"{label}.{index}"
                        )
        for number, named in self.fields["slits"]:
            if named.slit.polygon not in polygons:
                self.issue(
                    number,
                    line_of(number),
                    f"slit {named.name} in unknown polygon {named.slit.polygon!r}",
                    named.slit.polygon,
                )
        circles = {circle.name for circle in self.values("circles")}
        for number, plumbing in self.fields["plumbings"]:
            for name in (plumbing.alpha, plumbing.beta):
                if name not in circles:
                    self.issue(
                        number, line_of(number), f"unknown boundary circle {name!r}", name
                    )

    def read_axioms(self) -> tuple[AxiomDeclaration, ...]:
        curve: StableCurve | None
        try:
            curve = StableCurve(
                self.values("vertices"), self.values("edges"), self.values("legs")
            )
        except TwistcalcError:
            curve = None
        labels = {vertex.label for vertex in self.values("vertices")}
        declarations: list[AxiomDeclaration] = []
        for number, line, match in self.axiom_lines:
            vertex = match["vertex"]
            if vertex not in labels:
                self.issue(number, line, f"axiom on unknown vertex {vertex!r}", vertex)
                continue
            if curve is None:
                continue
            try:
                axiom = read_axiom(curve, vertex, match["kind"], match["body"])
            except (TwistcalcError, ValueError) as e:
                self.issue(number, line, str(e), match["kind"])
                continue
            declarations.append(AxiomDeclaration(vertex, axiom))
        return tuple(declarations)


_PATTERNS: dict[str, re.Pattern[str]] = {
    "signature": _SIGNATURE,
    "vertex": _VERTEX,
    "edge": _EDGE,
    "leg": _LEG,
    "insert": _INSERT,
    "torsion": _TORSION,
    "axiom": _AXIOM,
    "chain": _CHAIN,
    "bdim": _BDIM,
    "polygon": _POLYGON,
    "pair": _PAIR,
    "boundary": _BOUNDARY,
    "slit": _SLIT,
    "plumb": _PLUMB,
}


def read_axiom(curve: StableCurve, vertex: str, word: str, body: str) -> Axiom:
    """One axiom in the words used after ``axiom VERTEX:``."""
    negated = word.startswith("not") and word not in (AxiomKind.NOT_EQUIV, AxiomKind.NOT_EFFECTIVE)
    kind_word = word[3:] if negated else word
    try:
        kind = AxiomKind(kind_word)
    except ValueError as e:
        raise ValueError(f"unknown axiom kind {word!r}") from e
    if negated and kind not in FACT_KINDS:
        raise ValueError(f"unknown axiom kind {word!r}")
    if kind in (AxiomKind.EQUIV, AxiomKind.NOT_EQUIV):
        left, separator, right = body.partition("~")
        if not separator:
            raise ValueError(f"{word} needs D1 ~ D2")
        divisors = (DivisorClass.parse(vertex, left), DivisorClass.parse(vertex, right))
        return Axiom(kind, divisors)
    if kind in (AxiomKind.EFFECTIVE, AxiomKind.NOT_EFFECTIVE):
        return Axiom(kind, (DivisorClass.parse(vertex, body),))
    if kind == AxiomKind.H0:
        match = _H0.fullmatch(body.strip())
        if match is None:
            raise ValueError("h0 needs D = N")
        return Axiom(
            kind, (DivisorClass.parse(vertex, match["divisor"]),), value=int(match["value"])
        )
    points = tuple(body.split())
    expected = {AxiomKind.WEIERSTRASS: 1, AxiomKind.CONJUGATE: 2, AxiomKind.RESIDUE: 2}[kind]
    if kind == AxiomKind.RESIDUE and len(points) == 1:
        loops = {loop.label: loop for loop in curve.loops(vertex)}
        if points[0] not in loops:
            raise ValueError(f"{points[0]!r} is not a self-node of {vertex}")
        points = loops[points[0]].point_names
    if len(points) != expected:
        raise ValueError(f"{word} takes {expected} point(s)")
    marked = set(curve.marked_points(vertex))
    for name in points:
        if name not in marked:
            raise ValueError(f"{name!r} is not a marked point of {vertex}")
    return Axiom(kind, points=points, negated=negated)


def parse(text: str) -> CurveDocument:
    parser = _Parser()
    text_lines = [_strip_comment(raw) for raw in text.splitlines()]
    for number, line in enumerate(text_lines, start=1):
        if line.strip():
            parser.line(number, line)
    parser.cross_check(text_lines)
    axioms = parser.read_axioms()
    if parser.issues:
        issues = tuple(sorted(parser.issues, key=lambda i: (i.line, i.column)))
        _LOGGER.debug("Document has %d problems", len(issues))
        raise ParseErrors(issues)
    document = CurveDocument(
        parser.signature,
        parser.values("vertices"),
        parser.values("edges"),
        parser.values("legs"),
        parser.values("inserts"),
        parser.values("torsion"),
        axioms,
        parser.base_dimension,
        parser.chain,
        parser.values("polygons"),
        parser.values("pairings"),
        parser.values("circles"),
        parser.values("slits"),
        parser.values("plumbings"),
    )
    _LOGGER.debug(
        "Parsed %d vertices, %d edges, %d legs, %d polygons",
        len(document.vertices),
        len(document.edges),
        len(document.legs),
        len(document.polygons),
    )
    return document


def format_axiom(axiom: Axiom) -> str:
    if axiom.kind in (AxiomKind.EQUIV, AxiomKind.NOT_EQUIV):
        first, second = axiom.divisors
        return f"{axiom.kind} {first} ~ {second}"
    if axiom.kind in (AxiomKind.EFFECTIVE, AxiomKind.NOT_EFFECTIVE):
        return f"{axiom.kind} {axiom.divisors[0]}"
    if axiom.kind == AxiomKind.H0:
        return f"h0 {axiom.divisors[0]} = {axiom.value}"
    word = f"not{axiom.kind}" if axiom.negated else str(axiom.kind)
    return f"{word} {' '.join(axiom.points)}"


def _format_point(value: Point2) -> str:
    return f"{format_fraction(value[0])},{format_fraction(value[1])}"


def _format_half_edge(half_edge: HalfEdge) -> str:
    return f"{half_edge[0]}.{half_edge[1]}"


def format_document(document: CurveDocument) -> str:
    """Canonical text of a document; parse(format_document(d)) == d."""
    lines: list[str] = []
    if document.signature is not None:
        lines.append("signature " + " ".join(str(o) for o in document.signature.orders))
    for vertex in document.vertices:
        suffix = " exceptional" if vertex.exceptional else ""
        lines.append(f"vertex {vertex.label} genus {vertex.genus}{suffix}")
    for edge in document.edges:
        lines.append(f"edge {edge.label} {edge.ends[0]} {edge.ends[1]}")
    for leg in document.legs:
        lines.append(f"leg {leg.label} {leg.vertex} order {leg.order}")
    for label, length in document.inserts:
        lines.append(f"insert {label} length {length}")
    for torsion in document.torsion:
        lines.append(
            f"torsion {torsion.vertex}: {torsion.first} - {torsion.second} "
            f"order {format_order(torsion.order)}"
        )
    for declaration in document.axioms:
        lines.append(f"axiom {declaration.vertex}: {format_axiom(declaration.axiom)}")
    if document.base_dimension is not None:
        lines.append(f"bdim {document.base_dimension}")
    if document.chain is not None:
        orders = " ".join(
            f"t{index}={format_order(order)}"
            for index, order in enumerate(document.chain.torsion, start=2)
        )
        lines.append(f"chain g={document.chain.genus} {orders}".rstrip())
    for polygon in document.polygons:
        lines.append(
            f"polygon {polygon.label}: " + " ".join(_format_point(v) for v in polygon.vertices)
        )
    for first, second in document.pairings:
        lines.append(f"pair {_format_half_edge(first)} {_format_half_edge(second)}")
    for circle in document.circles:
        lines.append(
            f"boundary {circle.name}: " + " ".join(_format_half_edge(h) for h in circle.edges)
        )
    for named in document.slits:
        slit = named.slit
        lines.append(
            f"slit {named.name} {slit.polygon}: "
            f"{_format_point(slit.start)} {_format_point(slit.end)}"
        )
    for plumbing in document.plumbings:
        suffix = f" twist {format_fraction(plumbing.twist)}" if plumbing.twist else ""
        lines.append(
            f"plumb {plumbing.alpha} {plumbing.beta} height "
            f"{format_fraction(plumbing.height)}{suffix}"
        )
    return "\n".join(lines) + "\n"
