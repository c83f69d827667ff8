"""Document parsing, cross-checks and canonical formatting."""

from fractions import Fraction
from pathlib import Path

import pytest

from twistcalc.curve import Edge, Leg, Vertex, insert_rational_chain
from twistcalc.divisor import AxiomaticModel, AxiomKind, EllipticModel, RationalModel
from twistcalc.document import format_document, parse
from twistcalc.exceptions import ParseErrors
from twistcalc.flat import point
from twistcalc.strata import Signature
from twistcalc.typedefs import Truth
from twistcalc.weierstrass import ChainInput

FIXTURES = Path(__file__).parent / "fixtures"


def read_fixture(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


def parse_issues(text: str) -> list[str]:
    with pytest.raises(ParseErrors) as info:
        parse(text)
    return [str(issue) for issue in info.value.issues]


def test_parse_banana():
    document = parse(read_fixture("banana.twc"))
    assert document.signature == Signature.of(4)
    assert document.vertices == (Vertex("X", 2), Vertex("R", 0))
    assert document.edges == (Edge("q1", ("X", "R")), Edge("q2", ("R", "X")))
    assert document.legs == (Leg("z", "R", 4),)
    assert [a.axiom.kind for a in document.axioms] == [
        AxiomKind.WEIERSTRASS,
        AxiomKind.NOT_EQUIV,
    ]
    models = document.models()
    assert isinstance(models["X"], AxiomaticModel)
    assert isinstance(models["R"], RationalModel)
    assert models["X"].holds(AxiomKind.WEIERSTRASS, ("q1",)) is Truth.TRUE


def test_parse_torsion_and_search_bound():
    document = parse(read_fixture("elliptic_tail.twc"))
    (torsion,) = document.torsion
    assert (torsion.vertex, torsion.first, torsion.second, torsion.order) == (
        "C1",
        "z1",
        "q",
        2,
    )
    models = document.models(search_bound=4)
    assert isinstance(models["C1"], EllipticModel)
    assert models["C2"].search_bound == 4


def test_inserted_chains_are_part_of_the_curve():
    document = parse(read_fixture("banana.twc") + "insert q2 length 2\n")
    base = parse(read_fixture("banana.twc")).curve()
    assert document.inserts == (("q2", 2),)
    assert document.curve() == insert_rational_chain(base, "q2", 2)


def test_parse_surface():
    document = parse(read_fixture("twice_holed_torus.twc"))
    assert document.has_surface
    assert not document.has_curve
    assert [p.label for p in document.polygons] == ["B0", "T0", "Z1", "Z2"]
    assert document.polygons[0].vertices[2] == point(1, Fraction(1, 2))
    assert document.pairings[0] == (("B0", 0), ("T0", 3))
    assert [c.name for c in document.circles] == ["alpha", "beta"]
    (plumbing,) = document.plumbings
    assert (plumbing.alpha, plumbing.beta, plumbing.height) == ("alpha", "beta", 1)
    slits = parse(read_fixture("slit_torus.twc")).slits
    assert [named.name for named in slits] == ["low", "high"]
    assert slits[1].slit.start == point(Fraction(1, 4), Fraction(3, 4))


def test_parse_chain():
    assert parse("chain g=3 t2=inf t3=4").chain == ChainInput(3, (None, 4))
    assert parse(read_fixture("elliptic_chain.twc")).chain == ChainInput(3, (2, 2))


@pytest.mark.parametrize(
    "name",
    [
        "banana.twc",
        "elliptic_tail.twc",
        "elliptic_chain.twc",
        "twice_holed_torus.twc",
        "slit_torus.twc",
    ],
)
def test_format_round_trip(name):
    document = parse(read_fixture(name))
    text = format_document(document)
    assert parse(text) == document
    assert format_document(parse(text)) == text


def test_round_trip_keeps_negated_facts_and_h0():
    text = (
        "vertex C genus 2\n"
        "edge q C C\n"
        "leg z C order 4\n"
        "axiom C: notconjugate q' q''\n"
        "axiom C: residue q\n"
        "axiom C: h0 2z = 1\n"
        "axiom C: noteffective 2z - q'\n"
    )
    document = parse(text)
    axioms = [declaration.axiom for declaration in document.axioms]
    assert axioms[0].negated
    assert axioms[1].points == ("q'", "q''")
    assert axioms[2].value == 1
    assert parse(format_document(document)) == document


def test_comments_and_blank_lines():
    text = "# header\n\nvertex X genus 2   # big one\nvertex q2#1 genus 0 exceptional\n"
    document = parse(text)
    assert document.vertices == (Vertex("X", 2), Vertex("q2#1", 0, exceptional=True))


def test_duplicate_vertex():
    assert parse_issues("vertex X genus 2\nvertex X genus 2\n") == [
        "line 2, column 8: duplicate vertex 'X' (first declared on line 1)"
    ]


def test_unknown_vertex_in_leg():
    assert parse_issues("vertex X genus 2\nleg z Y order 4\n") == [
        "line 2, column 7: leg z references unknown vertex 'Y'"
    ]


def test_issues_are_collected_and_sorted():
    text = "vertex X genus\nfrobnicate 3\nvertex X genus 2\nedge q X W\n"
    assert parse_issues(text) == [
        "line 1, column 1: malformed vertex declaration",
        "line 2, column 1: unknown keyword 'frobnicate'",
        "line 4, column 10: edge q references unknown vertex 'W'",
    ]


def test_signature_must_match_the_legs():
    text = "signature 2 2\nvertex X genus 3\nleg z X order 4\n"
    assert parse_issues(text) == [
        "line 3, column 1: leg orders (4) do not match the signature (2, 2)"
    ]


@pytest.mark.parametrize(
    ("line", "message"),
    [
        ("axiom X: weierstrass w", "'w' is not a marked point of X"),
        ("axiom X: frob q1", "unknown axiom kind 'frob'"),
        ("axiom X: notweierstrass q1 q2", "notweierstrass takes 1 point(s)"),
        ("axiom X: equiv 2q1", "equiv needs D1 ~ D2"),
        ("axiom Y: weierstrass q1", "axiom on unknown vertex 'Y'"),
    ],
)
def test_axiom_errors(line, message):
    text = read_fixture("banana.twc") + line + "\n"
    (issue,) = parse_issues(text)
    assert issue.endswith(message)


@pytest.mark.parametrize(
    ("text", "message"),
    [
        ("chain g=3 t2=2", "chain of genus 3 needs exactly t2..t3, got t2"),
        ("chain g=3 t2=2 t2=3 t3=1", "t2 given twice"),
        ("polygon P: 0,0 1,0 0.5,1", "'0.5,1' is not x,y"),
        ("polygon P: 0,0 1,0 1,1 0,1\npair P.0 P.7", "no edge P.7"),
        ("plumb a b height 1", "unknown boundary circle 'a'"),
    ],
)
def test_other_errors(text, message):
    issues = parse_issues(text + "\n")
    assert issues[0].endswith(message)
