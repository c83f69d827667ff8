"""Genus-three catalog: validation, case identification and classification."""

import pytest
import yaml

from twistcalc.const import CATALOG_PATH
from twistcalc.curve import Edge, Leg, StableCurve, Vertex
from twistcalc.divisor import Axiom, AxiomKind, DivisorClass, model_for
from twistcalc.exceptions import UnsupportedTopology, WrongGenus, WrongSignature
from twistcalc.genus3 import (
    Atom,
    CaseLabel,
    classify,
    identify_case,
    load_catalog,
    parse_atom,
    validate_catalog,
)
from twistcalc.typedefs import Truth


def make_catalog_data() -> dict:
    return yaml.safe_load(CATALOG_PATH.read_text(encoding="utf-8"))


def make_one_node(zero_on_elliptic: bool = True) -> StableCurve:
    home = "C1" if zero_on_elliptic else "C2"
    return StableCurve(
        (Vertex("C1", 1), Vertex("C2", 2)),
        (Edge("q", ("C1", "C2")),),
        (Leg("z", home, 4),),
    )


def make_banana() -> StableCurve:
    return StableCurve(
        (Vertex("X", 2), Vertex("R", 0)),
        (Edge("q1", ("X", "R")), Edge("q2", ("R", "X"))),
        (Leg("z", "R", 4),),
    )


def make_looped_rational() -> StableCurve:
    return StableCurve(
        (Vertex("C1", 0), Vertex("C2", 2)),
        (Edge("a", ("C1", "C1")), Edge("q", ("C1", "C2"))),
        (Leg("z", "C1", 4),),
    )


def weierstrass(curve: StableCurve, label: str, point: str):
    return model_for(curve, label, (Axiom(AxiomKind.WEIERSTRASS, points=(point,)),))


def test_shipped_catalog_is_valid():
    assert validate_catalog(make_catalog_data()) == []
    catalog = load_catalog()
    assert len(catalog) == 13
    assert set(catalog) == set(CaseLabel)


def test_missing_case_is_reported():
    data = make_catalog_data()
    del data["cases"]["IV"]
    assert validate_catalog(data) == ["case IV is missing"]


def test_unknown_role_and_symbol_are_reported():
    data = make_catalog_data()
    data["cases"]["I"]["hyp"] = {"all": ["C9: 2z ~ 2q", "C1: 2w ~ 2q"]}
    assert validate_catalog(data) == [
        "I/hyp: unknown role C9 in 'C9: 2z ~ 2q'",
        "I/hyp: w is not a symbol of C1",
    ]


def test_schema_errors_carry_their_path():
    data = make_catalog_data()
    data["cases"]["I"]["nodes"] = 3
    problems = validate_catalog(data)
    assert len(problems) == 1
    assert problems[0].startswith("cases/I/nodes:")


@pytest.mark.parametrize(
    ("text", "atom"),
    [
        ("C1: 2z !~ 2q", Atom("C1", AxiomKind.EQUIV, "2z", "2q", negated=True)),
        ("C: q' + q'' ~ 2z", Atom("C", AxiomKind.EQUIV, "q' + q''", "2z")),
        ("C: residue q1' q1''", Atom("C", AxiomKind.RESIDUE, points=("q1'", "q1''"))),
    ],
)
def test_parse_atom(text, atom):
    assert parse_atom(text) == atom


@pytest.mark.parametrize("text", ["2z ~ 2q", "C: conjugate p", "C: 2z"])
def test_parse_atom_rejects(text):
    with pytest.raises(ValueError):
        parse_atom(text)


def test_identify_one_node_cases():
    match = identify_case(make_one_node())
    assert match.label == CaseLabel.I
    assert match.roles == {"C1": "C1", "C2": "C2"}
    assert match.names == {"C1": {"q": "q", "z": "z"}, "C2": {"q": "q"}}
    assert identify_case(make_one_node(zero_on_elliptic=False)).label == CaseLabel.II
    looped = StableCurve((Vertex("C", 2),), (Edge("q", ("C", "C")),), (Leg("z", "C", 4),))
    match = identify_case(looped)
    assert match.label == CaseLabel.III
    assert match.names == {"C": {"z": "z", "q'": "q'", "q''": "q''"}}


def test_identify_two_node_cases():
    chain = StableCurve(
        (Vertex("R", 0), Vertex("E", 1), Vertex("X", 2)),
        (Edge("a", ("R", "E")), Edge("b", ("X", "R"))),
        (Leg("z", "R", 4),),
    )
    match = identify_case(chain)
    assert match.label == CaseLabel.IV
    assert match.roles == {"C0": "R", "C1": "E", "C2": "X"}
    assert identify_case(make_looped_rational()).label == CaseLabel.IX
    assert identify_case(make_banana()).label == CaseLabel.XII
    two_loops = StableCurve(
        (Vertex("C", 1),),
        (Edge("a", ("C", "C")), Edge("b", ("C", "C"))),
        (Leg("z", "C", 4),),
    )
    match = identify_case(two_loops)
    assert match.label == CaseLabel.XIII
    assert match.names["C"] == {
        "z": "z", "q1'": "a'", "q1''": "a''", "q2'": "b'", "q2''": "b''"
    }


@pytest.mark.parametrize(
    ("curve", "error"),
    [
        (StableCurve((Vertex("C", 2),), (), (Leg("z", "C", 2),)), WrongGenus),
        (
            StableCurve(
                (Vertex("C1", 1), Vertex("C2", 2)),
                (Edge("q", ("C1", "C2")),),
                (Leg("z1", "C1", 2), Leg("z2", "C2", 2)),
            ),
            WrongSignature,
        ),
        (
            StableCurve(
                (Vertex("C", 0),),
                tuple(Edge(name, ("C", "C")) for name in ("a", "b", "c")),
                (Leg("z", "C", 4),),
            ),
            UnsupportedTopology,
        ),
    ],
)
def test_identify_rejects(curve, error):
    with pytest.raises(error):
        identify_case(curve)


@pytest.mark.parametrize(
    ("torsion", "in_hyp", "in_odd"),
    [(2, Truth.TRUE, Truth.FALSE), (4, Truth.FALSE, Truth.TRUE)],
)
def test_classify_elliptic_tail_with_the_zero(torsion, in_hyp, in_odd):
    curve = make_one_node()
    models = {
        "C1": model_for(curve, "C1", torsion=(("z", "q", torsion),)),
        "C2": weierstrass(curve, "C2", "q"),
    }
    verdict = classify(curve, models)
    assert verdict.case == CaseLabel.I
    assert verdict.in_hyp is in_hyp
    assert verdict.in_odd is in_odd


def test_classify_case_iv_is_never_contained():
    chain = StableCurve(
        (Vertex("R", 0), Vertex("E", 1), Vertex("X", 2)),
        (Edge("a", ("R", "E")), Edge("b", ("R", "X"))),
        (Leg("z", "R", 4),),
    )
    verdict = classify(chain, {})
    assert (verdict.in_hyp, verdict.in_odd) == (Truth.FALSE, Truth.FALSE)


def test_classify_banana():
    curve = make_banana()
    models = {
        "X": model_for(
            curve,
            "X",
            (
                Axiom(AxiomKind.WEIERSTRASS, points=("q1",)),
                Axiom(
                    AxiomKind.NOT_EQUIV,
                    (DivisorClass.parse("X", "q1 + q2"), DivisorClass.parse("X", "K")),
                ),
            ),
        )
    }
    verdict = classify(curve, models)
    assert verdict.case == CaseLabel.XII
    assert verdict.in_hyp is Truth.FALSE
    assert verdict.in_odd is Truth.TRUE
    assert verdict.conditions_used[0] == "XII hyp"


def test_classify_nodal_component_through_its_group_model():
    curve = make_looped_rational()
    models = {
        "C1": model_for(curve, "C1", torsion=(("z", "q", 2),)),
        "C2": weierstrass(curve, "C2", "q"),
    }
    verdict = classify(curve, models)
    assert verdict.case == CaseLabel.IX
    assert verdict.in_hyp is Truth.TRUE
    assert verdict.in_odd is Truth.FALSE

    verdict = classify(curve, {"C2": models["C2"]})
    assert verdict.in_hyp is Truth.UNKNOWN
    assert "IX C1: 2z ~ 2q2: unknown, C1 needs the nodal group model" in (
        verdict.conditions_used
    )


T, F = Truth.TRUE, Truth.FALSE


def equiv(label: str, left: str, right: str, kind: AxiomKind = AxiomKind.EQUIV) -> Axiom:
    return Axiom(kind, (DivisorClass.parse(label, left), DivisorClass.parse(label, right)))


def not_equiv(label: str, left: str, right: str) -> Axiom:
    return equiv(label, left, right, AxiomKind.NOT_EQUIV)


def make_elliptic_chain(home: str) -> StableCurve:
    return StableCurve(
        (Vertex("C1", 1), Vertex("C2", 1), Vertex("C3", 1)),
        (Edge("q1", ("C1", "C2")), Edge("q2", ("C2", "C3"))),
        (Leg("z", home, 4),),
    )


def make_loop_and_link(looped_genus: int, other_genus: int, home: str) -> StableCurve:
    return StableCurve(
        (Vertex("C1", looped_genus), Vertex("C2", other_genus)),
        (Edge("q1", ("C1", "C1")), Edge("q2", ("C1", "C2"))),
        (Leg("z", home, 4),),
    )


def make_double_link(home_genus: int, other_genus: int) -> StableCurve:
    return StableCurve(
        (Vertex("C1", home_genus), Vertex("C2", other_genus)),
        (Edge("q1", ("C1", "C2")), Edge("q2", ("C1", "C2"))),
        (Leg("z", "C1", 4),),
    )


def make_case(label: str, variant: str):
    """Curve and models of one catalog row."""
    if label in ("I", "II"):
        curve = make_one_node(zero_on_elliptic=label == "I")
        if label == "I":
            order = {"hyp": 2, "odd": 4, "neither": 3}[variant]
            return curve, {
                "C1": model_for(curve, "C1", torsion=(("z", "q", order),)),
                "C2": weierstrass(curve, "C2", "q"),
            }
        axioms = {
            "hyp": (Axiom(AxiomKind.WEIERSTRASS, points=("z",)),),
            "odd": (equiv("C2", "4z", "2q + K"), not_equiv("C2", "2z", "K")),
        }[variant] + (Axiom(AxiomKind.WEIERSTRASS, points=("q",)),)
        return curve, {"C1": model_for(curve, "C1"), "C2": model_for(curve, "C2", axioms)}
    if label == "III":
        curve = StableCurve((Vertex("C", 2),), (Edge("q", ("C", "C")),), (Leg("z", "C", 4),))
        axioms = {
            "hyp": (
                Axiom(AxiomKind.WEIERSTRASS, points=("z",)),
                Axiom(AxiomKind.CONJUGATE, points=("q'", "q''")),
            ),
            "odd": (equiv("C", "4z", "K + q' + q''"), not_equiv("C", "2z", "K")),
        }[variant]
        return curve, {"C": model_for(curve, "C", axioms)}
    if label == "IV":
        curve = StableCurve(
            (Vertex("R", 0), Vertex("E", 1), Vertex("X", 2)),
            (Edge("a", ("R", "E")), Edge("b", ("R", "X"))),
            (Leg("z", "R", 4),),
        )
        return curve, {}
    if label == "V":
        curve = make_elliptic_chain("C1")
        first, second = {"hyp": (2, 2), "odd": (4, 2), "neither": (2, 3)}[variant]
        return curve, {
            "C1": model_for(curve, "C1", torsion=(("z", "q1", first),)),
            "C2": model_for(curve, "C2", torsion=(("q1", "q2", second),)),
        }
    if label == "VI":
        curve = make_elliptic_chain("C2")
        if variant == "odd":
            model = model_for(
                curve, "C2", (equiv("C2", "2z", "q1 + q2"),), (("z", "q1", 4),)
            )
        else:
            order = 2 if variant == "hyp" else 3
            model = model_for(curve, "C2", torsion=(("z", "q1", order), ("z", "q2", order)))
        return curve, {"C2": model}
    if label == "VII":
        curve = make_loop_and_link(1, 1, "C1")
        order, relation = {
            "hyp": (2, equiv("C1", "2q2", "q1' + q1''")),
            "odd": (4, equiv("C1", "4z", "2q2 + q1' + q1''")),
        }[variant]
        return curve, {"C1": model_for(curve, "C1", (relation,), (("z", "q2", order),))}
    if label == "VIII":
        curve = make_loop_and_link(1, 1, "C2")
        if variant == "neither":
            looped = model_for(
                curve, "C1", torsion=(("q1'", "q2", None), ("q1''", "q2", None))
            )
        else:
            looped = model_for(curve, "C1", (equiv("C1", "2q2", "q1' + q1''"),))
        order = 4 if variant == "odd" else 2
        return curve, {
            "C1": looped,
            "C2": model_for(curve, "C2", torsion=(("z", "q2", order),)),
        }
    if label == "IX":
        curve = make_looped_rational()
        order = {"hyp": 2, "odd": 4}[variant]
        return curve, {
            "C1": model_for(curve, "C1", torsion=(("z", "q", order),)),
            "C2": weierstrass(curve, "C2", "q"),
        }
    if label == "X":
        curve = make_loop_and_link(0, 2, "C2")
        axioms = {
            "hyp": (Axiom(AxiomKind.WEIERSTRASS, points=("z",)),),
            "odd": (equiv("C2", "4z", "2q2 + K"), not_equiv("C2", "2z", "K")),
        }[variant] + (Axiom(AxiomKind.WEIERSTRASS, points=("q2",)),)
        return curve, {"C2": model_for(curve, "C2", axioms)}
    if label == "XI":
        curve = make_double_link(1, 1)
        relation = {
            "hyp": equiv("C1", "2z", "q1 + q2"),
            "odd": equiv("C1", "4z", "2q1 + 2q2"),
        }[variant]
        return curve, {"C1": model_for(curve, "C1", (relation,))}
    if label == "XII":
        curve = make_double_link(0, 2)
        axioms = {
            "both": (Axiom(AxiomKind.CONJUGATE, points=("q1", "q2")),),
            "odd": (
                Axiom(AxiomKind.WEIERSTRASS, points=("q1",)),
                not_equiv("C2", "q1 + q2", "K"),
            ),
            "neither": (
                not_equiv("C2", "q1 + q2", "K"),
                not_equiv("C2", "2q1", "K"),
                not_equiv("C2", "2q2", "K"),
            ),
        }[variant]
        return curve, {"C2": model_for(curve, "C2", axioms)}
    curve = StableCurve(
        (Vertex("C", 1),),
        (Edge("q1", ("C", "C")), Edge("q2", ("C", "C"))),
        (Leg("z", "C", 4),),
    )
    axioms = {
        "hyp": (equiv("C", "q1' + q1''", "2z"), equiv("C", "q2' + q2''", "2z")),
        "odd": (
            equiv("C", "4z", "q1' + q1'' + q2' + q2''"),
            Axiom(AxiomKind.RESIDUE, points=("q1'", "q1''")),
            Axiom(AxiomKind.RESIDUE, points=("q2'", "q2''")),
        ),
    }[variant]
    return curve, {"C": model_for(curve, "C", axioms)}


CATALOG_ROWS = [
    ("I", "hyp", T, F),
    ("I", "odd", F, T),
    ("I", "neither", F, F),
    ("II", "hyp", T, F),
    ("II", "odd", F, T),
    ("III", "hyp", T, F),
    ("III", "odd", F, T),
    ("IV", "neither", F, F),
    ("V", "hyp", T, F),
    ("V", "odd", F, T),
    ("V", "neither", F, F),
    ("VI", "hyp", T, F),
    ("VI", "odd", F, T),
    ("VI", "neither", F, F),
    ("VII", "hyp", T, F),
    ("VII", "odd", F, T),
    ("VIII", "hyp", T, F),
    ("VIII", "odd", F, T),
    ("VIII", "neither", F, F),
    ("IX", "hyp", T, F),
    ("IX", "odd", F, T),
    ("X", "hyp", T, F),
    ("X", "odd", F, T),
    ("XI", "hyp", T, F),
    ("XI", "odd", F, T),
    ("XII", "both", T, T),
    ("XII", "odd", F, T),
    ("XII", "neither", F, F),
    ("XIII", "hyp", T, F),
    ("XIII", "odd", F, T),
]


@pytest.mark.parametrize(("label", "variant", "in_hyp", "in_odd"), CATALOG_ROWS)
def test_catalog_rows(label, variant, in_hyp, in_odd):
    curve, models = make_case(label, variant)
    verdict = classify(curve, models)
    assert verdict.case == CaseLabel(label)
    assert (verdict.in_hyp, verdict.in_odd) == (in_hyp, in_odd), verdict.conditions_used
    if verdict.in_hyp is T and verdict.in_odd is T:
        # only a conjugate pair of nodes on the genus-two side lies in both
        assert verdict.case == CaseLabel.XII


def test_catalog_rows_cover_every_case():
    assert {CaseLabel(row[0]) for row in CATALOG_ROWS} == set(CaseLabel)
    for label in CaseLabel:
        rows = [row for row in CATALOG_ROWS if row[0] == label]
        assert any(row[2] is F for row in rows)
        if label != CaseLabel.IV:
            assert any(row[2] is T for row in rows)
    assert [row[:2] for row in CATALOG_ROWS if row[2] is T and row[3] is T] == [
        ("XII", "both")
    ]
