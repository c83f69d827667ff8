"""Divisor arithmetic and the three component models."""

import pytest

from twistcalc.curve import Edge, Leg, StableCurve, Vertex
from twistcalc.divisor import (
    AxiomaticModel,
    Axiom,
    AxiomKind,
    DivisorClass,
    EllipticModel,
    RationalModel,
    dualizing_class,
    h0,
    is_effective,
    linear_equiv,
    model_for,
)
from twistcalc.exceptions import (
    InconsistentTorsion,
    InvalidAxiom,
    MixedComponents,
    ModelMismatch,
    UnknownPoint,
)
from twistcalc.typedefs import Truth


def make_genus_two_model(*extra: Axiom) -> AxiomaticModel:
    """q1 is a Weierstrass point and q1 + q2 is not canonical."""
    axioms = (
        Axiom(AxiomKind.WEIERSTRASS, points=("q1",)),
        Axiom(
            AxiomKind.NOT_EQUIV,
            (DivisorClass.parse("X", "q1 + q2"), DivisorClass.parse("X", "K")),
        ),
    ) + extra
    return AxiomaticModel("X", ("q1", "q2"), axioms, 2)


def make_looped_curve() -> StableCurve:
    return StableCurve(
        (Vertex("C1", 0), Vertex("C2", 2)),
        (Edge("a", ("C1", "C1")), Edge("q", ("C1", "C2"))),
        (Leg("z", "C1", 4),),
    )


def test_parse_and_print():
    divisor = DivisorClass.parse("X", "4z - 2q1' + K")
    assert divisor.as_dict() == {"q1'": -2, "z": 4}
    assert divisor.canonical == 1
    assert str(divisor) == "-2q1' + 4z + K"
    assert DivisorClass.parse("X", str(divisor)) == divisor
    assert str(DivisorClass.parse("X", "0")) == "0"
    assert DivisorClass.parse("X", "z - z").coefficients == ()
    assert DivisorClass.parse("X", "2q1 - K").degree(2) == 0


@pytest.mark.parametrize("text", ["", "2z 3q", "z + ", "3"])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        DivisorClass.parse("X", text)


def test_arithmetic():
    first = DivisorClass.of("X", {"a": 1, "b": 2})
    second = DivisorClass.of("X", {"b": 2}, canonical=1)
    assert (first - second) == DivisorClass.of("X", {"a": 1}, canonical=-1)
    assert (first + second).coefficient("b") == 4
    assert (-first).formally_effective is False
    assert first.scaled(0).coefficients == ()
    assert first.renamed({"a": "b"}) == DivisorClass.of("X", {"b": 3})
    with pytest.raises(MixedComponents):
        first + DivisorClass.of("Y", {"a": 1})


def test_rational_model():
    model = RationalModel("R", ("z", "q1", "q2"))
    relation = model.divisor("4z - 4q1 - 2q2")
    assert linear_equiv(model, relation, model.canonical()) is Truth.TRUE
    assert model.is_trivial(model.divisor("z - q1")) is Truth.TRUE
    assert is_effective(model, model.divisor("z - q1 - q2")) is Truth.FALSE
    assert h0(model, model.divisor("2z")) == 3
    assert h0(model, model.divisor("-z")) == 0
    with pytest.raises(UnknownPoint):
        model.divisor("w")
    with pytest.raises(MixedComponents):
        model.is_trivial(DivisorClass.of("X", {"z": 1}))


def test_elliptic_model_with_torsion():
    model = EllipticModel.from_torsion("E", ("z", "q"), [("z", "q", 4)])
    assert model.is_trivial(model.divisor("4z - 4q")) is Truth.TRUE
    assert model.is_trivial(model.divisor("2z - 2q")) is Truth.FALSE
    # K is trivial on a genus-one curve
    assert model.linear_equiv(model.divisor("4z - 4q"), model.canonical()) is Truth.TRUE
    assert model.is_effective(model.divisor("z - q")) is Truth.FALSE
    assert model.h0(model.divisor("z - q")) == 0
    assert model.h0(model.divisor("2z")) == 2
    assert model.h0(model.divisor("z - 2q")) == 0


def test_elliptic_model_leaves_undeclared_differences_open():
    model = EllipticModel.from_torsion("E", ("a", "b", "c"), [("a", "b", 2)])
    assert model.is_trivial(model.divisor("2a - 2b")) is Truth.TRUE
    assert model.is_trivial(model.divisor("a - c")) is Truth.UNKNOWN
    assert model.h0(model.divisor("a - c")) is None
    infinite = EllipticModel.from_torsion("E", ("a", "b"), [("a", "b", None)])
    assert infinite.is_trivial(infinite.divisor("6a - 6b")) is Truth.FALSE


@pytest.mark.parametrize(
    "declarations",
    [
        [("a", "b", 1)],
        [("a", "b", 2), ("b", "a", 3)],
    ],
)
def test_inconsistent_torsion(declarations):
    with pytest.raises(InconsistentTorsion):
        EllipticModel.from_torsion("E", ("a", "b"), declarations)


def test_torsion_on_unknown_point():
    with pytest.raises(UnknownPoint):
        EllipticModel.from_torsion("E", ("a",), [("a", "x", 2)])


def test_axiomatic_linear_equivalence():
    model = make_genus_two_model()
    canonical = model.canonical()
    assert model.linear_equiv(model.divisor("2q1"), canonical) is Truth.TRUE
    assert model.linear_equiv(model.divisor("q1 + q2"), canonical) is Truth.FALSE
    assert model.linear_equiv(model.divisor("2q2"), canonical) is Truth.UNKNOWN
    # q1 ~ q2 would make q1 + q2 ~ 2q1 ~ K
    assert model.is_trivial(model.divisor("q1 - q2")) is Truth.FALSE
    assert model.linear_equiv(model.divisor("q1"), canonical) is Truth.FALSE


def test_axiomatic_facts():
    model = make_genus_two_model()
    assert model.holds(AxiomKind.WEIERSTRASS, ("q1",)) is Truth.TRUE
    assert model.holds(AxiomKind.WEIERSTRASS, ("q2",)) is Truth.UNKNOWN
    assert model.holds(AxiomKind.CONJUGATE, ("q2", "q1")) is Truth.FALSE
    assert model.holds(AxiomKind.RESIDUE, ("q1", "q2")) is Truth.UNKNOWN
    with pytest.raises(UnknownPoint):
        model.holds(AxiomKind.WEIERSTRASS, ("w",))


def test_axiomatic_effectivity():
    model = make_genus_two_model()
    assert model.is_effective(model.divisor("q1")) is Truth.TRUE
    assert model.is_effective(model.divisor("K - q1")) is Truth.TRUE
    assert model.is_effective(model.divisor("2q2 - q1")) is Truth.UNKNOWN
    assert model.is_effective(model.divisor("-q1")) is Truth.FALSE
    assert model.is_effective(model.divisor("3q2 - q1")) is Truth.TRUE
    declared = make_genus_two_model(
        Axiom(AxiomKind.NOT_EFFECTIVE, (DivisorClass.parse("X", "2q2 - q1"),))
    )
    assert declared.is_effective(declared.divisor("2q2 - q1")) is Truth.FALSE


@pytest.mark.parametrize(
    ("text", "expected"),
    [
        ("K", 2),
        ("2q1", 2),
        ("q1 + q2", 1),
        ("2q2", None),
        ("3q1", 2),
        ("q1", 1),
        ("-q1", 0),
        ("0", 1),
    ],
)
def test_axiomatic_h0(text, expected):
    model = make_genus_two_model()
    assert model.h0(model.divisor(text)) == expected


def test_declared_h0_wins():
    model = make_genus_two_model(
        Axiom(AxiomKind.H0, (DivisorClass.parse("X", "2q2"),), value=1)
    )
    assert model.h0(model.divisor("2q2")) == 1
    assert model.declared_h0(DivisorClass.parse("X", "2q2")) == 1
    assert model.declared_h0(DivisorClass.parse("X", "2q1")) is None


def test_axiom_with_mismatched_degrees():
    with pytest.raises(InvalidAxiom):
        AxiomaticModel(
            "X",
            ("q1",),
            (Axiom(AxiomKind.EQUIV, (DivisorClass.parse("X", "q1"), DivisorClass.parse("X", "K"))),),
            2,
        )


def test_model_for_picks_the_model():
    curve = StableCurve(
        (Vertex("X", 2), Vertex("R", 0)),
        (Edge("q1", ("X", "R")), Edge("q2", ("R", "X"))),
        (Leg("z", "R", 4),),
    )
    assert isinstance(model_for(curve, "R"), RationalModel)
    model = model_for(curve, "X", search_bound=3)
    assert isinstance(model, AxiomaticModel)
    assert model.points == ("q1", "q2")
    assert model.search_bound == 3
    with pytest.raises(ModelMismatch):
        model_for(curve, "R", torsion=(("z", "q1", 2),))


def test_model_for_nodal_rational_component():
    curve = make_looped_curve()
    model = model_for(curve, "C1", torsion=(("z", "q", 2),))
    assert isinstance(model, EllipticModel)
    assert model.points == ("z", "q")
    assert dualizing_class(curve, "C1", model) == model.canonical()
    assert model.is_trivial(model.divisor("2z - 2q")) is Truth.TRUE


def test_model_for_takes_relations_on_elliptic_components():
    curve = StableCurve(
        (Vertex("E", 1), Vertex("X", 2)),
        (Edge("q", ("E", "X")),),
        (Leg("z", "E", 4),),
    )
    relation = Axiom(
        AxiomKind.EQUIV, (DivisorClass.parse("E", "2z"), DivisorClass.parse("E", "2q"))
    )
    model = model_for(curve, "E", axioms=(relation,))
    assert isinstance(model, EllipticModel)
    assert model.is_trivial(model.divisor("2z - 2q")) is Truth.TRUE
    assert model.is_trivial(model.divisor("z - q")) is Truth.FALSE
    with pytest.raises(InconsistentTorsion):
        model_for(curve, "E", torsion=(("z", "q", 4),), axioms=(relation,))
    with pytest.raises(InconsistentTorsion):
        model_for(
            curve,
            "E",
            axioms=(
                Axiom(
                    AxiomKind.EQUIV,
                    (DivisorClass.parse("E", "z"), DivisorClass.parse("E", "q")),
                ),
            ),
        )
    with pytest.raises(InvalidAxiom):
        model_for(
            curve,
            "E",
            axioms=(
                Axiom(
                    AxiomKind.NOT_EQUIV,
                    (DivisorClass.parse("E", "z"), DivisorClass.parse("E", "q")),
                ),
            ),
        )


def test_sum_relation_on_an_elliptic_component():
    # 2q2 ~ q1' + q1'' with z - q2 of order 2
    curve = StableCurve(
        (Vertex("C1", 1), Vertex("C2", 1)),
        (Edge("q1", ("C1", "C1")), Edge("q2", ("C1", "C2"))),
        (Leg("z", "C1", 4),),
    )
    relation = Axiom(
        AxiomKind.EQUIV,
        (DivisorClass.parse("C1", "2q2"), DivisorClass.parse("C1", "q1' + q1''")),
    )
    model = model_for(curve, "C1", (relation,), (("z", "q2", 2),))
    assert model.is_trivial(model.divisor("4z - 2q2 - q1' - q1''")) is Truth.TRUE
    assert model.is_trivial(model.divisor("q1' - q1''")) is Truth.FALSE
    assert model.is_trivial(model.divisor("z - q1'")) is Truth.FALSE


def test_dualizing_class_on_the_normalization():
    curve = StableCurve(
        (Vertex("C", 2),), (Edge("q", ("C", "C")),), (Leg("z", "C", 4),)
    )
    model = model_for(curve, "C")
    assert str(dualizing_class(curve, "C", model)) == "q' + q'' + K"
    with pytest.raises(ModelMismatch):
        dualizing_class(curve, "C", RationalModel("C", curve.marked_points("C")))
