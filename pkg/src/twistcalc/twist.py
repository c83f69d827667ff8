"""Twists, polarity, twisted canonical relations and smoothability verdicts.

Sign convention: with b solving L(C) b = M - deg(omega_C restricted to each
vertex), the bundle twist at the end of an edge on vertex i (other end on k)
is b_k - b_i + 1, and the coefficient of the node in the relation on C_i is
its negative s_ij = b_i - b_k - 1. Constant b gives s = -1 on both sides:
the dualizing sheaf has simple poles at every node.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Mapping
from dataclasses import dataclass, field

import networkx as nx

from .const import (
    DEFAULT_SEMISTABLE_SEARCH_LENGTH,
    CurveKind,
    Criterion,
    Polarity,
    Smoothable,
    Status,
)
from .curve import StableCurve, classify_type, insert_rational_chain, laplacian
from .divisor import (
    AxiomKind,
    ComponentModel,
    DivisorClass,
    RationalModel,
    dualizing_class,
)
from .exceptions import (
    InvalidGenus,
    NoIntegralTwist,
    NotPseudocompact,
    SignatureMismatch,
    TailMinusOne,
)
from .lattice import solve_integral
from .strata import Signature
from .typedefs import HalfEdge, IntVector, Truth

_LOGGER = logging.getLogger(__name__)

Models = Mapping[str, ComponentModel]


@dataclass(frozen=True)
class TwistAssignment:
    vertices: tuple[str, ...]
    b: IntVector
    twists: tuple[tuple[HalfEdge, int], ...]
    leg_sums: IntVector

    def s(self, half_edge: HalfEdge) -> int:
        return dict(self.twists)[half_edge]

    def coefficient(self, label: str) -> int:
        return self.b[self.vertices.index(label)]

    def M(self, label: str) -> int:
        return self.leg_sums[self.vertices.index(label)]

    def N(self, label: str) -> int | None:
        total = self.M(label)
        return total // 2 if total % 2 == 0 else None


@dataclass(frozen=True)
class TwistedCanonicalCheck:
    twist: TwistAssignment
    polarity: dict[str, Polarity]
    relations: dict[str, tuple[DivisorClass, DivisorClass]]
    truths: dict[str, Truth]

    @property
    def status(self) -> Status:
        values = tuple(self.truths.values())
        if Truth.FALSE in values:
            return Status.NOT_TWISTED_CANONICAL
        if Truth.UNKNOWN in values:
            return Status.UNDECIDED
        return Status.TWISTED_CANONICAL


@dataclass(frozen=True)
class Verdict:
    status: Status
    smoothable: Smoothable
    criterion: Criterion | None = None
    reasons: tuple[str, ...] = field(default=())


def signature_of(curve: StableCurve) -> Signature:
    return Signature(tuple(leg.order for leg in curve.legs))


def _check_signature(curve: StableCurve, signature: Signature | None) -> None:
    total = sum(leg.order for leg in curve.legs)
    if total != 2 * curve.genus - 2:
        raise SignatureMismatch(
            f"leg orders sum to {total}, genus {curve.genus} needs {2 * curve.genus - 2}"
        )
    if signature is not None and signature.orders != signature_of(curve).orders:
        raise SignatureMismatch(
            f"signature {signature} does not match the leg orders {signature_of(curve)}"
        )


def deficit(curve: StableCurve) -> IntVector:
    """M_i minus the degree of the dualizing sheaf on each vertex."""
    return tuple(
        curve.leg_order_sum(label)
        - (2 * curve.vertex(label).genus - 2 + curve.valence(label))
        for label in curve.labels
    )


def solve_laplacian(curve: StableCurve, rhs: IntVector) -> IntVector:
    """Integral b with L(C) b = rhs, normalized so min b = 0."""
    solution = solve_integral(laplacian(curve), rhs)
    if solution.particular is None:
        raise NoIntegralTwist(f"L(C) b = {rhs} has no integral solution")
    low = min(solution.particular)
    return tuple(value - low for value in solution.particular)


def half_edge_twists(curve: StableCurve, b: IntVector) -> tuple[tuple[HalfEdge, int], ...]:
    twists: list[tuple[HalfEdge, int]] = []
    for edge in curve.edges:
        if edge.is_loop:
            continue
        for side in (0, 1):
            here = b[curve.index(edge.ends[side])]
            there = b[curve.index(edge.other(side))]
            twists.append(((edge.label, side), here - there - 1))
    return tuple(twists)


def solve_twist(curve: StableCurve, signature: Signature | None = None) -> TwistAssignment:
    _check_signature(curve, signature)
    rhs = deficit(curve)
    b = solve_laplacian(curve, rhs)
    twist = TwistAssignment(
        curve.labels,
        b,
        half_edge_twists(curve, b),
        tuple(curve.leg_order_sum(label) for label in curve.labels),
    )
    if _LOGGER.isEnabledFor(logging.DEBUG):
        _LOGGER.debug("Deficit %s, twist coefficients %s", rhs, b)
        for half_edge, value in twist.twists:
            _LOGGER.debug("s at %s = %s", half_edge, value)
    return twist


def _pole_free_side(curve: StableCurve, edge_label: str, side: int) -> bool:
    graph = curve.graph()
    edge = curve.edge(edge_label)
    graph.remove_edge(edge.ends[0], edge.ends[1], key=edge_label)
    component = nx.node_connected_component(graph, edge.ends[side])
    return all(leg.order >= 0 for leg in curve.legs if leg.vertex in component)


def classify_polarity(curve: StableCurve, twist: TwistAssignment) -> dict[str, Polarity]:
    bridges = classify_type(curve).bridges
    polarity: dict[str, Polarity] = {}
    for half_edge, value in twist.twists:
        label, side = half_edge
        if value == -1 and label in bridges and _pole_free_side(curve, label, side):
            raise TailMinusOne(
                f"twist -1 at the separating node {label} on {curve.edge(label).ends[side]}"
            )
    for label in curve.labels:
        negative_twist = any(
            twist.s(half_edge) < 0 for half_edge in curve.separating_half_edges(label)
        )
        negative_leg = any(leg.order < 0 for leg in curve.legs_at(label))
        polarity[label] = (
            Polarity.POLAR if negative_twist or negative_leg else Polarity.HOLOMORPHIC
        )
    _LOGGER.debug("Polarity: %s", {k: str(v) for k, v in polarity.items()})
    return polarity


def _model(curve: StableCurve, models: Models, label: str) -> ComponentModel:
    if label in models:
        return models[label]
    if curve.vertex(label).genus == 0:
        return RationalModel(label, curve.marked_points(label))
    raise KeyError(f"no model for vertex {label}")


def relation(
    curve: StableCurve, twist: TwistAssignment, model: ComponentModel, label: str
) -> tuple[DivisorClass, DivisorClass]:
    """Both sides of sum m_j z_j + sum s_ij q_j ~ K on the vertex."""
    coefficients: dict[str, int] = {}
    for leg in curve.legs_at(label):
        coefficients[leg.label] = coefficients.get(leg.label, 0) + leg.order
    for half_edge in curve.separating_half_edges(label):
        point = curve.point_of(half_edge)
        coefficients[point] = coefficients.get(point, 0) + twist.s(half_edge)
    return DivisorClass.of(label, coefficients), dualizing_class(curve, label, model)


def _evaluate(
    curve: StableCurve, twist: TwistAssignment, models: Models
) -> tuple[dict[str, tuple[DivisorClass, DivisorClass]], dict[str, Truth]]:
    relations: dict[str, tuple[DivisorClass, DivisorClass]] = {}
    truths: dict[str, Truth] = {}
    for label in curve.labels:
        model = _model(curve, models, label)
        left, right = relation(curve, twist, model, label)
        relations[label] = (left, right)
        truths[label] = model.linear_equiv(left, right)
        _LOGGER.debug("%s: %s ~ %s is %s", label, left, right, truths[label].value)
    return relations, truths


def check_twisted_canonical(
    curve: StableCurve, models: Models, signature: Signature | None = None
) -> TwistedCanonicalCheck:
    if classify_type(curve).kind == CurveKind.NON_PSEUDOCOMPACT:
        raise NotPseudocompact("twisted canonical relations need separating nodes")
    twist = solve_twist(curve, signature)
    polarity = classify_polarity(curve, twist)
    relations, truths = _evaluate(curve, twist, models)
    return TwistedCanonicalCheck(twist, polarity, relations, truths)


def regular_smoothing_condition(curve: StableCurve, models: Models) -> dict[str, Truth]:
    """Relations every regular smoothing family of this (semistable) model forces."""
    twist = solve_twist(curve)
    _, truths = _evaluate(curve, twist, models)
    return truths


def semistable_search(
    curve: StableCurve,
    models: Models,
    max_length: int = DEFAULT_SEMISTABLE_SEARCH_LENGTH,
) -> tuple[dict[str, int], StableCurve] | None:
    """First chain-length assignment at the non-separating nodes whose
    regular smoothing relations are not refuted."""
    ctype = classify_type(curve)
    candidates = [
        edge.label
        for edge in curve.edges
        if not edge.is_loop and edge.label not in ctype.bridges
    ]
    for lengths in itertools.product(range(max_length + 1), repeat=len(candidates)):
        model_curve = curve
        for label, length in zip(candidates, lengths):
            model_curve = insert_rational_chain(model_curve, label, length)
        try:
            truths = regular_smoothing_condition(model_curve, models)
        except NoIntegralTwist:
            continue
        if Truth.FALSE not in truths.values():
            assignment = dict(zip(candidates, lengths))
            _LOGGER.debug("Semistable model with chains %s passes", assignment)
            return assignment, model_curve
    return None


def dimension_bound(base_dimension: int, genus: int, refined: bool = False) -> int:
    if genus < 0:
        raise InvalidGenus(f"genus {genus} is negative")
    if refined:
        if genus < 1:
            raise InvalidGenus("the refined bound needs genus at least 1")
        return base_dimension - (genus - 1)
    return base_dimension - genus


def refined_bound_applies(curve: StableCurve, models: Models) -> Truth | None:
    """On a one-node compact curve, whether h0((2g_i - 2 - M_i) q) = 1 on the
    holomorphic side; None when the curve has another shape."""
    ctype = classify_type(curve)
    if ctype.kind != CurveKind.COMPACT or len(curve.edges) != 1:
        return None
    twist = solve_twist(curve)
    (edge,) = curve.edges
    for side in (0, 1):
        label = edge.ends[side]
        value = twist.s((edge.label, side))
        if value >= 0:
            model = _model(curve, models, label)
            point = edge.point_names[side]
            dimension = model.h0(DivisorClass.of(label, {point: value}))
            return Truth.UNKNOWN if dimension is None else Truth.of(dimension == 1)
    return Truth.FALSE


def _genus_two_bridge(curve: StableCurve) -> str | None:
    """The rational bridge of the two genus-two configurations, if this is one."""
    if curve.genus != 2 or len(curve.vertices) != 3 or len(curve.edges) != 2:
        return None
    rational = [v for v in curve.vertices if v.genus == 0 and not v.exceptional]
    elliptic = [v for v in curve.vertices if v.genus == 1]
    if len(rational) != 1 or len(elliptic) != 2:
        return None
    bridge = rational[0].label
    if any(leg.vertex != bridge for leg in curve.legs):
        return None
    for vertex in elliptic:
        ends = [e for e in curve.edges if vertex.label in e.ends]
        if len(ends) != 1 or set(ends[0].ends) != {vertex.label, bridge}:
            return None
    if sorted(leg.order for leg in curve.legs) not in ([2], [1, 1]):
        return None
    return bridge


def _false_reasons(check: TwistedCanonicalCheck) -> tuple[str, ...]:
    return tuple(
        f"{label}: {left} ~ {right} fails"
        for label, (left, right) in check.relations.items()
        if check.truths[label] is Truth.FALSE
    )


def _unknown_reasons(check: TwistedCanonicalCheck) -> tuple[str, ...]:
    return tuple(
        f"{label}: {left} ~ {right} is undecided"
        for label, (left, right) in check.relations.items()
        if check.truths[label] is Truth.UNKNOWN
    )


def _catalog_verdict(curve: StableCurve, models: Models, status: Status) -> Verdict | None:
    from . import genus3  # pylint: disable=import-outside-toplevel

    if not genus3.applies(curve):
        return None
    result = genus3.classify(curve, models)
    contained = result.in_hyp | result.in_odd
    reasons = tuple(result.conditions_used)
    if contained is Truth.TRUE:
        return Verdict(status, Smoothable.YES, Criterion.CATALOG, reasons)
    if contained is Truth.FALSE:
        return Verdict(status, Smoothable.NO, Criterion.CATALOG, reasons)
    return None


def smoothability_verdict(
    curve: StableCurve, models: Models, signature: Signature | None = None
) -> Verdict:
    _check_signature(curve, signature)
    ctype = classify_type(curve)
    if ctype.kind == CurveKind.NON_PSEUDOCOMPACT:
        status = Status.UNDECIDED
        catalog = _catalog_verdict(curve, models, status)
        if catalog is not None:
            return catalog
        reasons: list[str] = ["nodes that are neither separating nor self-nodes"]
        try:
            truths = regular_smoothing_condition(curve, models)
        except NoIntegralTwist:
            truths = {}
        refuted = sorted(label for label, truth in truths.items() if truth is Truth.FALSE)
        if refuted:
            reasons.append(
                "no regular smoothing family of this model: relation fails on "
                + ", ".join(refuted)
            )
        return Verdict(status, Smoothable.INCONCLUSIVE, None, tuple(reasons))

    check = check_twisted_canonical(curve, models, signature)
    status = check.status
    mu = signature_of(curve)
    polar = [label for label, value in check.polarity.items() if value == Polarity.POLAR]
    holomorphic = [
        label for label, value in check.polarity.items() if value == Polarity.HOLOMORPHIC
    ]
    _LOGGER.debug("Status %s, polar %s, holomorphic %s", status, polar, holomorphic)

    if len(ctype.bridges) == 1:
        criterion: Criterion | None = None
        if mu.holomorphic:
            criterion = Criterion.ONE_NODE
        elif not holomorphic:
            criterion = Criterion.ONE_NODE_POLAR
        if criterion is not None:
            if status == Status.TWISTED_CANONICAL:
                return Verdict(status, Smoothable.YES, criterion)
            if status == Status.NOT_TWISTED_CANONICAL:
                return Verdict(status, Smoothable.NO, criterion, _false_reasons(check))
            return Verdict(
                status, Smoothable.INCONCLUSIVE, criterion, _unknown_reasons(check)
            )

    if status == Status.NOT_TWISTED_CANONICAL:
        return Verdict(
            status, Smoothable.NO, Criterion.TWISTED_RELATION, _false_reasons(check)
        )
    if status == Status.TWISTED_CANONICAL:
        if mu.holomorphic and len(holomorphic) == 1:
            return Verdict(status, Smoothable.YES, Criterion.SINGLE_HOLOMORPHIC)
        if not mu.holomorphic and not holomorphic:
            return Verdict(status, Smoothable.YES, Criterion.ALL_POLAR)
        bridge = _genus_two_bridge(curve)
        if bridge is not None:
            if mu.orders == (2,):
                return Verdict(
                    status,
                    Smoothable.NO,
                    Criterion.GENUS_TWO_BRIDGE,
                    ("a double zero on the rational bridge never smooths",),
                )
            first, second = (leg.label for leg in curve.legs)
            conjugate = _model(curve, models, bridge).holds(
                AxiomKind.CONJUGATE, (first, second)
            )
            if conjugate is Truth.TRUE:
                return Verdict(status, Smoothable.YES, Criterion.GENUS_TWO_BRIDGE)
            return Verdict(
                status,
                Smoothable.NO,
                Criterion.GENUS_TWO_BRIDGE,
                (f"{first} and {second} are not conjugate under the double cover of {bridge}",),
            )

    catalog = _catalog_verdict(curve, models, status)
    if catalog is not None:
        return catalog
    return Verdict(status, Smoothable.INCONCLUSIVE, None, _unknown_reasons(check))
