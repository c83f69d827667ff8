"""Limit spin structures on curves with an even signature and their parity."""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass

from .const import CurveKind, Parity
from .curve import StableCurve, blow_up, classify_type
from .divisor import ComponentModel, DivisorClass, RationalModel
from .exceptions import NotPseudocompact, OddEntry
from .twist import solve_laplacian
from .typedefs import IntVector

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpinStructure:
    """Per-vertex theta characteristics on the blown-up curve.

    ``classes`` covers the original vertices; every exceptional vertex
    carries O(1). ``determined`` is False when the curve is not of
    pseudocompact type, where the parity depends on the smoothing.
    """

    base: StableCurve
    curve: StableCurve
    blown_up: tuple[str, ...]
    b: IntVector
    classes: dict[str, DivisorClass]
    determined: bool = True

    @property
    def exceptional(self) -> tuple[str, ...]:
        return tuple(v.label for v in self.curve.vertices if v.exceptional)

    def degree(self, label: str) -> int:
        if label in self.classes:
            return sum(value for _, value in self.classes[label].coefficients)
        return 1

    @property
    def total_degree(self) -> int:
        return sum(self.degree(label) for label in self.curve.labels)


@dataclass(frozen=True)
class ParityResult:
    parity: Parity
    h0: dict[str, int | None]
    reasons: tuple[str, ...] = ()


def limit_spin(curve: StableCurve, second_kind: bool = False) -> SpinStructure:
    odd = [leg.label for leg in curve.legs if leg.order % 2]
    if odd:
        raise OddEntry(f"odd orders at {', '.join(odd)}")
    ctype = classify_type(curve)
    pseudocompact = ctype.kind != CurveKind.NON_PSEUDOCOMPACT
    if not pseudocompact and not second_kind:
        raise NotPseudocompact("limit spin structures need separating nodes or self-nodes")
    if second_kind:
        targets = tuple(edge.label for edge in curve.edges if not edge.is_loop)
    else:
        targets = tuple(edge.label for edge in curve.edges if edge.label in ctype.bridges)
    blown = blow_up(curve, targets)

    rhs: list[int] = []
    for vertex in blown.vertices:
        if vertex.exceptional:
            rhs.append(-1)
        else:
            half_orders = blown.leg_order_sum(vertex.label) // 2
            rhs.append(half_orders - (blown.arithmetic_genus(vertex.label) - 1))
    b = solve_laplacian(blown, tuple(rhs))

    classes: dict[str, DivisorClass] = {}
    for label in curve.labels:
        coefficients: dict[str, int] = {}
        for leg in blown.legs_at(label):
            coefficients[leg.label] = coefficients.get(leg.label, 0) + leg.order // 2
        here = b[blown.index(label)]
        for name, side in blown.separating_half_edges(label):
            edge = blown.edge(name)
            point = edge.point_names[side]
            there = b[blown.index(edge.other(side))]
            coefficients[point] = coefficients.get(point, 0) + here - there
        classes[label] = DivisorClass.of(label, coefficients)

    spin = SpinStructure(curve, blown, targets, b, classes, determined=pseudocompact)
    if _LOGGER.isEnabledFor(logging.DEBUG):
        for label, eta in classes.items():
            _LOGGER.debug("eta on %s: %s", label, eta)
        _LOGGER.debug("Blown up %s, %d exceptional components", targets, len(spin.exceptional))
    return spin


def _h0(spin: SpinStructure, label: str, model: ComponentModel) -> int | None:
    eta = spin.classes[label]
    curve = spin.base
    if curve.loops(label) and model.genus != curve.arithmetic_genus(label):
        # a class on the nodal component; only a declared value decides it
        return model.declared_h0(eta)
    return model.h0(eta)


def parity(spin: SpinStructure, models: Mapping[str, ComponentModel]) -> ParityResult:
    """Sum of h0 over the non-exceptional components, mod 2."""
    values: dict[str, int | None] = {}
    reasons: list[str] = []
    for label in spin.base.labels:
        model = models.get(label)
        if model is None:
            if spin.base.vertex(label).genus != 0 or spin.base.loops(label):
                values[label] = None
                reasons.append(f"{label}: no model")
                continue
            model = RationalModel(label, spin.base.marked_points(label))
        values[label] = _h0(spin, label, model)
        if values[label] is None:
            reasons.append(f"{label}: h0({spin.classes[label]}) is undecided")
    if not spin.determined:
        reasons.append("curve is not of pseudocompact type: parity depends on the smoothing")
    if reasons and any(value is None for value in values.values()):
        return ParityResult(Parity.UNDECIDED, values, tuple(reasons))
    total = sum(value for value in values.values() if value is not None)
    result = Parity.EVEN if total % 2 == 0 else Parity.ODD
    _LOGGER.debug("Parity %s from %s", result, values)
    return ParityResult(result, values, tuple(reasons))
