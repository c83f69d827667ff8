"""Divisor classes on single components and the models that decide them.

Each vertex of a curve gets one ComponentModel. Rational components are
decided by degree, elliptic ones by an exact abelian-group presentation and
higher genus ones by integer combinations of declared axioms. Every query
answers with a three-valued Truth; nothing is guessed.
"""

from __future__ import annotations

import itertools
import logging
import re
from abc import ABC, abstractmethod
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

import networkx as nx

from .const import CANONICAL_SYMBOL, DEFAULT_EFFECTIVE_SEARCH_BOUND, StrEnum
from .curve import StableCurve
from .exceptions import (
    InconsistentTorsion,
    InvalidAxiom,
    MixedComponents,
    ModelMismatch,
    UnknownPoint,
)
from .lattice import (
    GroupElement,
    GroupPresentation,
    element_is_zero,
    element_order,
)
from .typedefs import IntVector, Truth

_LOGGER = logging.getLogger(__name__)

_TERM = re.compile(
    r"\s*(?P<sign>[+-])?\s*(?P<coefficient>\d+)?\s*"
    r"(?P<name>[A-Za-z_][A-Za-z0-9_#]*'{0,2}|0)\s*"
)


@dataclass(frozen=True)
class DivisorClass:
    """Formal combination of named points plus a multiple of K."""

    component: str
    coefficients: tuple[tuple[str, int], ...] = ()
    canonical: int = 0

    @classmethod
    def of(
        cls,
        component: str,
        coefficients: Mapping[str, int] | None = None,
        canonical: int = 0,
    ) -> DivisorClass:
        items = tuple(
            sorted((name, value) for name, value in (coefficients or {}).items() if value)
        )
        return cls(component, items, canonical)

    @classmethod
    def parse(cls, component: str, text: str) -> DivisorClass:
        """Read expressions such as ``4z - 2q1' + K`` or ``0``."""
        coefficients: dict[str, int] = {}
        canonical = 0
        position = 0
        text = text.strip()
        if not text:
            raise ValueError("empty divisor")
        while position < len(text):
            match = _TERM.match(text, position)
            if match is None or match.end() == position:
                raise ValueError(f"cannot read divisor at {text[position:]!r}")
            if position and match.group("sign") is None:
                raise ValueError(f"missing + or - before {match.group('name')!r}")
            value = int(match.group("coefficient") or 1)
            if match.group("sign") == "-":
                value = -value
            name = match.group("name")
            if name == CANONICAL_SYMBOL:
                canonical += value
            elif name != "0":
                coefficients[name] = coefficients.get(name, 0) + value
            position = match.end()
        return cls.of(component, coefficients, canonical)

    def as_dict(self) -> dict[str, int]:
        return dict(self.coefficients)

    @property
    def points(self) -> frozenset[str]:
        return frozenset(name for name, _ in self.coefficients)

    def coefficient(self, name: str) -> int:
        return self.as_dict().get(name, 0)

    def degree(self, genus: int) -> int:
        return sum(value for _, value in self.coefficients) + (
            2 * genus - 2
        ) * self.canonical

    @property
    def formally_effective(self) -> bool:
        return self.canonical >= 0 and all(value >= 0 for _, value in self.coefficients)

    def _combine(self, other: DivisorClass, factor: int) -> DivisorClass:
        if other.component != self.component:
            raise MixedComponents(f"{self.component} and {other.component}")
        merged = self.as_dict()
        for name, value in other.coefficients:
            merged[name] = merged.get(name, 0) + factor * value
        return DivisorClass.of(
            self.component, merged, self.canonical + factor * other.canonical
        )

    def __add__(self, other: DivisorClass) -> DivisorClass:
        return self._combine(other, 1)

    def __sub__(self, other: DivisorClass) -> DivisorClass:
        return self._combine(other, -1)

    def __neg__(self) -> DivisorClass:
        return self.scaled(-1)

    def scaled(self, factor: int) -> DivisorClass:
        return DivisorClass.of(
            self.component,
            {name: factor * value for name, value in self.coefficients},
            factor * self.canonical,
        )

    def renamed(self, mapping: Mapping[str, str], component: str | None = None) -> DivisorClass:
        merged: dict[str, int] = {}
        for name, value in self.coefficients:
            target = mapping.get(name, name)
            merged[target] = merged.get(target, 0) + value
        return DivisorClass.of(component or self.component, merged, self.canonical)

    def __str__(self) -> str:
        terms = [(name, value) for name, value in self.coefficients]
        if self.canonical:
            terms.append((CANONICAL_SYMBOL, self.canonical))
        if not terms:
            return "0"
        parts: list[str] = []
        for name, value in terms:
            magnitude = "" if abs(value) == 1 else str(abs(value))
            sign = "-" if value < 0 else "+"
            if parts:
                parts.append(f"{sign} {magnitude}{name}")
            else:
                parts.append(f"{'-' if value < 0 else ''}{magnitude}{name}")
        return " ".join(parts)


class AxiomKind(StrEnum):
    EQUIV = "equiv"
    NOT_EQUIV = "notequiv"
    EFFECTIVE = "effective"
    NOT_EFFECTIVE = "noteffective"
    WEIERSTRASS = "weierstrass"
    CONJUGATE = "conjugate"
    RESIDUE = "residue"
    H0 = "h0"


FACT_KINDS = frozenset({AxiomKind.WEIERSTRASS, AxiomKind.CONJUGATE, AxiomKind.RESIDUE})
GROUP_KINDS = FACT_KINDS | {AxiomKind.H0, AxiomKind.EQUIV}


@dataclass(frozen=True)
class Axiom:
    kind: AxiomKind
    divisors: tuple[DivisorClass, ...] = ()
    points: tuple[str, ...] = ()
    value: int | None = None
    negated: bool = False

    def matches(self, kind: AxiomKind, points: tuple[str, ...]) -> bool:
        if self.kind != kind:
            return False
        if kind == AxiomKind.CONJUGATE:
            return sorted(self.points) == sorted(points)
        return self.points == points


@dataclass(frozen=True)
class ComponentModel(ABC):
    component: str
    points: tuple[str, ...]
    axioms: tuple[Axiom, ...] = ()

    @property
    @abstractmethod
    def genus(self) -> int:
        """Genus of the curve the model describes."""

    @property
    def kind(self) -> str:
        return type(self).__name__

    def check(self, divisor: DivisorClass) -> None:
        if divisor.component != self.component:
            raise MixedComponents(
                f"divisor on {divisor.component} queried on {self.component}"
            )
        unknown = divisor.points - set(self.points)
        if unknown:
            raise UnknownPoint(
                f"{', '.join(sorted(unknown))} not on component {self.component}"
            )

    def degree(self, divisor: DivisorClass) -> int:
        return divisor.degree(self.genus)

    def canonical(self) -> DivisorClass:
        return DivisorClass.of(self.component, canonical=1)

    def divisor(self, text: str) -> DivisorClass:
        divisor = DivisorClass.parse(self.component, text)
        self.check(divisor)
        return divisor

    @abstractmethod
    def is_trivial(self, divisor: DivisorClass) -> Truth:
        """Whether a degree-0 class is trivial."""

    @abstractmethod
    def is_effective(self, divisor: DivisorClass) -> Truth:
        pass

    @abstractmethod
    def h0(self, divisor: DivisorClass) -> int | None:
        pass

    def linear_equiv(self, first: DivisorClass, second: DivisorClass) -> Truth:
        self.check(first)
        self.check(second)
        if self.degree(first) != self.degree(second):
            return Truth.FALSE
        return self.is_trivial(first - second)

    def declared_h0(self, divisor: DivisorClass) -> int | None:
        for axiom in self.axioms:
            if axiom.kind == AxiomKind.H0 and axiom.divisors[0] == divisor:
                return axiom.value
        return None

    def holds(self, kind: AxiomKind, points: tuple[str, ...]) -> Truth:
        """Declared facts (Weierstrass, conjugate pair, residue sum)."""
        unknown = set(points) - set(self.points)
        if unknown:
            raise UnknownPoint(f"{', '.join(sorted(unknown))} not on {self.component}")
        for axiom in self.axioms:
            if axiom.matches(kind, points):
                return Truth.FALSE if axiom.negated else Truth.TRUE
        return Truth.UNKNOWN


@dataclass(frozen=True)
class RationalModel(ComponentModel):
    @property
    def genus(self) -> int:
        return 0

    def is_trivial(self, divisor: DivisorClass) -> Truth:
        self.check(divisor)
        return Truth.of(self.degree(divisor) == 0)

    def is_effective(self, divisor: DivisorClass) -> Truth:
        self.check(divisor)
        return Truth.of(self.degree(divisor) >= 0)

    def h0(self, divisor: DivisorClass) -> int | None:
        self.check(divisor)
        return max(self.degree(divisor) + 1, 0)


@dataclass(frozen=True)
class EllipticModel(ComponentModel):
    """Genus-one component whose point classes live in a presented group.

    ``blocks`` lists groups of points whose mutual differences were declared;
    a degree-0 class is decided only when it splits into degree-0 pieces
    inside blocks. ``None`` means the presentation is complete.
    """

    presentation: GroupPresentation = field(default_factory=lambda: GroupPresentation(0))
    coordinates: tuple[tuple[str, IntVector], ...] = ()
    blocks: tuple[frozenset[str], ...] | None = None

    @property
    def genus(self) -> int:
        return 1

    @classmethod
    def from_torsion(
        cls,
        component: str,
        points: Iterable[str],
        declarations: Iterable[tuple[str, str, int | None]],
        axioms: tuple[Axiom, ...] = (),
    ) -> EllipticModel:
        """Build the group from declarations ``a - b`` of exact order N (None for
        infinite); ``equiv`` axioms add their difference as a relation."""
        names = tuple(dict.fromkeys(points))
        declared = list(declarations)
        linear = [axiom for axiom in axioms if axiom.kind == AxiomKind.EQUIV]
        for first, second, _ in declared:
            for name in (first, second):
                if name not in names:
                    raise UnknownPoint(f"{name} not on component {component}")
        rank = max(len(names) - 1, 0)
        generator = {name: index - 1 for index, name in enumerate(names) if index}

        def coordinate(name: str) -> list[int]:
            vector = [0] * rank
            if name in generator:
                vector[generator[name]] = 1
            return vector

        relations: list[IntVector] = []
        for first, second, order in declared:
            if order is not None:
                if order < 2:
                    raise InconsistentTorsion(
                        f"{first} - {second} of order {order} on {component}"
                    )
                difference = [a - b for a, b in zip(coordinate(first), coordinate(second))]
                relations.append(tuple(order * x for x in difference))
        differences: list[list[str]] = []
        for axiom in linear:
            first, second = axiom.divisors
            difference = (first - second).as_dict()
            differences.append(sorted(difference))
            for name in difference:
                if name not in names:
                    raise UnknownPoint(f"{name} not on component {component}")
            if sum(difference.values()):
                raise InvalidAxiom(
                    f"{first} ~ {second} on {component} compares different degrees"
                )
            total = [0] * rank
            for name, value in difference.items():
                total = [a + value * b for a, b in zip(total, coordinate(name))]
            if any(total):
                relations.append(tuple(total))
        graph = nx.Graph()
        graph.add_nodes_from(names)
        graph.add_edges_from((first, second) for first, second, _ in declared)
        for related in differences:
            graph.add_edges_from(itertools.pairwise(related))
        blocks = tuple(frozenset(block) for block in nx.connected_components(graph))
        model = cls(
            component,
            names,
            axioms,
            GroupPresentation(rank, tuple(relations)),
            tuple((name, tuple(coordinate(name))) for name in names),
            blocks,
        )
        model.validate_orders(declared)
        return model

    def validate_orders(self, declared: list[tuple[str, str, int | None]]) -> None:
        for first, second, order in declared:
            found = element_order(
                self.presentation, self.element({first: 1, second: -1})
            )
            if found != order:
                raise InconsistentTorsion(
                    f"{first} - {second} on {self.component}: declared order "
                    f"{order or 'inf'}, presentation gives {found or 'inf'}"
                )
        for block in self.blocks or (frozenset(self.points),):
            for first, second in itertools.combinations(sorted(block), 2):
                if element_is_zero(self.presentation, self.element({first: 1, second: -1})):
                    raise InconsistentTorsion(
                        f"distinct points {first} and {second} share a class on {self.component}"
                    )

    def element(self, coefficients: Mapping[str, int]) -> GroupElement:
        table = dict(self.coordinates)
        total = [0] * self.presentation.rank
        for name, value in coefficients.items():
            for index, x in enumerate(table[name]):
                total[index] += value * x
        return GroupElement(tuple(total))

    def _decided(self, divisor: DivisorClass) -> bool:
        if self.blocks is None:
            return True
        for block in self.blocks:
            inside = [value for name, value in divisor.coefficients if name in block]
            if sum(inside) != 0:
                return False
        return True

    def is_trivial(self, divisor: DivisorClass) -> Truth:
        self.check(divisor)
        if self.degree(divisor) != 0:
            return Truth.FALSE
        if not divisor.coefficients:
            return Truth.TRUE
        if not self._decided(divisor):
            _LOGGER.debug("%s: %s is outside the declared torsion data", self.component, divisor)
            return Truth.UNKNOWN
        return Truth.of(
            element_is_zero(self.presentation, self.element(divisor.as_dict()))
        )

    def is_effective(self, divisor: DivisorClass) -> Truth:
        self.check(divisor)
        degree = self.degree(divisor)
        if degree < 0:
            return Truth.FALSE
        if degree >= 1:
            return Truth.TRUE
        return self.is_trivial(divisor)

    def h0(self, divisor: DivisorClass) -> int | None:
        self.check(divisor)
        degree = self.degree(divisor)
        if degree < 0:
            return 0
        if degree >= 1:
            return degree
        trivial = self.is_trivial(divisor)
        if trivial is Truth.UNKNOWN:
            return None
        return 1 if trivial is Truth.TRUE else 0


@dataclass(frozen=True)
class AxiomaticModel(ComponentModel):
    """Genus >= 2 component known only through declared axioms."""

    declared_genus: int = 2
    search_bound: int = DEFAULT_EFFECTIVE_SEARCH_BOUND

    def __post_init__(self) -> None:
        for axiom in self.axioms:
            for divisor in axiom.divisors:
                self.check(divisor)
            if axiom.kind in (AxiomKind.EQUIV, AxiomKind.NOT_EQUIV):
                first, second = axiom.divisors
                if self.degree(first) != self.degree(second):
                    raise InvalidAxiom(
                        f"{first} ~ {second} on {self.component} compares degrees "
                        f"{self.degree(first)} and {self.degree(second)}"
                    )

    @property
    def genus(self) -> int:
        return self.declared_genus

    def vector(self, divisor: DivisorClass) -> IntVector:
        table = divisor.as_dict()
        return tuple(table.get(name, 0) for name in self.points) + (divisor.canonical,)

    def _relations(self) -> tuple[IntVector, ...]:
        relations: list[IntVector] = []
        for axiom in self.axioms:
            if axiom.kind == AxiomKind.EQUIV:
                first, second = axiom.divisors
                relations.append(self.vector(first - second))
            elif self.genus == 2 and not axiom.negated:
                # genus two: Weierstrass points and conjugate pairs are cut by |K|
                if axiom.kind == AxiomKind.WEIERSTRASS:
                    (point,) = axiom.points
                    relations.append(
                        self.vector(DivisorClass.of(self.component, {point: 2}, -1))
                    )
                elif axiom.kind == AxiomKind.CONJUGATE:
                    first_point, second_point = axiom.points
                    relations.append(
                        self.vector(
                            DivisorClass.of(
                                self.component, {first_point: 1, second_point: 1}, -1
                            )
                        )
                    )
        return tuple(relation for relation in relations if any(relation))

    @property
    def presentation(self) -> GroupPresentation:
        return GroupPresentation(len(self.points) + 1, self._relations())

    def _in_lattice(self, vector: IntVector) -> bool:
        if not any(vector):
            return True
        return element_is_zero(self.presentation, GroupElement(vector))

    def _equivalent(self, first: DivisorClass, second: DivisorClass) -> bool:
        return self._in_lattice(self.vector(first - second))

    def is_trivial(self, divisor: DivisorClass) -> Truth:
        self.check(divisor)
        if self.degree(divisor) != 0:
            return Truth.FALSE
        x = self.vector(divisor)
        if self._in_lattice(x):
            return Truth.TRUE
        for axiom in self.axioms:
            if axiom.kind != AxiomKind.NOT_EQUIV:
                continue
            first, second = axiom.divisors
            y = self.vector(first - second)
            if self._in_lattice(tuple(a - b for a, b in zip(x, y))) or self._in_lattice(
                tuple(a + b for a, b in zip(x, y))
            ):
                return Truth.FALSE
        return Truth.UNKNOWN

    def _effective_shape(self, vector: IntVector) -> bool:
        *points, canonical = vector
        if canonical >= 0 and all(value >= 0 for value in points):
            return True
        # K - E with E effective of degree at most g - 1
        return (
            canonical == 1
            and all(value <= 0 for value in points)
            and -sum(points) <= self.genus - 1
        )

    def is_effective(self, divisor: DivisorClass) -> Truth:
        self.check(divisor)
        degree = self.degree(divisor)
        if degree < 0:
            return Truth.FALSE
        if degree == 0:
            return self.is_trivial(divisor)
        if degree >= self.genus:
            return Truth.TRUE
        for axiom in self.axioms:
            if axiom.kind in (AxiomKind.EFFECTIVE, AxiomKind.NOT_EFFECTIVE):
                if self._equivalent(divisor, axiom.divisors[0]):
                    return Truth.of(axiom.kind == AxiomKind.EFFECTIVE)
        x = self.vector(divisor)
        relations = self._relations()[:6]
        bound = range(-self.search_bound, self.search_bound + 1)
        for combination in itertools.product(bound, repeat=len(relations)):
            candidate = list(x)
            for factor, relation in zip(combination, relations):
                for index, value in enumerate(relation):
                    candidate[index] += factor * value
            if self._effective_shape(tuple(candidate)):
                return Truth.TRUE
        return Truth.UNKNOWN

    def h0(self, divisor: DivisorClass) -> int | None:
        self.check(divisor)
        for axiom in self.axioms:
            if axiom.kind == AxiomKind.H0 and self._equivalent(divisor, axiom.divisors[0]):
                return axiom.value
        degree = self.degree(divisor)
        genus = self.genus
        if degree < 0:
            return 0
        if degree > 2 * genus - 2:
            return degree - genus + 1
        if degree == 0:
            trivial = self.is_trivial(divisor)
            return None if trivial is Truth.UNKNOWN else int(trivial is Truth.TRUE)
        if degree == 2 * genus - 2:
            canonical = self.linear_equiv(divisor, self.canonical())
            if canonical is Truth.UNKNOWN:
                return None
            return genus if canonical is Truth.TRUE else genus - 1
        if degree == 1:
            effective = self.is_effective(divisor)
            return None if effective is Truth.UNKNOWN else int(effective is Truth.TRUE)
        return None

    def holds(self, kind: AxiomKind, points: tuple[str, ...]) -> Truth:
        declared = super().holds(kind, points)
        if declared.decided or self.genus != 2:
            return declared
        if kind == AxiomKind.WEIERSTRASS:
            (point,) = points
            return self.linear_equiv(
                DivisorClass.of(self.component, {point: 2}), self.canonical()
            )
        if kind == AxiomKind.CONJUGATE:
            first, second = points
            return self.linear_equiv(
                DivisorClass.of(self.component, {first: 1, second: 1}), self.canonical()
            )
        return declared


def linear_equiv(model: ComponentModel, first: DivisorClass, second: DivisorClass) -> Truth:
    return model.linear_equiv(first, second)


def is_effective(model: ComponentModel, divisor: DivisorClass) -> Truth:
    return model.is_effective(divisor)


def h0(model: ComponentModel, divisor: DivisorClass) -> int | None:
    return model.h0(divisor)


def model_for(
    curve: StableCurve,
    label: str,
    axioms: tuple[Axiom, ...] = (),
    torsion: tuple[tuple[str, str, int | None], ...] = (),
    search_bound: int = DEFAULT_EFFECTIVE_SEARCH_BOUND,
) -> ComponentModel:
    """Default model of a vertex: rational, elliptic (when torsion or
    ``equiv`` relations are given or the normalization has genus one) or
    axiomatic."""
    vertex = curve.vertex(label)
    points = curve.marked_points(label)
    relations = any(axiom.kind == AxiomKind.EQUIV for axiom in axioms)
    if vertex.genus <= 1:
        for axiom in axioms:
            if axiom.kind not in GROUP_KINDS:
                raise InvalidAxiom(
                    f"{axiom.kind} axiom on {label}: genus {vertex.genus} components "
                    "are decided by their group model"
                )
    if torsion or relations or vertex.genus == 1:
        if vertex.genus == 1 or (vertex.genus == 0 and len(curve.loops(label)) == 1):
            if vertex.genus == 0:
                # nodal group model: the node preimages are not points of the nodal curve
                branches = set(curve.loops(label)[0].point_names)
                points = tuple(p for p in points if p not in branches)
            return EllipticModel.from_torsion(label, points, torsion, axioms)
        raise ModelMismatch(f"group data declared on {label} of genus {vertex.genus}")
    if vertex.genus == 0:
        return RationalModel(label, points, axioms)
    return AxiomaticModel(label, points, axioms, vertex.genus, search_bound)


def dualizing_class(curve: StableCurve, label: str, model: ComponentModel) -> DivisorClass:
    """The dualizing sheaf of the vertex expressed in the model's terms."""
    if model.genus == curve.arithmetic_genus(label):
        return model.canonical()
    if model.genus == curve.vertex(label).genus:
        branches: dict[str, int] = {}
        for loop in curve.loops(label):
            for name in loop.point_names:
                branches[name] = branches.get(name, 0) + 1
        return DivisorClass.of(label, branches, 1)
    raise ModelMismatch(
        f"model of genus {model.genus} on {label} with genus "
        f"{curve.vertex(label).genus} and {len(curve.loops(label))} self-nodes"
    )
