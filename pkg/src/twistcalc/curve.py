"""Stable pointed nodal curves as decorated dual graphs.

Half-edges are first class: every edge has two ends, a loop has both ends on
the same vertex and parallel edges are distinct objects. Vertex order is
declaration order and fixes the row order of the Laplacian.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass, field, replace
from functools import cached_property

import networkx as nx

from .const import EXCEPTIONAL_SEPARATOR, NODE_BRANCHES, CurveKind
from .exceptions import InvalidCurve, UnknownEdge
from .lattice import IntMatrix
from .typedefs import HalfEdge

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class Vertex:
    label: str
    genus: int
    exceptional: bool = False


@dataclass(frozen=True)
class Edge:
    label: str
    ends: tuple[str, str]
    names: tuple[str, str] | None = None

    @property
    def is_loop(self) -> bool:
        return self.ends[0] == self.ends[1]

    @property
    def point_names(self) -> tuple[str, str]:
        """Name of the node preimage on each end."""
        if self.names is not None:
            return self.names
        if self.is_loop:
            return (self.label + NODE_BRANCHES[0], self.label + NODE_BRANCHES[1])
        return (self.label, self.label)

    def other(self, side: int) -> str:
        return self.ends[1 - side]


@dataclass(frozen=True)
class Leg:
    label: str
    vertex: str
    order: int


@dataclass(frozen=True)
class CurveType:
    kind: CurveKind
    bridges: frozenset[str]
    loops: frozenset[str]


@dataclass(frozen=True)
class StableCurve:
    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...] = ()
    legs: tuple[Leg, ...] = ()
    _index: dict[str, int] = field(
        init=False, repr=False, compare=False, hash=False, default_factory=dict
    )

    def __post_init__(self) -> None:
        for position, vertex in enumerate(self.vertices):
            if vertex.label in self._index:
                raise InvalidCurve(f"duplicate vertex {vertex.label!r}")
            self._index[vertex.label] = position
        seen: set[str] = set()
        for edge in self.edges:
            if edge.label in seen:
                raise InvalidCurve(f"duplicate edge {edge.label!r}")
            seen.add(edge.label)
            for end in edge.ends:
                if end not in self._index:
                    raise InvalidCurve(f"edge {edge.label!r} references {end!r}")
        for leg in self.legs:
            if leg.label in seen:
                raise InvalidCurve(f"duplicate leg or edge name {leg.label!r}")
            seen.add(leg.label)
            if leg.vertex not in self._index:
                raise InvalidCurve(f"leg {leg.label!r} references {leg.vertex!r}")

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError as e:
            raise InvalidCurve(f"unknown vertex {label!r}") from e

    def vertex(self, label: str) -> Vertex:
        return self.vertices[self.index(label)]

    def edge(self, label: str) -> Edge:
        for edge in self.edges:
            if edge.label == label:
                return edge
        raise UnknownEdge(label)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(vertex.label for vertex in self.vertices)

    @property
    def genus(self) -> int:
        """Arithmetic genus of the whole curve."""
        return (
            sum(vertex.genus for vertex in self.vertices)
            + len(self.edges)
            - len(self.vertices)
            + 1
        )

    def half_edges(self, label: str) -> tuple[HalfEdge, ...]:
        return tuple(
            (edge.label, side)
            for edge in self.edges
            for side in (0, 1)
            if edge.ends[side] == label
        )

    def separating_half_edges(self, label: str) -> tuple[HalfEdge, ...]:
        """Half-edges at the vertex whose edge is not a loop."""
        return tuple(
            (name, side)
            for name, side in self.half_edges(label)
            if not self.edge(name).is_loop
        )

    def loops(self, label: str) -> tuple[Edge, ...]:
        return tuple(
            edge for edge in self.edges if edge.is_loop and edge.ends[0] == label
        )

    def legs_at(self, label: str) -> tuple[Leg, ...]:
        return tuple(leg for leg in self.legs if leg.vertex == label)

    def leg_order_sum(self, label: str) -> int:
        return sum(leg.order for leg in self.legs_at(label))

    def valence(self, label: str) -> int:
        return len(self.half_edges(label))

    def arithmetic_genus(self, label: str) -> int:
        return self.vertex(label).genus + len(self.loops(label))

    def marked_points(self, label: str) -> tuple[str, ...]:
        names = [leg.label for leg in self.legs_at(label)]
        for name, side in self.half_edges(label):
            names.append(self.edge(name).point_names[side])
        return tuple(names)

    def point_of(self, half_edge: HalfEdge) -> str:
        name, side = half_edge
        return self.edge(name).point_names[side]

    def graph(self) -> nx.MultiGraph:
        graph = nx.MultiGraph()
        graph.add_nodes_from(self.labels)
        for edge in self.edges:
            graph.add_edge(*edge.ends, key=edge.label)
        return graph

    @cached_property
    def curve_type(self) -> CurveType:
        return classify_type(self)


def validate(curve: StableCurve) -> list[str]:
    """Violations of connectivity, stability and genus; empty when the curve is fine."""
    violations: list[str] = []
    if not nx.is_connected(curve.graph()):
        violations.append("dual graph is not connected")
    for vertex in curve.vertices:
        if vertex.genus < 0:
            violations.append(f"vertex {vertex.label} has negative genus")
        special = curve.valence(vertex.label) + len(curve.legs_at(vertex.label))
        if vertex.genus == 0 and special < 3 and not vertex.exceptional:
            violations.append(
                f"vertex {vertex.label} is unstable: genus 0 with {special} special points"
            )
    if curve.genus < 1:
        violations.append(f"arithmetic genus {curve.genus} is less than 1")
    _LOGGER.debug(
        "Validated curve of genus %s: %d violations", curve.genus, len(violations)
    )
    return violations


def classify_type(curve: StableCurve) -> CurveType:
    loops = frozenset(edge.label for edge in curve.edges if edge.is_loop)
    graph = curve.graph()
    simple = nx.Graph(graph)
    simple.remove_edges_from(list(nx.selfloop_edges(simple)))
    multiplicity: dict[frozenset[str], int] = {}
    for edge in curve.edges:
        if not edge.is_loop:
            pair = frozenset(edge.ends)
            multiplicity[pair] = multiplicity.get(pair, 0) + 1
    bridges: set[str] = set()
    for u, w in nx.bridges(simple):
        if multiplicity.get(frozenset((u, w)), 0) == 1:
            bridges.update(
                edge.label
                for edge in curve.edges
                if not edge.is_loop and frozenset(edge.ends) == frozenset((u, w))
            )
    non_loop = [edge for edge in curve.edges if not edge.is_loop]
    if not loops and len(bridges) == len(non_loop):
        kind = CurveKind.COMPACT
    elif len(bridges) == len(non_loop):
        kind = CurveKind.PSEUDOCOMPACT
    else:
        kind = CurveKind.NON_PSEUDOCOMPACT
    _LOGGER.debug(
        "Curve type %s: bridges %s, loops %s", kind, sorted(bridges), sorted(loops)
    )
    return CurveType(kind, frozenset(bridges), loops)


def laplacian(curve: StableCurve) -> IntMatrix:
    size = len(curve.vertices)
    rows = [[0] * size for _ in range(size)]
    for edge in curve.edges:
        if edge.is_loop:
            continue
        i, k = curve.index(edge.ends[0]), curve.index(edge.ends[1])
        rows[i][k] += 1
        rows[k][i] += 1
        rows[i][i] -= 1
        rows[k][k] -= 1
    return IntMatrix.from_rows(rows)


def chain_vertex_label(edge_label: str, position: int) -> str:
    return f"{edge_label}{EXCEPTIONAL_SEPARATOR}{position}"


def insert_rational_chain(curve: StableCurve, label: str, length: int) -> StableCurve:
    """Replace an edge by a path through `length` exceptional genus-0 vertices.

    The chain runs from the edge's first end to its second. The end
    vertices keep the original node point names.
    """
    if length < 0:
        raise InvalidCurve(f"chain length {length} is negative")
    edge = curve.edge(label)
    if length == 0:
        return curve
    first, last = edge.point_names
    chain = [edge.ends[0]] + [
        chain_vertex_label(label, position) for position in range(1, length + 1)
    ] + [edge.ends[1]]
    new_edges: list[Edge] = []
    for position in range(length + 1):
        name = chain_vertex_label(label, position)
        names = (
            first if position == 0 else name,
            last if position == length else name,
        )
        new_edges.append(Edge(name, (chain[position], chain[position + 1]), names))
    edges: list[Edge] = []
    for existing in curve.edges:
        if existing.label == label:
            edges.extend(new_edges)
        else:
            edges.append(existing)
    vertices = curve.vertices + tuple(
        Vertex(name, 0, exceptional=True) for name in chain[1:-1]
    )
    _LOGGER.debug("Inserted a chain of length %s at %s", length, label)
    return StableCurve(vertices, tuple(edges), curve.legs)


def contract_chain(curve: StableCurve, label: str) -> StableCurve:
    """Inverse of insert_rational_chain for the chain inserted at `label`."""
    prefix = label + EXCEPTIONAL_SEPARATOR
    chain_edges = [edge for edge in curve.edges if edge.label.startswith(prefix)]
    if not chain_edges:
        raise UnknownEdge(label)
    chain_vertices = {
        vertex.label
        for vertex in curve.vertices
        if vertex.exceptional and vertex.label.startswith(prefix)
    }
    ordered = sorted(chain_edges, key=lambda e: int(e.label[len(prefix) :]))
    start, end = ordered[0].ends[0], ordered[-1].ends[1]
    names = (ordered[0].point_names[0], ordered[-1].point_names[1])
    restored = Edge(label, (start, end))
    if names != restored.point_names:
        restored = Edge(label, (start, end), names)
    edges: list[Edge] = []
    for edge in curve.edges:
        if edge.label == ordered[0].label:
            edges.append(restored)
        elif edge not in chain_edges:
            edges.append(edge)
    vertices = tuple(v for v in curve.vertices if v.label not in chain_vertices)
    return StableCurve(vertices, tuple(edges), curve.legs)


def blow_up(curve: StableCurve, labels: tuple[str, ...] | list[str]) -> StableCurve:
    """Insert one exceptional vertex at each listed edge."""
    for label in labels:
        curve = insert_rational_chain(curve, label, 1)
    return curve


def relabel(curve: StableCurve, mapping: Mapping[str, str]) -> StableCurve:
    """Rename vertices; edges and legs follow."""

    def rename(label: str) -> str:
        return mapping.get(label, label)

    return StableCurve(
        tuple(replace(vertex, label=rename(vertex.label)) for vertex in curve.vertices),
        tuple(
            replace(edge, ends=(rename(edge.ends[0]), rename(edge.ends[1])))
            for edge in curve.edges
        ),
        tuple(replace(leg, vertex=rename(leg.vertex)) for leg in curve.legs),
    )


def reorder(curve: StableCurve, order: tuple[str, ...] | list[str]) -> StableCurve:
    return StableCurve(
        tuple(curve.vertex(label) for label in order), curve.edges, curve.legs
    )


def default_base_dimension(curve: StableCurve) -> int:
    """Dimension of the boundary stratum of curves with this dual graph."""
    return 3 * curve.genus - 3 + len(curve.legs) - len(curve.edges)
