"""Polygonal translation surfaces with exact rational coordinates.

A surface is a set of counter-clockwise polygons, a pairing of their edges
by translation and a list of boundary circles made of the unpaired edges.
Edge i of a polygon runs from vertex i to vertex i + 1. Angles are never
measured: a vertex class's total angle is counted in half-turns from
exact sign tests on edge directions.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import networkx as nx

from .exceptions import (
    DegenerateSlit,
    FlatSurfaceError,
    InvalidPairing,
    InvalidSlit,
    NonRationalWidth,
    OpenSurface,
    OverlappingSlits,
    UnequalVectors,
    WidthMismatch,
)
from .typedefs import HalfEdge, Point2

_LOGGER = logging.getLogger(__name__)

Vector = Point2


def point(x: Fraction | int | str, y: Fraction | int | str) -> Point2:
    return (Fraction(x), Fraction(y))


def sub(a: Point2, b: Point2) -> Vector:
    return (a[0] - b[0], a[1] - b[1])


def add(a: Point2, b: Vector) -> Point2:
    return (a[0] + b[0], a[1] + b[1])


def scale(v: Vector, factor: Fraction) -> Vector:
    return (v[0] * factor, v[1] * factor)


def neg(v: Vector) -> Vector:
    return (-v[0], -v[1])


def cross(u: Vector, v: Vector) -> Fraction:
    return u[0] * v[1] - u[1] * v[0]


def _upper(v: Vector) -> bool:
    return v[1] > 0 or (v[1] == 0 and v[0] > 0)


def argument_less(u: Vector, v: Vector) -> bool:
    """arg(u) < arg(v) with arguments taken in [0, 2pi)."""
    if _upper(u) != _upper(v):
        return _upper(u)
    return cross(u, v) > 0


def rational_length(v: Vector) -> Fraction:
    square = v[0] * v[0] + v[1] * v[1]
    top, bottom = isqrt(square.numerator), isqrt(square.denominator)
    if top * top != square.numerator or bottom * bottom != square.denominator:
        raise NonRationalWidth(f"|{v}|^2 = {square} is not a rational square")
    return Fraction(top, bottom)


@dataclass(frozen=True)
class Polygon:
    label: str
    vertices: tuple[Point2, ...]

    def __post_init__(self) -> None:
        if len(self.vertices) < 3:
            raise FlatSurfaceError(f"polygon {self.label} has fewer than 3 vertices")
        if self.signed_area() <= 0:
            raise FlatSurfaceError(f"polygon {self.label} is not counter-clockwise")
        for index in range(len(self.vertices)):
            if self.edge(index) == (0, 0):
                raise FlatSurfaceError(f"polygon {self.label} repeats vertex {index}")

    def __len__(self) -> int:
        return len(self.vertices)

    def edge(self, index: int) -> Vector:
        n = len(self.vertices)
        return sub(self.vertices[(index + 1) % n], self.vertices[index % n])

    def signed_area(self) -> Fraction:
        n = len(self.vertices)
        twice = sum(
            (cross(self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n)),
            Fraction(0),
        )
        return twice / 2

    @property
    def convex(self) -> bool:
        n = len(self.vertices)
        return all(cross(self.edge(i - 1), self.edge(i)) >= 0 for i in range(n))


@dataclass(frozen=True)
class Circle:
    name: str
    edges: tuple[HalfEdge, ...]


@dataclass(frozen=True)
class SingularityDatum:
    """A vertex class; ``half_turns`` is the total angle in units of pi."""

    corners: tuple[HalfEdge, ...]
    half_turns: int
    boundary: bool = False

    @property
    def order(self) -> int | None:
        if self.boundary:
            return None
        return self.half_turns // 2 - 1


@dataclass(frozen=True)
class SurfaceData:
    points: tuple[SingularityDatum, ...]
    genera: tuple[int, ...]
    euler_characteristic: int
    circles: int

    @property
    def singularities(self) -> tuple[SingularityDatum, ...]:
        return tuple(p for p in self.points if not p.boundary and p.order != 0)

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(sorted((p.order or 0 for p in self.singularities), reverse=True))

    @property
    def genus(self) -> int:
        return sum(self.genera)

    @property
    def connected(self) -> bool:
        return len(self.genera) == 1

    def gauss_bonnet(self) -> bool:
        """Orders minus boundary circles equal sum of 2g - 2 over components."""
        return sum(self.orders) - self.circles == sum(2 * g - 2 for g in self.genera)


@dataclass(frozen=True)
class TranslationSurface:
    polygons: tuple[Polygon, ...]
    pairings: tuple[tuple[HalfEdge, HalfEdge], ...]
    boundary: tuple[Circle, ...] = ()

    def __post_init__(self) -> None:
        labels = [polygon.label for polygon in self.polygons]
        if len(set(labels)) != len(labels):
            raise InvalidPairing("duplicate polygon labels")
        seen: set[HalfEdge] = set()

        def claim(half_edge: HalfEdge) -> None:
            label, index = half_edge
            if label not in labels or not 0 <= index < len(self.polygon(label)):
                raise InvalidPairing(f"no edge {label}.{index}")
            if half_edge in seen:
                raise InvalidPairing(f"edge {label}.{index} is used twice")
            seen.add(half_edge)

        for first, second in self.pairings:
            claim(first)
            claim(second)
            if self.vector(first) != neg(self.vector(second)):
                raise InvalidPairing(
                    f"{first[0]}.{first[1]} and {second[0]}.{second[1]} are not "
                    "opposite translates"
                )
        for circle in self.boundary:
            for half_edge in circle.edges:
                claim(half_edge)

    def polygon(self, label: str) -> Polygon:
        for polygon in self.polygons:
            if polygon.label == label:
                return polygon
        raise InvalidPairing(f"unknown polygon {label}")

    def vector(self, half_edge: HalfEdge) -> Vector:
        return self.polygon(half_edge[0]).edge(half_edge[1])

    def partners(self) -> dict[HalfEdge, HalfEdge]:
        table: dict[HalfEdge, HalfEdge] = {}
        for first, second in self.pairings:
            table[first] = second
            table[second] = first
        return table

    def circle(self, name: str) -> Circle:
        for circle in self.boundary:
            if circle.name == name:
                return circle
        raise InvalidPairing(f"unknown boundary circle {name}")

    def holonomy(self, name: str) -> Vector:
        total: Vector = (Fraction(0), Fraction(0))
        for half_edge in self.circle(name).edges:
            total = add(total, self.vector(half_edge))
        return total

    def all_edges(self) -> list[HalfEdge]:
        return [(p.label, i) for p in self.polygons for i in range(len(p))]

    def component_graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(polygon.label for polygon in self.polygons)
        graph.add_edges_from((first[0], second[0]) for first, second in self.pairings)
        return graph


def area(surface: TranslationSurface) -> Fraction:
    return sum((polygon.signed_area() for polygon in surface.polygons), Fraction(0))


def _check_closed(surface: TranslationSurface) -> None:
    paired = set(surface.partners())
    on_circles = {half_edge for circle in surface.boundary for half_edge in circle.edges}
    loose = [h for h in surface.all_edges() if h not in paired and h not in on_circles]
    if loose:
        raise OpenSurface(
            "unpaired edges outside any boundary circle: "
            + ", ".join(f"{label}.{index}" for label, index in loose)
        )


def _vertex_classes(surface: TranslationSurface) -> list[SingularityDatum]:
    partners = surface.partners()
    visited: set[HalfEdge] = set()
    classes: list[SingularityDatum] = []

    def following(corner: HalfEdge) -> HalfEdge | None:
        label, index = corner
        incoming = (label, (index - 1) % len(surface.polygon(label)))
        return partners.get(incoming)

    def preceding(corner: HalfEdge) -> HalfEdge | None:
        partner = partners.get(corner)
        if partner is None:
            return None
        label, index = partner
        return (label, (index + 1) % len(surface.polygon(label)))

    def rays(corner: HalfEdge) -> tuple[Vector, Vector]:
        label, index = corner
        polygon = surface.polygon(label)
        return polygon.edge(index), neg(polygon.edge(index - 1))

    for start in surface.all_edges():
        if start in visited:
            continue
        # rewind to the beginning of an open chain, if the class is open
        first = start
        boundary = False
        while True:
            before = preceding(first)
            if before is None:
                boundary = True
                break
            if before == start:
                break
            first = before
        chain = [first]
        corner = following(first)
        while corner is not None and corner != first:
            chain.append(corner)
            corner = following(corner)
        boundary = boundary or corner is None
        visited.update(chain)

        wraps = sum(1 for c in chain if argument_less(*reversed(rays(c))))
        if not boundary:
            half_turns = 2 * wraps
        else:
            opening, _ = rays(chain[0])
            _, closing = rays(chain[-1])
            if cross(opening, closing) != 0:
                half_turns = -1
            elif opening == closing or (
                opening[0] * closing[0] + opening[1] * closing[1] > 0
            ):
                half_turns = 2 * wraps
            else:
                half_turns = 2 * wraps + (1 if argument_less(opening, closing) else -1)
        classes.append(SingularityDatum(tuple(chain), half_turns, boundary))
    return classes


def euler_characteristic(surface: TranslationSurface) -> int:
    _check_closed(surface)
    vertices = len(_vertex_classes(surface))
    boundary_edges = sum(len(circle.edges) for circle in surface.boundary)
    return vertices - (len(surface.pairings) + boundary_edges) + len(surface.polygons)


def singularity_data(surface: TranslationSurface) -> SurfaceData:
    _check_closed(surface)
    classes = _vertex_classes(surface)
    for datum in classes:
        if datum.half_turns < 0:
            raise FlatSurfaceError(
                f"boundary corner at {datum.corners[0]} is not a multiple of pi"
            )
    genera: list[int] = []
    for component in nx.connected_components(surface.component_graph()):
        vertices = sum(1 for d in classes if d.corners[0][0] in component)
        edges = sum(
            1 for first, _ in surface.pairings if first[0] in component
        ) + sum(
            len(c.edges) for c in surface.boundary if c.edges[0][0] in component
        )
        faces = sum(1 for p in surface.polygons if p.label in component)
        circles = sum(1 for c in surface.boundary if c.edges[0][0] in component)
        chi = vertices - edges + faces
        genera.append((2 - chi - circles) // 2)
    data = SurfaceData(
        tuple(classes),
        tuple(sorted(genera)),
        sum(2 - 2 * g for g in genera) - len(surface.boundary),
        len(surface.boundary),
    )
    if _LOGGER.isEnabledFor(logging.DEBUG):
        _LOGGER.debug(
            "Surface: genera %s, orders %s, %d circles",
            data.genera,
            data.orders,
            data.circles,
        )
    return data


class _Workspace:
    """Mutable copy of a surface used while cutting and regluing."""

    def __init__(self, surface: TranslationSurface) -> None:
        self.polygons: dict[str, list[Point2]] = {
            p.label: list(p.vertices) for p in surface.polygons
        }
        self.partners = surface.partners()
        self.circles: dict[str, list[HalfEdge]] = {
            c.name: list(c.edges) for c in surface.boundary
        }

    def _remap(self, rule: Mapping[HalfEdge, HalfEdge]) -> None:
        def move(half_edge: HalfEdge) -> HalfEdge:
            return rule.get(half_edge, half_edge)

        self.partners = {move(a): move(b) for a, b in self.partners.items()}
        self.circles = {name: [move(h) for h in edges] for name, edges in self.circles.items()}

    def pair(self, first: HalfEdge, second: HalfEdge) -> None:
        self.partners[first] = second
        self.partners[second] = first

    def _insert(self, half_edge: HalfEdge, position: Point2) -> None:
        label, index = half_edge
        vertices = self.polygons[label]
        n = len(vertices)
        self.polygons[label] = vertices[: index + 1] + [position] + vertices[index + 1 :]
        self._remap({(label, k): (label, k + 1) for k in range(index + 1, n)})

    def split_edge(self, half_edge: HalfEdge, position: Point2) -> None:
        """Subdivide an edge at an interior point and its partner to match."""
        label, index = half_edge
        start = self.polygons[label][index]
        vector = sub(self.polygons[label][(index + 1) % len(self.polygons[label])], start)
        offset = sub(position, start)
        ratio = offset[0] / vector[0] if vector[0] else offset[1] / vector[1]
        partner = self.partners.pop(half_edge, None)
        if partner is not None:
            self.partners.pop(partner)
        self._insert(half_edge, position)
        if partner is None:
            for edges in self.circles.values():
                if half_edge in edges:
                    at = edges.index(half_edge)
                    edges.insert(at + 1, (label, index + 1))
            return
        if partner[0] == label and partner[1] > index:
            partner = (label, partner[1] + 1)
        # keep track of our halves across the partner's insertion
        mine = [(label, index), (label, index + 1)]
        other_label, other_index = partner
        other_start = self.polygons[other_label][other_index]
        other_vector = neg(vector)
        self._insert(partner, add(other_start, scale(other_vector, 1 - ratio)))
        if other_label == label:
            mine = [(label, k + 1) if k > other_index else (label, k) for _, k in mine]
        self.pair(mine[0], (other_label, other_index + 1))
        self.pair(mine[1], (other_label, other_index))

    def surface(self) -> TranslationSurface:
        polygons = tuple(Polygon(label, tuple(v)) for label, v in self.polygons.items())
        pairs = sorted(
            {tuple(sorted((a, b))) for a, b in self.partners.items()}  # type: ignore[misc]
        )
        circles = tuple(Circle(name, tuple(edges)) for name, edges in self.circles.items())
        return TranslationSurface(polygons, tuple(pairs), circles)


@dataclass(frozen=True)
class Slit:
    polygon: str
    start: Point2
    end: Point2

    @property
    def vector(self) -> Vector:
        return sub(self.end, self.start)


def _chord(vertices: list[Point2], slit: Slit) -> tuple[Fraction, Fraction] | None:
    """Parameters where the slit's line leaves a convex polygon, when the
    open slit lies inside it. Endpoints may sit on the boundary."""
    direction = slit.vector
    low: Fraction | None = None
    high: Fraction | None = None
    n = len(vertices)
    for i in range(n):
        edge = sub(vertices[(i + 1) % n], vertices[i])
        base = cross(edge, sub(slit.start, vertices[i]))
        rate = cross(edge, direction)
        if rate == 0:
            if base <= 0:
                return None
            continue
        bound = -base / rate
        if rate > 0:
            low = bound if low is None else max(low, bound)
        else:
            high = bound if high is None else min(high, bound)
    if low is None or high is None or not (low <= 0 and high >= 1):
        return None
    return low, high


def _locate(work: _Workspace, slit: Slit) -> tuple[str, tuple[Fraction, Fraction]]:
    names = [
        name
        for name in work.polygons
        if name == slit.polygon or name.startswith(slit.polygon + "_")
    ]
    for name in names:
        vertices = work.polygons[name]
        if not Polygon(name, tuple(vertices)).convex:
            raise InvalidSlit(f"polygon {name} holding a slit is not convex")
        found = _chord(vertices, slit)
        if found is not None:
            return name, found
    raise InvalidSlit(f"slit {slit.start}->{slit.end} is not inside {slit.polygon}")


def _vertex_index(vertices: list[Point2], position: Point2) -> int | None:
    for index, vertex in enumerate(vertices):
        if vertex == position:
            return index
    return None


def _cut(work: _Workspace, slit: Slit, tag: str) -> tuple[HalfEdge, HalfEdge]:
    """Cut the holding polygon along the slit's chord; returns the slit's
    lower and upper edges, still unpaired."""
    label, (low, high) = _locate(work, slit)
    direction = slit.vector
    entry = add(slit.start, scale(direction, low))
    exit_ = add(slit.start, scale(direction, high))
    for position in (entry, exit_):
        vertices = work.polygons[label]
        if _vertex_index(vertices, position) is None:
            n = len(vertices)
            for i in range(n):
                a, b = vertices[i], vertices[(i + 1) % n]
                if cross(sub(b, a), sub(position, a)) == 0 and min(a[0], b[0]) <= position[
                    0
                ] <= max(a[0], b[0]) and min(a[1], b[1]) <= position[1] <= max(a[1], b[1]):
                    work.split_edge((label, i), position)
                    break

    vertices = work.polygons[label]
    n = len(vertices)
    ix = _vertex_index(vertices, entry)
    iy = _vertex_index(vertices, exit_)
    if ix is None or iy is None:
        raise InvalidSlit(f"chord of the slit does not end on {label}")
    # an endpoint on the boundary leaves no extension segment on its side
    head = [slit.end] if slit.end != exit_ else []
    tail = [slit.start] if slit.start != entry else []
    right_count = (iy - ix) % n + 1
    left_count = (ix - iy) % n + 1
    right = [vertices[(ix + k) % n] for k in range(right_count)] + head + tail
    left = [vertices[(iy + k) % n] for k in range(left_count)] + tail + head
    right_label, left_label = f"{label}_{tag}r", f"{label}_{tag}l"
    rule: dict[HalfEdge, HalfEdge] = {}
    for k in range(right_count - 1):
        rule[(label, (ix + k) % n)] = (right_label, k)
    for k in range(left_count - 1):
        rule[(label, (iy + k) % n)] = (left_label, k)
    del work.polygons[label]
    work.polygons[right_label] = right
    work.polygons[left_label] = left
    work._remap(rule)  # pylint: disable=protected-access
    r, m = right_count - 1, left_count - 1
    right_slit, left_slit = r + len(head), m + len(tail)
    if head:
        work.pair((right_label, r), (left_label, left_slit + 1))
    if tail:
        work.pair((right_label, right_slit + 1), (left_label, m))
    return (right_label, right_slit), (left_label, left_slit)


def _on_segment(p: Point2, a: Point2, b: Point2) -> bool:
    return (
        cross(sub(b, a), sub(p, a)) == 0
        and min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
        and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
    )


def _surface_point(
    surface: TranslationSurface, classes: Mapping[HalfEdge, int], slit: Slit, position: Point2
) -> tuple[object, ...]:
    """A key equal for positions that are the same point of the surface."""
    polygon = surface.polygon(slit.polygon)
    for index, vertex in enumerate(polygon.vertices):
        if vertex == position:
            return ("corner", classes[(polygon.label, index)])
    partners = surface.partners()
    n = len(polygon)
    for index in range(n):
        start = polygon.vertices[index]
        if _on_segment(position, start, polygon.vertices[(index + 1) % n]):
            offset = sub(position, start)
            names = {((polygon.label, index), offset)}
            partner = partners.get((polygon.label, index))
            if partner is not None:
                names.add((partner, sub(offset, polygon.edge(index))))
            return ("edge", frozenset(names))
    return ("inside", polygon.label, position)


def slit_smoothing(
    surface: TranslationSurface, first: Slit, second: Slit, cross_glue: bool = True
) -> TranslationSurface:
    """Cut two equal parallel slits and reglue them crosswise.

    Each slit lies in one convex polygon; its endpoints may be interior
    points, points on an edge or polygon corners, so cone points and marked
    points can be used. The two starts become one point whose order is the
    sum of their orders plus one, and the same holds for the two ends. With
    ``cross_glue`` False each slit is reglued to itself, which only
    subdivides the polygons.
    """
    if first.vector == (0, 0) or second.vector == (0, 0):
        raise DegenerateSlit("slit of length zero")
    if first.vector != second.vector:
        raise UnequalVectors(f"slit vectors {first.vector} and {second.vector} differ")
    if first.polygon == second.polygon and (
        any(_on_segment(p, first.start, first.end) for p in (second.start, second.end))
        or any(_on_segment(p, second.start, second.end) for p in (first.start, first.end))
    ):
        raise OverlappingSlits("slits share points")
    if first.polygon == second.polygon and cross(
        first.vector, sub(second.start, first.start)
    ) == 0:
        raise InvalidSlit("slits on one line in one polygon")
    _check_closed(surface)
    classes = {
        corner: number
        for number, datum in enumerate(_vertex_classes(surface))
        for corner in datum.corners
    }
    endpoints = {
        _surface_point(surface, classes, slit, position)
        for slit in (first, second)
        for position in (slit.start, slit.end)
    }
    if len(endpoints) < 4:
        raise OverlappingSlits("slit endpoints meet at one point of the surface")
    work = _Workspace(surface)
    lower_one, upper_one = _cut(work, first, "a")
    lower_two, upper_two = _cut(work, second, "b")
    if cross_glue:
        work.pair(upper_one, lower_two)
        work.pair(upper_two, lower_one)
    else:
        work.pair(upper_one, lower_one)
        work.pair(upper_two, lower_two)
    result = work.surface()
    _LOGGER.debug("Slit smoothing (cross=%s) gives %d polygons", cross_glue, len(result.polygons))
    return result


def disjoint_union(first: TranslationSurface, second: TranslationSurface) -> TranslationSurface:
    return TranslationSurface(
        first.polygons + second.polygons,
        first.pairings + second.pairings,
        first.boundary + second.boundary,
    )


def _straight(surface: TranslationSurface, name: str) -> Vector:
    edges = surface.circle(name).edges
    direction = surface.vector(edges[0])
    for half_edge in edges[1:]:
        vector = surface.vector(half_edge)
        parallel = cross(direction, vector) == 0
        if not parallel or vector[0] * direction[0] + vector[1] * direction[1] <= 0:
            raise FlatSurfaceError(f"boundary circle {name} is not a straight geodesic")
    return surface.holonomy(name)


def plumb_cylinder(
    first: TranslationSurface,
    alpha: str,
    second: TranslationSurface | None,
    beta: str,
    height: Fraction,
    twist: Fraction = Fraction(0),
) -> TranslationSurface:
    """Glue circle ``alpha`` to circle ``beta`` through a flat cylinder.

    ``second`` None means both circles lie on ``first``.
    """
    surface = first if second is None else disjoint_union(first, second)
    if height <= 0:
        raise FlatSurfaceError(f"cylinder height {height} is not positive")
    if alpha == beta:
        raise InvalidPairing("a circle cannot be plumbed to itself")
    w = _straight(surface, alpha)
    v = _straight(surface, beta)
    width = rational_length(w)
    other = rational_length(v)
    if width != other:
        raise WidthMismatch(f"circles {alpha} and {beta} have widths {width} and {other}")
    if v != neg(w):
        raise UnequalVectors(f"circles {alpha} and {beta} are not opposite")

    rotated = (w[1], -w[0])
    lift = add(scale(rotated, height / width), scale(w, twist / width))
    alpha_edges = surface.circle(alpha).edges
    beta_edges = surface.circle(beta).edges
    corner: Point2 = (Fraction(0), Fraction(0))
    vertices = [corner]
    for half_edge in reversed(alpha_edges):
        corner = add(corner, neg(surface.vector(half_edge)))
        vertices.append(corner)
    corner = add(corner, lift)
    vertices.append(corner)
    for half_edge in reversed(beta_edges):
        corner = add(corner, neg(surface.vector(half_edge)))
        vertices.append(corner)
    label = f"cyl_{alpha}_{beta}"
    cylinder = Polygon(label, tuple(vertices))

    k, m = len(alpha_edges), len(beta_edges)
    pairs = list(surface.pairings)
    for offset, half_edge in enumerate(reversed(alpha_edges)):
        pairs.append((half_edge, (label, offset)))
    pairs.append(((label, k), (label, k + m + 1)))
    for offset, half_edge in enumerate(reversed(beta_edges)):
        pairs.append((half_edge, (label, k + 1 + offset)))
    circles = tuple(c for c in surface.boundary if c.name not in (alpha, beta))
    result = TranslationSurface(surface.polygons + (cylinder,), tuple(pairs), circles)
    _LOGGER.debug("Plumbed %s to %s: width %s, height %s", alpha, beta, width, height)
    return result

