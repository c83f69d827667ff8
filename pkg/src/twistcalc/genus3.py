"""Pointed genus-three curves with at most two nodes against P(4)^hyp and P(4)^odd.

The case conditions live in ``genus3_cases.yml``; this module matches a
curve to its case, binds the case's roles and symbols to the curve's
vertices and points, and evaluates the condition trees with the component
models.
"""

from __future__ import annotations

import logging
import re
from collections.abc import Mapping
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Any

import voluptuous as vol
import yaml

from .const import CANONICAL_SYMBOL, CATALOG_PATH, StrEnum
from .curve import Edge, StableCurve
from .divisor import AxiomKind, ComponentModel, DivisorClass, RationalModel
from .exceptions import (
    CatalogError,
    TwistcalcError,
    UnsupportedTopology,
    WrongGenus,
    WrongSignature,
)
from .typedefs import Truth

_LOGGER = logging.getLogger(__name__)


class CaseLabel(StrEnum):
    I = "I"  # noqa: E741
    II = "II"
    III = "III"
    IV = "IV"
    V = "V"
    VI = "VI"
    VII = "VII"
    VIII = "VIII"
    IX = "IX"
    X = "X"
    XI = "XI"
    XII = "XII"
    XIII = "XIII"


_ATOM = re.compile(r"^\s*(?P<role>[A-Za-z]\w*)\s*:\s*(?P<body>.+?)\s*$")


@dataclass(frozen=True)
class Atom:
    role: str
    kind: AxiomKind
    left: str = ""
    right: str = ""
    points: tuple[str, ...] = ()
    negated: bool = False


def parse_atom(text: str) -> Atom:
    match = _ATOM.match(text)
    if match is None:
        raise ValueError(f"condition {text!r} has no role")
    role, body = match.group("role"), match.group("body")
    words = body.split()
    if words[0] in (AxiomKind.CONJUGATE, AxiomKind.RESIDUE):
        if len(words) != 3:
            raise ValueError(f"{words[0]} takes two points in {text!r}")
        return Atom(role, AxiomKind(words[0]), points=(words[1], words[2]))
    negated = "!~" in body
    left, _, right = body.partition("!~" if negated else "~")
    if not right.strip():
        raise ValueError(f"condition {text!r} is not a relation")
    for side in (left, right):
        DivisorClass.parse(role, side)
    return Atom(role, AxiomKind.EQUIV, left.strip(), right.strip(), negated=negated)


def _condition(value: Any) -> Any:
    if value is False:
        return value
    if isinstance(value, str):
        try:
            parse_atom(value)
        except ValueError as e:
            raise vol.Invalid(str(e)) from e
        return value
    if isinstance(value, dict) and len(value) == 1:
        ((key, inner),) = value.items()
        if key in ("all", "any") and isinstance(inner, list) and inner:
            for item in inner:
                _condition(item)
            return value
        if key == "not":
            _condition(inner)
            return value
    raise vol.Invalid(f"not a condition: {value!r}")


ROLE_SCHEMA = vol.Schema(
    {
        vol.Required("genus"): vol.All(int, vol.Range(min=0)),
        vol.Optional("nodal", default=False): bool,
        vol.Required("symbols"): [str],
    }
)

CASE_SCHEMA = vol.Schema(
    {
        vol.Required("nodes"): vol.In([1, 2]),
        vol.Required("pseudocompact"): bool,
        vol.Required("roles"): {str: ROLE_SCHEMA},
        vol.Required("hyp"): _condition,
        vol.Required("odd"): _condition,
    }
)

CATALOG_SCHEMA = vol.Schema(
    {vol.Required("cases"): {vol.In([str(label) for label in CaseLabel]): CASE_SCHEMA}}
)


def _atoms(condition: Any) -> list[str]:
    if condition is False:
        return []
    if isinstance(condition, str):
        return [condition]
    ((key, inner),) = condition.items()
    if key == "not":
        return _atoms(inner)
    return [atom for item in inner for atom in _atoms(item)]


def validate_catalog(data: Any) -> list[str]:
    """Problems with catalog data; empty when it is usable."""
    try:
        validated = CATALOG_SCHEMA(data)
    except vol.Invalid as e:
        errors = e.errors if isinstance(e, vol.MultipleInvalid) else [e]
        return [f"{'/'.join(str(p) for p in error.path)}: {error.msg}" for error in errors]
    problems: list[str] = []
    cases = validated["cases"]
    for label in CaseLabel:
        if label not in cases:
            problems.append(f"case {label} is missing")
    for label, case in cases.items():
        roles = case["roles"]
        for which in ("hyp", "odd"):
            for text in _atoms(case[which]):
                atom = parse_atom(text)
                if atom.role not in roles:
                    problems.append(f"{label}/{which}: unknown role {atom.role} in {text!r}")
                    continue
                symbols = set(roles[atom.role]["symbols"])
                used = set(atom.points)
                for side in (atom.left, atom.right):
                    if side:
                        used |= DivisorClass.parse(atom.role, side).points
                for symbol in sorted(used - symbols - {CANONICAL_SYMBOL}):
                    problems.append(f"{label}/{which}: {symbol} is not a symbol of {atom.role}")
    return problems


@lru_cache(maxsize=4)
def load_catalog(path: Path = CATALOG_PATH) -> dict[CaseLabel, dict[str, Any]]:
    data = yaml.safe_load(path.read_text(encoding="utf-8"))
    problems = validate_catalog(data)
    if problems:
        raise CatalogError("; ".join(problems))
    validated = CATALOG_SCHEMA(data)
    return {CaseLabel(label): case for label, case in validated["cases"].items()}


@dataclass(frozen=True)
class CaseMatch:
    label: CaseLabel
    roles: dict[str, str]
    names: dict[str, dict[str, str]]


@dataclass(frozen=True)
class CatalogVerdict:
    case: CaseLabel
    in_hyp: Truth
    in_odd: Truth
    conditions_used: tuple[str, ...] = ()


def _side(edge: Edge, vertex: str) -> str:
    return edge.point_names[edge.ends.index(vertex)]


def _branches(edge: Edge, prefix: str) -> dict[str, str]:
    first, second = edge.point_names
    return {f"{prefix}'": first, f"{prefix}''": second}


def identify_case(curve: StableCurve) -> CaseMatch:
    if curve.genus != 3:
        raise WrongGenus(f"arithmetic genus {curve.genus}, expected 3")
    if len(curve.legs) != 1 or curve.legs[0].order != 4:
        raise WrongSignature("expected a single marked point of order 4")
    z = curve.legs[0]
    home = z.vertex
    genus = {vertex.label: vertex.genus for vertex in curve.vertices}
    loops = [edge for edge in curve.edges if edge.is_loop]
    links = [edge for edge in curve.edges if not edge.is_loop]
    if not 1 <= len(curve.edges) <= 2:
        raise UnsupportedTopology(f"{len(curve.edges)} nodes")

    def unsupported() -> UnsupportedTopology:
        return UnsupportedTopology(
            f"genera {sorted(genus.values())} with {len(loops)} self-nodes "
            f"and {len(links)} other nodes"
        )

    if len(curve.edges) == 1:
        (edge,) = curve.edges
        if edge.is_loop:
            if genus[home] != 2:
                raise unsupported()
            return CaseMatch(
                CaseLabel.III, {"C": home}, {"C": {"z": z.label} | _branches(edge, "q")}
            )
        ends = sorted(edge.ends, key=lambda label: genus[label])
        if [genus[label] for label in ends] != [1, 2]:
            raise unsupported()
        first, second = ends
        label = CaseLabel.I if home == first else CaseLabel.II
        names = {"C1": {"q": _side(edge, first)}, "C2": {"q": _side(edge, second)}}
        names["C1" if home == first else "C2"]["z"] = z.label
        return CaseMatch(label, {"C1": first, "C2": second}, names)

    if len(loops) == 2:
        if len({edge.ends[0] for edge in loops}) != 1 or genus[home] != 1:
            raise unsupported()
        first, second = loops
        return CaseMatch(
            CaseLabel.XIII,
            {"C": home},
            {"C": {"z": z.label} | _branches(first, "q1") | _branches(second, "q2")},
        )

    if len(loops) == 1:
        (loop,) = loops
        (link,) = links
        looped = loop.ends[0]
        other = link.other(link.ends.index(looped))
        pair = (genus[looped], genus[other])
        if pair == (1, 1):
            label = CaseLabel.VII if home == looped else CaseLabel.VIII
        elif pair == (0, 2):
            label = CaseLabel.IX if home == looped else CaseLabel.X
        else:
            raise unsupported()
        names = {
            "C1": _branches(loop, "q1") | {"q2": _side(link, looped)},
            "C2": {"q2": _side(link, other)},
        }
        if label == CaseLabel.IX:
            names["C1"] = {"q2": _side(link, looped)}
        names["C1" if home == looped else "C2"]["z"] = z.label
        return CaseMatch(label, {"C1": looped, "C2": other}, names)

    first, second = links
    if set(first.ends) == set(second.ends):
        other = first.other(first.ends.index(home))
        if (genus[home], genus[other]) == (1, 1):
            label = CaseLabel.XI
        elif (genus[home], genus[other]) == (0, 2):
            label = CaseLabel.XII
        else:
            raise unsupported()
        return CaseMatch(
            label,
            {"C1": home, "C2": other},
            {
                "C1": {"z": z.label, "q1": _side(first, home), "q2": _side(second, home)},
                "C2": {"q1": _side(first, other), "q2": _side(second, other)},
            },
        )

    (middle,) = set(first.ends) & set(second.ends)
    left = first.other(first.ends.index(middle))
    right = second.other(second.ends.index(middle))
    if genus[middle] == 0 and home == middle and {genus[left], genus[right]} == {1, 2}:
        one, two = (first, second) if genus[left] == 1 else (second, first)
        c1 = one.other(one.ends.index(middle))
        c2 = two.other(two.ends.index(middle))
        return CaseMatch(
            CaseLabel.IV,
            {"C0": middle, "C1": c1, "C2": c2},
            {
                "C0": {"z": z.label, "q1": _side(one, middle), "q2": _side(two, middle)},
                "C1": {"q1": _side(one, c1)},
                "C2": {"q2": _side(two, c2)},
            },
        )
    if genus[middle] == genus[left] == genus[right] == 1:
        if home == middle:
            return CaseMatch(
                CaseLabel.VI,
                {"C1": left, "C2": middle, "C3": right},
                {
                    "C1": {"q1": _side(first, left)},
                    "C2": {
                        "z": z.label,
                        "q1": _side(first, middle),
                        "q2": _side(second, middle),
                    },
                    "C3": {"q2": _side(second, right)},
                },
            )
        near, far = (first, second) if home == left else (second, first)
        end = far.other(far.ends.index(middle))
        return CaseMatch(
            CaseLabel.V,
            {"C1": home, "C2": middle, "C3": end},
            {
                "C1": {"z": z.label, "q1": _side(near, home)},
                "C2": {"q1": _side(near, middle), "q2": _side(far, middle)},
                "C3": {"q2": _side(far, end)},
            },
        )
    raise unsupported()


def applies(curve: StableCurve) -> bool:
    try:
        identify_case(curve)
    except TwistcalcError:
        return False
    return True


class _Evaluator:
    def __init__(
        self,
        curve: StableCurve,
        match: CaseMatch,
        case: Mapping[str, Any],
        models: Mapping[str, ComponentModel],
    ) -> None:
        self.curve = curve
        self.match = match
        self.case = case
        self.models = models
        self.used: list[str] = []

    def _model(self, role: str) -> ComponentModel | None:
        vertex = self.match.roles[role]
        model = self.models.get(vertex)
        if model is None and self.curve.vertex(vertex).genus == 0:
            model = RationalModel(vertex, self.curve.marked_points(vertex))
        declared = self.case["roles"][role]
        if model is None or model.genus != declared["genus"]:
            return None
        return model

    def atom(self, text: str) -> Truth:
        atom = parse_atom(text)
        model = self._model(atom.role)
        if model is None:
            kind = "the nodal group model" if self.case["roles"][atom.role]["nodal"] else (
                f"a genus {self.case['roles'][atom.role]['genus']} model"
            )
            self.used.append(f"{text}: unknown, {atom.role} needs {kind}")
            return Truth.UNKNOWN
        vertex = self.match.roles[atom.role]
        names = self.match.names[atom.role]
        if atom.kind == AxiomKind.EQUIV:
            left = DivisorClass.parse(vertex, atom.left).renamed(names)
            right = DivisorClass.parse(vertex, atom.right).renamed(names)
            result = model.linear_equiv(left, right)
            if atom.negated:
                result = ~result
        else:
            result = model.holds(atom.kind, tuple(names[p] for p in atom.points))
        self.used.append(f"{text}: {result.value}")
        return result

    def evaluate(self, condition: Any) -> Truth:
        if condition is False:
            self.used.append("false")
            return Truth.FALSE
        if isinstance(condition, str):
            return self.atom(condition)
        ((key, inner),) = condition.items()
        if key == "not":
            return ~self.evaluate(inner)
        values = [self.evaluate(item) for item in inner]
        return Truth.all(values) if key == "all" else Truth.any(values)


def classify(curve: StableCurve, models: Mapping[str, ComponentModel]) -> CatalogVerdict:
    match = identify_case(curve)
    case = load_catalog()[match.label]
    evaluator = _Evaluator(curve, match, case, models)
    evaluator.used.append("hyp")
    in_hyp = evaluator.evaluate(case["hyp"])
    evaluator.used.append("odd")
    in_odd = evaluator.evaluate(case["odd"])
    _LOGGER.debug(
        "Case %s: hyp %s, odd %s", match.label, in_hyp.value, in_odd.value
    )
    return CatalogVerdict(
        match.label,
        in_hyp,
        in_odd,
        tuple(f"{match.label} {entry}" for entry in evaluator.used),
    )
