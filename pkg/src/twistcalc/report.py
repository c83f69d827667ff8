"""Reports for the command-line analyses.

Each command builds a plain dictionary from a parsed document; rendering
turns every exact number into a string and sorts keys, so identical
documents give byte-identical output.
"""

from __future__ import annotations

import json
import logging
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import options as analysis_options
from .const import (
    CONF_EFFECTIVE_SEARCH_BOUND,
    CONF_REFINED,
    CONF_SECOND_KIND,
    CONF_SEMISTABLE_SEARCH_LENGTH,
    CurveKind,
    ExitCode,
    Parity,
    Smoothable,
)
from .curve import StableCurve, classify_type, default_base_dimension, validate
from .document import CurveDocument
from .exceptions import CommandError, TailMinusOne
from .flat import (
    SurfaceData,
    TranslationSurface,
    area,
    plumb_cylinder,
    singularity_data,
    slit_smoothing,
)
from .genus3 import classify
from .spin import limit_spin, parity
from .strata import component_labels, stratum_dimension
from .twist import (
    classify_polarity,
    deficit,
    dimension_bound,
    refined_bound_applies,
    semistable_search,
    signature_of,
    smoothability_verdict,
    solve_twist,
)
from .typedefs import Truth
from .util import jsonable
from .weierstrass import chain_is_limit_weierstrass, generic_nonweierstrass

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class Report:
    command: str
    data: dict[str, Any]
    decided: bool = True
    diagnostics: tuple[str, ...] = field(default=())

    @property
    def exit_code(self) -> ExitCode:
        return ExitCode.DECIDED if self.decided else ExitCode.UNDECIDED

    def as_dict(self) -> dict[str, Any]:
        return jsonable(
            {
                "command": self.command,
                **self.data,
                "decided": self.decided,
                "diagnostics": list(self.diagnostics),
            }
        )

    def render(self, as_json: bool = False) -> str:
        payload = self.as_dict()
        if as_json:
            return json.dumps(payload, sort_keys=True, indent=2)
        return "\n".join(_flatten(payload))


def _flatten(value: Any, prefix: str = "") -> list[str]:
    if isinstance(value, Mapping):
        lines: list[str] = []
        for key in sorted(value):
            lines.extend(_flatten(value[key], f"{prefix}.{key}" if prefix else key))
        return lines or [f"{prefix}: {{}}"]
    if isinstance(value, list):
        if all(not isinstance(item, (Mapping, list)) for item in value):
            return [f"{prefix}: [{', '.join(str(item) for item in value)}]"]
        lines = []
        for index, item in enumerate(value):
            lines.extend(_flatten(item, f"{prefix}[{index}]"))
        return lines or [f"{prefix}: []"]
    return [f"{prefix}: {value}"]


def _curve_summary(curve: StableCurve) -> dict[str, Any]:
    ctype = classify_type(curve)
    return {
        "genus": curve.genus,
        "type": ctype.kind,
        "bridges": sorted(ctype.bridges),
        "loops": sorted(ctype.loops),
        "vertices": {v.label: v.genus for v in curve.vertices},
        "signature": [leg.order for leg in curve.legs],
    }


def _require_curve(document: CurveDocument) -> StableCurve:
    if not document.has_curve:
        raise CommandError("the document declares no curve")
    curve = document.curve()
    violations = validate(curve)
    if violations:
        raise CommandError("invalid curve: " + "; ".join(violations))
    return curve


def _twist_data(curve: StableCurve) -> dict[str, Any]:
    twist = solve_twist(curve)
    return {
        "deficit": dict(zip(curve.labels, deficit(curve))),
        "b": dict(zip(twist.vertices, twist.b)),
        "twists": {f"{name}.{side}": value for (name, side), value in twist.twists},
    }


def twist_report(document: CurveDocument, options: Mapping[str, Any]) -> Report:
    curve = _require_curve(document)
    data: dict[str, Any] = {"curve": _curve_summary(curve), **_twist_data(curve)}
    diagnostics: list[str] = []
    try:
        data["polarity"] = classify_polarity(curve, solve_twist(curve))
    except TailMinusOne as e:
        diagnostics.append(str(e))
    return Report("twist", data, True, tuple(diagnostics))


def check_report(document: CurveDocument, options: Mapping[str, Any]) -> Report:
    curve = _require_curve(document)
    models = document.models(options[CONF_EFFECTIVE_SEARCH_BOUND])
    verdict = smoothability_verdict(curve, models, document.signature)
    data: dict[str, Any] = {
        "curve": _curve_summary(curve),
        "status": verdict.status,
        "smoothable": verdict.smoothable,
        "criterion": verdict.criterion,
    }
    if classify_type(curve).kind == CurveKind.NON_PSEUDOCOMPACT:
        found = semistable_search(curve, models, options[CONF_SEMISTABLE_SEARCH_LENGTH])
        data["semistable_model"] = None if found is None else found[0]
    else:
        data.update(_twist_data(curve))
    return Report(
        "check", data, verdict.smoothable != Smoothable.INCONCLUSIVE, verdict.reasons
    )


def spin_report(document: CurveDocument, options: Mapping[str, Any]) -> Report:
    curve = _require_curve(document)
    models = document.models(options[CONF_EFFECTIVE_SEARCH_BOUND])
    spin = limit_spin(curve, options[CONF_SECOND_KIND])
    result = parity(spin, models)
    data = {
        "curve": _curve_summary(curve),
        "blown_up": list(spin.blown_up),
        "b": dict(zip(spin.curve.labels, spin.b)),
        "classes": {label: str(eta) for label, eta in spin.classes.items()},
        "total_degree": spin.total_degree,
        "h0": result.h0,
        "parity": result.parity,
        "determined": spin.determined,
        "components": component_labels(signature_of(curve)),
    }
    return Report("spin", data, result.parity != Parity.UNDECIDED, result.reasons)


def dim_report(
    document: CurveDocument, options: Mapping[str, Any], base_dimension: int | None = None
) -> Report:
    curve = _require_curve(document)
    signature = signature_of(curve)
    base = base_dimension
    if base is None:
        base = document.base_dimension
    if base is None:
        base = default_base_dimension(curve)
    models = document.models(options[CONF_EFFECTIVE_SEARCH_BOUND])
    applies = refined_bound_applies(curve, models)
    facts = {
        leg.label: generic_nonweierstrass(signature, index)
        for index, leg in enumerate(curve.legs)
    }
    data = {
        "curve": _curve_summary(curve),
        "base_dimension": base,
        "refined": options[CONF_REFINED],
        "bound": dimension_bound(base, curve.genus, options[CONF_REFINED]),
        "refined_condition": None if applies is None else applies.value,
        "stratum_dimension": stratum_dimension(signature),
        "projectivized_dimension": stratum_dimension(signature, projectivized=True),
        "components": component_labels(signature),
        "weierstrass": {
            label: {
                "status": fact.status,
                "criterion": fact.criterion,
                "hypotheses": list(fact.hypotheses),
            }
            for label, fact in facts.items()
        },
    }
    diagnostics: list[str] = []
    if applies is Truth.UNKNOWN:
        diagnostics.append("h0 on the holomorphic side is undecided")
    return Report("dim", data, True, tuple(diagnostics))


def genus3_report(document: CurveDocument, options: Mapping[str, Any]) -> Report:
    curve = _require_curve(document)
    verdict = classify(curve, document.models(options[CONF_EFFECTIVE_SEARCH_BOUND]))
    data = {
        "curve": _curve_summary(curve),
        "case": verdict.case,
        "hyp": verdict.in_hyp.value,
        "odd": verdict.in_odd.value,
        "conditions": list(verdict.conditions_used),
    }
    decided = verdict.in_hyp.decided and verdict.in_odd.decided
    return Report("genus3", data, decided)


def chain_report(document: CurveDocument, options: Mapping[str, Any]) -> Report:
    if document.chain is None:
        raise CommandError("the document declares no elliptic chain")
    result = chain_is_limit_weierstrass(document.chain)
    data = {
        "genus": document.chain.genus,
        "torsion": ["inf" if t is None else t for t in document.chain.torsion],
        "weierstrass": result.weierstrass,
        "witness": None if result.witness is None else list(result.witness),
    }
    return Report("chain", data)


def _surface_summary(surface: TranslationSurface, data: SurfaceData) -> dict[str, Any]:
    return {
        "polygons": len(surface.polygons),
        "genera": list(data.genera),
        "connected": data.connected,
        "orders": list(data.orders),
        "circles": data.circles,
        "euler_characteristic": data.euler_characteristic,
        "gauss_bonnet": data.gauss_bonnet(),
        "area": area(surface),
    }


def surface_report(document: CurveDocument, operation: str) -> Report:
    if not document.has_surface:
        raise CommandError("the document declares no polygons")
    surface = document.surface()
    before = _surface_summary(surface, singularity_data(surface))
    if operation == "data":
        return Report("surface data", {"surface": before})
    if operation == "slit":
        if len(document.slits) != 2:
            raise CommandError(f"slit smoothing needs two slits, found {len(document.slits)}")
        first, second = document.slits
        result = slit_smoothing(surface, first.slit, second.slit)
        after = _surface_summary(result, singularity_data(result))
        return Report(
            "surface slit",
            {"slits": [first.name, second.name], "before": before, "after": after},
        )
    if operation == "plumb":
        if not document.plumbings:
            raise CommandError("the document declares no plumbing")
        result = surface
        added = Fraction(0)
        for plumbing in document.plumbings:
            before_area = area(result)
            result = plumb_cylinder(
                result, plumbing.alpha, None, plumbing.beta, plumbing.height, plumbing.twist
            )
            added += area(result) - before_area
        after = _surface_summary(result, singularity_data(result))
        return Report(
            "surface plumb", {"before": before, "after": after, "added_area": added}
        )
    raise CommandError(f"unknown surface operation {operation!r}")


_COMMANDS: dict[str, Callable[[CurveDocument, Mapping[str, Any]], Report]] = {
    "check": check_report,
    "twist": twist_report,
    "spin": spin_report,
    "dim": dim_report,
    "genus3": genus3_report,
    "chain": chain_report,
}


def run(
    document: CurveDocument,
    command: str,
    operation: str | None = None,
    base_dimension: int | None = None,
    **options: Any,
) -> Report:
    """Run one analysis on a parsed document."""
    validated = analysis_options(**options)
    _LOGGER.debug("Running %s %s", command, operation or "")
    if command == "surface":
        return surface_report(document, operation or "data")
    if command == "dim":
        return dim_report(document, validated, base_dimension)
    try:
        handler = _COMMANDS[command]
    except KeyError as e:
        raise CommandError(f"unknown command {command!r}") from e
    return handler(document, validated)
