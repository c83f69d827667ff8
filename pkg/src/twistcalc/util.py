"""Small text and serialization helpers shared by the document and report layers."""

from __future__ import annotations

from collections.abc import Mapping
from enum import Enum
from fractions import Fraction
from typing import Any

INFINITE_ORDER = "inf"


def parse_fraction(text: str) -> Fraction:
    """Exact rational from ``p``, ``-p`` or ``p/q``; no decimals."""
    if "." in text or "e" in text.lower():
        raise ValueError(f"{text!r} is not an exact rational")
    return Fraction(text)


def format_fraction(value: Fraction | int) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_order(text: str) -> int | None:
    if text == INFINITE_ORDER:
        return None
    return int(text)


def format_order(value: int | None) -> str:
    return INFINITE_ORDER if value is None else str(value)


def jsonable(value: Any) -> Any:
    """Report-friendly copy: integers and fractions as strings, enums as their values."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (int, Fraction)):
        return format_fraction(value)
    if isinstance(value, str):
        return value
    if isinstance(value, Mapping):
        return {str(jsonable(key)): jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = [jsonable(item) for item in value]
        return sorted(items) if isinstance(value, (set, frozenset)) else items
    return str(value)
