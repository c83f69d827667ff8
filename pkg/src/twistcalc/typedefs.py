from enum import Enum
from fractions import Fraction
from typing import TypeAlias, TypeVar

IntVector: TypeAlias = tuple[int, ...]
Point2: TypeAlias = tuple[Fraction, Fraction]
HalfEdge: TypeAlias = tuple[str, int]

T = TypeVar("T")


class Truth(Enum):
    """Kleene three-valued truth used by every oracle query."""

    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"

    @classmethod
    def of(cls, value: bool) -> "Truth":
        return cls.TRUE if value else cls.FALSE

    def __and__(self, other: "Truth") -> "Truth":
        if Truth.FALSE in (self, other):
            return Truth.FALSE
        if Truth.UNKNOWN in (self, other):
            return Truth.UNKNOWN
        return Truth.TRUE

    def __or__(self, other: "Truth") -> "Truth":
        if Truth.TRUE in (self, other):
            return Truth.TRUE
        if Truth.UNKNOWN in (self, other):
            return Truth.UNKNOWN
        return Truth.FALSE

    def __invert__(self) -> "Truth":
        if self is Truth.UNKNOWN:
            return self
        return Truth.FALSE if self is Truth.TRUE else Truth.TRUE

    @property
    def decided(self) -> bool:
        return self is not Truth.UNKNOWN

    @classmethod
    def all(cls, values: "list[Truth] | tuple[Truth, ...]") -> "Truth":
        result = cls.TRUE
        for value in values:
            result = result & value
        return result

    @classmethod
    def any(cls, values: "list[Truth] | tuple[Truth, ...]") -> "Truth":
        result = cls.FALSE
        for value in values:
            result = result | value
        return result
