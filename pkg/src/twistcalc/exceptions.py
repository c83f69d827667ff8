from dataclasses import dataclass


class TwistcalcError(Exception):
    """Base class for every error raised by twistcalc."""


# exact lattice
class DimensionMismatch(TwistcalcError):
    pass


# curves
class InvalidCurve(TwistcalcError):
    pass


class UnknownEdge(TwistcalcError):
    pass


class NotPseudocompact(TwistcalcError):
    pass


# divisors
class MixedComponents(TwistcalcError):
    pass


class UnknownPoint(TwistcalcError):
    pass


class InvalidAxiom(TwistcalcError):
    pass


class InconsistentTorsion(TwistcalcError):
    pass


class ModelMismatch(TwistcalcError):
    pass


# signatures
class OddSum(TwistcalcError):
    pass


class NegativeGenus(TwistcalcError):
    pass


class BadPartition(TwistcalcError):
    pass


class NotAPole(TwistcalcError):
    pass


class SignatureMismatch(TwistcalcError):
    pass


class InvalidGenus(TwistcalcError):
    pass


# twists and spin
class NoIntegralTwist(TwistcalcError):
    pass


class TailMinusOne(TwistcalcError):
    pass


class OddEntry(TwistcalcError):
    pass


# weierstrass and catalog
class BadIndex(TwistcalcError):
    pass


class UnsupportedTopology(TwistcalcError):
    pass


class WrongGenus(TwistcalcError):
    pass


class WrongSignature(TwistcalcError):
    pass


class CatalogError(TwistcalcError):
    """Case table data failed validation."""


# flat surfaces
class FlatSurfaceError(TwistcalcError):
    pass


class InvalidPairing(FlatSurfaceError):
    pass


class OpenSurface(FlatSurfaceError):
    pass


class OverlappingSlits(FlatSurfaceError):
    pass


class UnequalVectors(FlatSurfaceError):
    pass


class DegenerateSlit(UnequalVectors):
    pass


class InvalidSlit(FlatSurfaceError):
    pass


class WidthMismatch(FlatSurfaceError):
    pass


class NonRationalWidth(FlatSurfaceError):
    pass


# documents and commands
@dataclass(frozen=True)
class ParseIssue:
    line: int
    column: int
    message: str

    def __str__(self) -> str:
        return f"line {self.line}, column {self.column}: {self.message}"


class ParseErrors(TwistcalcError):
    def __init__(self, issues: tuple[ParseIssue, ...]) -> None:
        self.issues = issues
        super().__init__("; ".join(str(issue) for issue in issues))


class CommandError(TwistcalcError):
    pass
