"""Exact integer linear algebra.

Smith normal form with unimodular transforms, integral solving of linear
systems and membership in finitely presented abelian groups. Everything
runs on numpy object arrays so entries stay arbitrary-precision Python ints.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from math import gcd, lcm

import numpy as np
import numpy.typing as npt

from .exceptions import DimensionMismatch
from .typedefs import IntVector

_LOGGER = logging.getLogger(__name__)

ObjectArray = npt.NDArray[np.object_]


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: IntVector

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatch(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix"
            )

    @classmethod
    def from_rows(cls, rows: list[list[int]] | tuple[IntVector, ...]) -> IntMatrix:
        if not rows:
            raise DimensionMismatch("matrix needs at least one row")
        width = len(rows[0])
        if any(len(row) != width for row in rows):
            raise DimensionMismatch("ragged rows")
        return cls(len(rows), width, tuple(int(x) for row in rows for x in row))

    @classmethod
    def from_array(cls, array: ObjectArray) -> IntMatrix:
        rows, cols = array.shape
        return cls(rows, cols, tuple(int(x) for x in array.reshape(-1)))

    @classmethod
    def identity(cls, size: int) -> IntMatrix:
        return cls.from_array(np.eye(size, dtype=object))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    def array(self) -> ObjectArray:
        return np.array(self.entries, dtype=object).reshape(self.rows, self.cols)

    def row(self, index: int) -> IntVector:
        return self.entries[index * self.cols : (index + 1) * self.cols]

    def column(self, index: int) -> IntVector:
        return self.entries[index :: self.cols]

    def as_rows(self) -> tuple[IntVector, ...]:
        return tuple(self.row(i) for i in range(self.rows))

    def __getitem__(self, key: tuple[int, int]) -> int:
        i, j = key
        return self.entries[i * self.cols + j]

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise DimensionMismatch(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        return IntMatrix.from_array(self.array() @ other.array())

    def apply(self, vector: IntVector) -> IntVector:
        if len(vector) != self.cols:
            raise DimensionMismatch(
                f"vector of length {len(vector)} for {self.cols} columns"
            )
        product = self.array() @ np.array(vector, dtype=object)
        return tuple(int(x) for x in product)

    def transpose(self) -> IntMatrix:
        return IntMatrix.from_array(self.array().T.copy())

    def diagonal(self) -> IntVector:
        return tuple(self[i, i] for i in range(min(self.rows, self.cols)))


@dataclass(frozen=True)
class SNFDecomposition:
    """U @ M @ V == S with d_1 | d_2 | ... on the diagonal of S."""

    U: IntMatrix
    S: IntMatrix
    V: IntMatrix

    @property
    def invariants(self) -> IntVector:
        return self.S.diagonal()

    @property
    def rank(self) -> int:
        return sum(1 for d in self.invariants if d != 0)


@dataclass(frozen=True)
class SolutionSet:
    particular: IntVector | None
    kernel: tuple[IntVector, ...]

    @property
    def solvable(self) -> bool:
        return self.particular is not None


@dataclass(frozen=True)
class GroupPresentation:
    rank: int
    relations: tuple[IntVector, ...] = ()

    def __post_init__(self) -> None:
        for relation in self.relations:
            if len(relation) != self.rank:
                raise DimensionMismatch(
                    f"relation {relation} does not have {self.rank} coordinates"
                )

    def relation_matrix(self) -> IntMatrix:
        if not self.relations:
            return IntMatrix.zeros(1, max(self.rank, 1))
        return IntMatrix.from_rows(self.relations)


@dataclass(frozen=True)
class GroupElement:
    coordinates: IntVector

    def __add__(self, other: GroupElement) -> GroupElement:
        if len(self.coordinates) != len(other.coordinates):
            raise DimensionMismatch("elements of different groups")
        return GroupElement(
            tuple(a + b for a, b in zip(self.coordinates, other.coordinates))
        )

    def __neg__(self) -> GroupElement:
        return GroupElement(tuple(-a for a in self.coordinates))

    def __sub__(self, other: GroupElement) -> GroupElement:
        return self + (-other)

    def scaled(self, factor: int) -> GroupElement:
        return GroupElement(tuple(factor * a for a in self.coordinates))


def _pivot(a: ObjectArray, t: int) -> tuple[int, int] | None:
    best: tuple[int, int] | None = None
    best_value = 0
    rows, cols = a.shape
    for i in range(t, rows):
        for j in range(t, cols):
            value = abs(a[i, j])
            if value and (best is None or value < best_value):
                best, best_value = (i, j), value
    return best


def smith_normal_form(matrix: IntMatrix) -> SNFDecomposition:
    """Deterministic Smith normal form.

    Pivot is the entry of minimal absolute value in the remaining block,
    first in row-major order. The diagonal ends up nonnegative.
    """
    a = matrix.array().copy()
    rows, cols = a.shape
    u = np.eye(rows, dtype=object)
    v = np.eye(cols, dtype=object)

    for t in range(min(rows, cols)):
        while True:
            pivot = _pivot(a, t)
            if pivot is None:
                break
            i, j = pivot
            if i != t:
                a[[t, i]] = a[[i, t]]
                u[[t, i]] = u[[i, t]]
            if j != t:
                a[:, [t, j]] = a[:, [j, t]]
                v[:, [t, j]] = v[:, [j, t]]

            clean = True
            for i in range(t + 1, rows):
                if a[i, t]:
                    q = a[i, t] // a[t, t]
                    a[i] -= q * a[t]
                    u[i] -= q * u[t]
                    clean = clean and a[i, t] == 0
            for j in range(t + 1, cols):
                if a[t, j]:
                    q = a[t, j] // a[t, t]
                    a[:, j] -= q * a[:, t]
                    v[:, j] -= q * v[:, t]
                    clean = clean and a[t, j] == 0
            if not clean:
                continue

            offender = next(
                (
                    i
                    for i in range(t + 1, rows)
                    for j in range(t + 1, cols)
                    if a[i, j] % a[t, t]
                ),
                None,
            )
            if offender is None:
                break
            a[t] += a[offender]
            u[t] += u[offender]

        if a[t, t] < 0:
            a[t] = -a[t]
            u[t] = -u[t]

    decomposition = SNFDecomposition(
        IntMatrix.from_array(u), IntMatrix.from_array(a), IntMatrix.from_array(v)
    )
    if _LOGGER.isEnabledFor(logging.DEBUG):
        _LOGGER.debug(
            "SNF of %sx%s matrix: invariants %s",
            rows,
            cols,
            decomposition.invariants,
        )
    return decomposition


def determinant(matrix: IntMatrix) -> int:
    """Fraction-free Bareiss elimination."""
    if matrix.rows != matrix.cols:
        raise DimensionMismatch("determinant of a non-square matrix")
    a = [list(matrix.row(i)) for i in range(matrix.rows)]
    size = matrix.rows
    sign, previous = 1, 1
    for k in range(size - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, size) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // previous
        previous = a[k][k]
    return sign * a[size - 1][size - 1]


def solve_integral(matrix: IntMatrix, vector: IntVector) -> SolutionSet:
    """All integer x with matrix @ x == vector, as particular + kernel span."""
    if len(vector) != matrix.rows:
        raise DimensionMismatch(
            f"right-hand side of length {len(vector)} for {matrix.rows} rows"
        )
    snf = smith_normal_form(matrix)
    w = snf.U.apply(vector)
    invariants = snf.invariants
    rank = snf.rank
    kernel = tuple(snf.V.column(j) for j in range(rank, matrix.cols))

    y = [0] * matrix.cols
    for i, value in enumerate(w):
        if i < rank:
            if value % invariants[i]:
                _LOGGER.debug("No integral solution: %s not divisible by %s", value, invariants[i])
                return SolutionSet(None, kernel)
            y[i] = value // invariants[i]
        elif value:
            _LOGGER.debug("No solution: row %s of the reduced system is 0 = %s", i, value)
            return SolutionSet(None, kernel)
    particular = snf.V.apply(tuple(y))
    return SolutionSet(particular, kernel)


def _reduced(presentation: GroupPresentation, element: GroupElement) -> tuple[IntVector, IntVector]:
    if len(element.coordinates) != presentation.rank:
        raise DimensionMismatch(
            f"element {element.coordinates} is not in a rank {presentation.rank} group"
        )
    snf = smith_normal_form(presentation.relation_matrix())
    y = tuple(
        int(x)
        for x in np.array(element.coordinates, dtype=object) @ snf.V.array()
    )
    invariants = snf.invariants + (0,) * (presentation.rank - len(snf.invariants))
    return y, invariants


def element_is_zero(presentation: GroupPresentation, element: GroupElement) -> bool:
    """True iff the element lies in the relation lattice."""
    if presentation.rank == 0:
        return True
    y, invariants = _reduced(presentation, element)
    return all(
        (value % d == 0) if d else value == 0 for value, d in zip(y, invariants)
    )


def element_order(presentation: GroupPresentation, element: GroupElement) -> int | None:
    """Order of the element, None when it has infinite order."""
    if presentation.rank == 0:
        return 1
    y, invariants = _reduced(presentation, element)
    order = 1
    for value, d in zip(y, invariants):
        if d == 0:
            if value:
                return None
            continue
        order = lcm(order, d // gcd(d, value))
    return order
