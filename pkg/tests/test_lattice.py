"""Exact integer linear algebra: Smith normal form, integral solving and
membership in presented abelian groups.

The random suites are seeded so failures reproduce; entries stay small so
brute-force cross-checks finish quickly.
"""

import random

import pytest

from twistcalc.exceptions import DimensionMismatch
from twistcalc.lattice import (
    GroupElement,
    GroupPresentation,
    IntMatrix,
    determinant,
    element_is_zero,
    element_order,
    smith_normal_form,
    solve_integral,
)


def make_matrix(rng: random.Random, rows: int, cols: int, bound: int = 6) -> IntMatrix:
    return IntMatrix.from_rows(
        [[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)]
    )


def assert_smith_form(matrix: IntMatrix) -> None:
    snf = smith_normal_form(matrix)
    assert snf.U @ matrix @ snf.V == snf.S
    assert abs(determinant(snf.U)) == 1
    assert abs(determinant(snf.V)) == 1
    for i in range(snf.S.rows):
        for j in range(snf.S.cols):
            if i != j:
                assert snf.S[i, j] == 0
    invariants = snf.invariants
    assert all(d >= 0 for d in invariants)
    nonzero = [d for d in invariants if d]
    assert invariants[: len(nonzero)] == tuple(nonzero)
    for smaller, larger in zip(nonzero, nonzero[1:]):
        assert larger % smaller == 0


def test_classic_smith_form():
    matrix = IntMatrix.from_rows([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert smith_normal_form(matrix).invariants == (2, 6, 12)
    assert determinant(matrix) == -144
    assert_smith_form(matrix)


def test_smith_form_of_zero_and_rectangular_matrices():
    assert smith_normal_form(IntMatrix.zeros(2, 3)).invariants == (0, 0)
    snf = smith_normal_form(IntMatrix.from_rows([[2, 4], [4, 8], [0, 6]]))
    assert snf.invariants == (2, 6)
    assert snf.rank == 2


def test_entries_stay_exact_beyond_machine_integers():
    big = 2**80
    matrix = IntMatrix.from_rows([[big, 0], [0, 3 * big]])
    assert smith_normal_form(matrix).invariants == (big, 3 * big)
    assert solve_integral(matrix, (big, 6 * big)).particular == (1, 2)


@pytest.mark.parametrize("seed", range(5))
def test_random_smith_forms(seed):
    rng = random.Random(seed)
    for _ in range(100):
        rows, cols = rng.randint(1, 4), rng.randint(1, 4)
        assert_smith_form(make_matrix(rng, rows, cols))


def test_solve_integral():
    matrix = IntMatrix.from_rows([[2, 0], [0, 3]])
    solution = solve_integral(matrix, (4, 9))
    assert solution.particular == (2, 3)
    assert solution.kernel == ()
    assert not solve_integral(IntMatrix.from_rows([[2]]), (3,)).solvable


def test_solve_integral_reports_kernel():
    matrix = IntMatrix.from_rows([[1, -1, 0], [0, 1, -1]])
    solution = solve_integral(matrix, (2, 3))
    assert solution.particular is not None
    assert matrix.apply(solution.particular) == (2, 3)
    assert len(solution.kernel) == 1
    assert matrix.apply(solution.kernel[0]) == (0, 0)
    assert abs(solution.kernel[0][0]) == 1


@pytest.mark.parametrize("seed", range(4))
def test_random_systems_agree_with_their_solutions(seed):
    rng = random.Random(100 + seed)
    for _ in range(50):
        matrix = make_matrix(rng, rng.randint(1, 4), rng.randint(1, 4), bound=4)
        x = tuple(rng.randint(-5, 5) for _ in range(matrix.cols))
        solution = solve_integral(matrix, matrix.apply(x))
        assert solution.particular is not None
        assert matrix.apply(solution.particular) == matrix.apply(x)
        for vector in solution.kernel:
            assert matrix.apply(vector) == (0,) * matrix.rows


def test_element_order():
    cyclic = GroupPresentation(1, ((4,),))
    assert element_order(cyclic, GroupElement((2,))) == 2
    assert element_order(cyclic, GroupElement((1,))) == 4
    assert element_order(cyclic, GroupElement((0,))) == 1
    free = GroupPresentation(2, ((2, 0),))
    assert element_order(free, GroupElement((0, 1))) is None
    assert element_order(free, GroupElement((1, 0))) == 2


def test_element_is_zero():
    group = GroupPresentation(2, ((2, 0), (0, 3)))
    assert element_is_zero(group, GroupElement((4, 6)))
    assert not element_is_zero(group, GroupElement((1, 0)))
    assert element_is_zero(GroupPresentation(0), GroupElement(()))


@pytest.mark.parametrize("seed", range(4))
def test_membership_against_explicit_combinations(seed):
    rng = random.Random(200 + seed)
    for _ in range(50):
        rank = rng.randint(1, 3)
        relations = tuple(
            tuple(2 * rng.randint(-3, 3) for _ in range(rank))
            for _ in range(rng.randint(1, 3))
        )
        group = GroupPresentation(rank, relations)
        factors = [rng.randint(-3, 3) for _ in relations]
        inside = tuple(
            sum(f * relation[i] for f, relation in zip(factors, relations))
            for i in range(rank)
        )
        assert element_is_zero(group, GroupElement(inside))
        # every relation is even, so an odd coordinate never lies in the lattice
        outside = (inside[0] + 1,) + inside[1:]
        assert not element_is_zero(group, GroupElement(outside))


def test_dimension_checks():
    with pytest.raises(DimensionMismatch):
        IntMatrix(2, 2, (1, 2, 3))
    with pytest.raises(DimensionMismatch):
        IntMatrix.from_rows([[1, 2], [3]])
    with pytest.raises(DimensionMismatch):
        solve_integral(IntMatrix.identity(2), (1,))
    with pytest.raises(DimensionMismatch):
        GroupPresentation(2, ((1,),))
    with pytest.raises(DimensionMismatch):
        IntMatrix.identity(2) @ IntMatrix.zeros(3, 1)
