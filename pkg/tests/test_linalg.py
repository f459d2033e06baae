"""Exact linear algebra helpers."""

from fractions import Fraction

import pytest

from natops.linalg import (
    IncrementalSolver,
    mat_inv,
    nullspace,
    rank,
    rref,
    solve_unique,
)


def test_rank_and_nullspace():
    m = [[1, 2, 3], [2, 4, 6], [0, 1, 1]]
    assert rank(m) == 2
    null = nullspace(m)
    assert len(null) == 1
    v = null[0]
    for row in m:
        assert sum(Fraction(a) * b for a, b in zip(row, v)) == 0


def test_rank_with_fractions():
    m = [[Fraction(1, 2), Fraction(1, 3)], [Fraction(3, 2), Fraction(2)]]
    assert rank(m) == 2
    assert rank([[Fraction(1, 2), Fraction(1, 3)],
                 [Fraction(3, 2), Fraction(1)]]) == 1


def test_rref_pivots():
    m, pivots = rref([[0, 2, 1], [0, 0, 3]])
    assert pivots == [1, 2]
    assert m[0][1] == 1 and m[1][2] == 1


def test_solve_unique():
    rows = [[1, 1], [1, -1], [2, 0]]
    sol = solve_unique(rows, [3, 1, 4])
    assert sol == [Fraction(2), Fraction(1)]
    assert solve_unique(rows, [3, 1, 5]) is None  # inconsistent
    with pytest.raises(ValueError):
        solve_unique([[1, 1]], [1])  # underdetermined


def test_mat_inv_round_trip():
    a = [[Fraction(2), Fraction(1)], [Fraction(5), Fraction(3)]]
    inv = mat_inv(a)
    prod = [
        [sum(a[i][k] * inv[k][j] for k in range(2)) for j in range(2)]
        for i in range(2)
    ]
    assert prod == [[1, 0], [0, 1]]
    with pytest.raises(ZeroDivisionError):
        mat_inv([[1, 2], [2, 4]])


def test_incremental_solver():
    s = IncrementalSolver(2)
    assert s.solution() is None
    s.add([1, 1], 3)
    s.add([2, 2], 6)  # dependent: no rank gain
    assert s.rank == 1
    s.add([1, -1], 1)
    assert s.rank == 2
    assert s.solution() == [Fraction(2), Fraction(1)]
    with pytest.raises(ArithmeticError):
        s.add([1, 1], 4)  # inconsistent with the solved system


def test_empty_matrix_nullspace():
    basis = nullspace([], ncols=3)
    assert len(basis) == 3
