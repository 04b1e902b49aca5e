from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest

from src.errors import InputError
from src.exactmath import (
    IntMatrix,
    cone_contains,
    frac_part,
    format_rational,
    parse_rational,
    rational_rank,
    rref_rows,
    smith_normal_form,
    solve_square,
)


def test_parse_and_format_rationals_are_exact() -> None:
    assert parse_rational("3/6") == Fraction(1, 2)
    assert parse_rational(" 4 ") == Fraction(4)
    assert format_rational(Fraction(4, 2)) == "2"
    assert format_rational(Fraction(-3, 9)) == "-1/3"


def test_parse_rational_rejects_floats_and_garbage() -> None:
    with pytest.raises(InputError):
        parse_rational("one half")
    with pytest.raises(InputError):
        parse_rational("1/0")


def test_frac_part_lands_in_unit_interval() -> None:
    assert frac_part(Fraction(-1, 2)) == Fraction(1, 2)
    assert frac_part(Fraction(7, 3)) == Fraction(1, 3)
    assert frac_part(-2) == 0


def test_snf_of_weighted_block_has_expected_divisors() -> None:
    snf = smith_normal_form(IntMatrix.from_rows([[2, 4], [6, 8]]))

    assert snf.diagonal == (2, 4)
    assert snf.largest_divisor == 4


def test_snf_transforms_reproduce_the_diagonal() -> None:
    matrix = IntMatrix.from_rows([[3, 1, 4], [1, 5, 9], [2, 6, 5]])
    snf = smith_normal_form(matrix)

    product = snf.left.matmul(matrix).matmul(snf.right)
    for i in range(3):
        for j in range(3):
            expected = snf.diagonal[i] if i == j else 0
            assert product[i, j] == expected
    for first, second in zip(snf.diagonal, snf.diagonal[1:]):
        assert second % first == 0
    assert abs(snf.left.determinant()) == 1
    assert abs(snf.right.determinant()) == 1


def test_rank_solve_and_rref_agree() -> None:
    assert rational_rank([[1, 2], [2, 4]]) == 1
    assert solve_square([[2, 0], [0, 4]], [1, 1]) == (Fraction(1, 2), Fraction(1, 4))

    rows, pivots = rref_rows([[1, 1, 0], [2, 2, 0]], 3)
    assert pivots == (0,)
    assert rows == [[Fraction(1), Fraction(1), Fraction(0)]]


def test_cone_membership_returns_checkable_certificates() -> None:
    generators = [[1, 0], [1, 1]]

    inside = cone_contains(generators, [2, 1])
    outside = cone_contains(generators, [0, 1])

    assert inside.contains is True
    assert inside.certifies(generators, [2, 1])
    assert outside.contains is False
    assert outside.certifies(generators, [0, 1])


def test_empty_cone_contains_only_zero() -> None:
    assert cone_contains([], [1]).contains is False
    assert cone_contains([], [0]).contains is True


def test_cone_contains_rejects_dimension_mismatch() -> None:
    with pytest.raises(ValueError):
        cone_contains([[1, 2, 3]], [1, 2])


def test_snf_round_trips_on_random_matrices() -> None:
    rng = random.Random(20240601)

    for _ in range(200):
        rows, cols = rng.randint(1, 4), rng.randint(1, 4)
        matrix = IntMatrix.from_rows(
            [[rng.randint(-6, 6) for _ in range(cols)] for _ in range(rows)]
        )

        snf = smith_normal_form(matrix)

        product = snf.left.matmul(matrix).matmul(snf.right)
        assert len(snf.diagonal) == min(rows, cols)
        for i in range(rows):
            for j in range(cols):
                expected = snf.diagonal[i] if i == j else 0
                assert product[i, j] == expected
        nonzero = [value for value in snf.diagonal if value]
        assert all(value > 0 for value in nonzero)
        assert list(snf.diagonal) == nonzero + [0] * (len(snf.diagonal) - len(nonzero))
        for first, second in zip(nonzero, nonzero[1:]):
            assert second % first == 0
        assert len(nonzero) == rational_rank(matrix.to_rows())
        assert abs(snf.left.determinant()) == 1
        assert abs(snf.right.determinant()) == 1
        if rows == cols:
            assert math.prod(snf.diagonal) == abs(matrix.determinant())
