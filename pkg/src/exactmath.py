"""
exactmath.py
------------

Exact arithmetic substrate for the qtoric engine.

All rational quantities are ``fractions.Fraction`` values (always reduced,
positive denominator). Linear algebra over QQ/ZZ goes through sympy's
``DomainMatrix``; the helpers ``to_qq``/``from_qq`` are the only crossing points
between the two number types.

The module also carries the two integer/rational decision procedures the rest
of the pipeline leans on: a Smith normal form with unimodular transforms and an
exact-rational cone-membership test that returns a certificate either way.
"""
from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

from sympy.polys.domains import QQ, ZZ
from sympy.polys.matrices import DomainMatrix

from .errors import InputError

RationalLike = int | Fraction


def to_qq(value: RationalLike):
    """Convert an int/Fraction into a sympy ``QQ`` element."""
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def from_qq(value) -> Fraction:
    """Convert a sympy ``QQ``/``ZZ`` element back into a ``Fraction``."""
    numerator = getattr(value, "numerator", value)
    denominator = getattr(value, "denominator", 1)
    return Fraction(int(numerator), int(denominator))


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"p/q"``, ``"n"`` or an existing number into a ``Fraction``."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not an exact rational: {text!r}") from exc


def format_rational(value: RationalLike) -> str:
    """Render a rational as ``"p/q"`` (or ``"n"`` when integral)."""
    return str(Fraction(value))


def frac_part(value: RationalLike) -> Fraction:
    """Fractional part in [0, 1)."""
    value = Fraction(value)
    return value - math.floor(value)


def denominator_lcm(values: Iterable[RationalLike]) -> int:
    """Least common multiple of the denominators of ``values`` (1 when empty)."""
    result = 1
    for value in values:
        result = math.lcm(result, Fraction(value).denominator)
    return result


def dot(left: Sequence[RationalLike], right: Sequence[RationalLike]) -> Fraction:
    """Exact dot product of two equal-length vectors."""
    if len(left) != len(right):
        raise ValueError("dimension mismatch in dot product")
    return sum((Fraction(a) * Fraction(b) for a, b in zip(left, right)), Fraction(0))


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix stored row-major."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"entry count {len(self.entries)} does not match shape {self.rows}x{self.cols}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> IntMatrix:
        if not rows:
            return cls(0, 0, ())
        width = len(rows[0])
        if any(len(row) != width for row in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), width, tuple(int(value) for row in rows for value in row))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], height: int) -> IntMatrix:
        return cls.from_rows([[column[i] for column in columns] for i in range(height)])

    @classmethod
    def identity(cls, size: int) -> IntMatrix:
        return cls.from_rows([[int(i == j) for j in range(size)] for i in range(size)])

    def __getitem__(self, index: tuple[int, int]) -> int:
        i, j = index
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def select_columns(self, indices: Iterable[int]) -> IntMatrix:
        chosen = list(indices)
        return IntMatrix.from_rows([[self[i, j] for j in chosen] for i in range(self.rows)])

    def transpose(self) -> IntMatrix:
        return IntMatrix.from_rows([list(self.column(j)) for j in range(self.cols)])

    def matmul(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matrix product")
        return IntMatrix.from_rows(
            [
                [sum(self[i, k] * other[k, j] for k in range(self.cols)) for j in range(other.cols)]
                for i in range(self.rows)
            ]
        )

    def to_domain_matrix(self, domain=ZZ) -> DomainMatrix:
        return DomainMatrix(
            [[domain(value) for value in self.row(i)] for i in range(self.rows)],
            (self.rows, self.cols),
            domain,
        )

    def determinant(self) -> int:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        if self.rows == 0:
            return 1
        return int(self.to_domain_matrix().det())


def rational_matrix(rows: Sequence[Sequence[RationalLike]], width: int | None = None) -> DomainMatrix:
    """Build a QQ ``DomainMatrix`` from rational rows."""
    ncols = width if width is not None else (len(rows[0]) if rows else 0)
    return DomainMatrix(
        [[to_qq(value) for value in row] for row in rows], (len(rows), ncols), QQ
    )


def rational_rank(vectors: Sequence[Sequence[RationalLike]]) -> int:
    """Rank over QQ of a family of equal-length vectors."""
    if not vectors or not vectors[0]:
        return 0
    return rational_matrix(vectors).rank()


def solve_square(matrix: Sequence[Sequence[RationalLike]], rhs: Sequence[RationalLike]) -> tuple[Fraction, ...]:
    """Solve ``matrix @ x = rhs`` exactly for an invertible square ``matrix``."""
    size = len(matrix)
    if size == 0:
        return ()
    system = rational_matrix(matrix)
    column = rational_matrix([[value] for value in rhs], 1)
    solution = system.lu_solve(column)
    return tuple(from_qq(row[0]) for row in solution.to_list())


def rref_rows(rows: Sequence[Sequence[RationalLike]], width: int) -> tuple[list[list[Fraction]], tuple[int, ...]]:
    """Reduced row echelon form over QQ; returns the nonzero rows and pivot columns."""
    if not rows:
        return [], ()
    reduced, pivots = rational_matrix(rows, width).rref()
    dense = [[from_qq(value) for value in row] for row in reduced.to_list()]
    return dense[: len(pivots)], tuple(pivots)


@dataclass(frozen=True)
class SnfResult:
    """Smith normal form ``left @ M @ right = diag(diagonal)``."""

    diagonal: tuple[int, ...]
    left: IntMatrix
    right: IntMatrix

    @property
    def largest_divisor(self) -> int:
        nonzero = [value for value in self.diagonal if value]
        return nonzero[-1] if nonzero else 1


def smith_normal_form(matrix: IntMatrix) -> SnfResult:
    """Smith normal form with unimodular transforms.

    Pivots are chosen as the entry of smallest absolute value in the remaining
    block; a non-divisible leftover entry is folded back into the pivot row.
    """
    nrows, ncols = matrix.rows, matrix.cols
    a = matrix.to_rows()
    left = IntMatrix.identity(nrows).to_rows()
    right = IntMatrix.identity(ncols).to_rows()

    def swap_rows(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i: int, j: int) -> None:
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]

    def add_row(target: int, source: int, k: int) -> None:
        a[target] = [x + k * y for x, y in zip(a[target], a[source])]
        left[target] = [x + k * y for x, y in zip(left[target], left[source])]

    def add_col(target: int, source: int, k: int) -> None:
        for row in a:
            row[target] += k * row[source]
        for row in right:
            row[target] += k * row[source]

    for s in range(min(nrows, ncols)):
        while True:
            candidates = [
                (abs(a[i][j]), i, j)
                for i in range(s, nrows)
                for j in range(s, ncols)
                if a[i][j] != 0
            ]
            if not candidates:
                break
            _, pi, pj = min(candidates)
            swap_rows(s, pi)
            swap_cols(s, pj)

            settled = True
            for i in range(s + 1, nrows):
                if a[i][s]:
                    add_row(i, s, -(a[i][s] // a[s][s]))
                    settled = settled and a[i][s] == 0
            for j in range(s + 1, ncols):
                if a[s][j]:
                    add_col(j, s, -(a[s][j] // a[s][s]))
                    settled = settled and a[s][j] == 0
            if not settled:
                continue

            stray = next(
                (
                    i
                    for i in range(s + 1, nrows)
                    for j in range(s + 1, ncols)
                    if a[i][j] % a[s][s]
                ),
                None,
            )
            if stray is None:
                break
            add_row(s, stray, 1)

        if a[s][s] < 0:
            a[s] = [-x for x in a[s]]
            left[s] = [-x for x in left[s]]

    diagonal = tuple(a[k][k] for k in range(min(nrows, ncols)))
    return SnfResult(
        diagonal=diagonal,
        left=IntMatrix.from_rows(left) if nrows else IntMatrix(0, 0, ()),
        right=IntMatrix.from_rows(right) if ncols else IntMatrix(0, 0, ()),
    )


@dataclass(frozen=True)
class ConeMembership:
    """Outcome of an exact cone-membership test, with its certificate."""

    contains: bool
    coefficients: tuple[Fraction, ...] | None = None
    separator: tuple[Fraction, ...] | None = None

    def certifies(self, generators: Sequence[Sequence[RationalLike]], target: Sequence[RationalLike]) -> bool:
        """Verify the attached certificate exactly."""
        if self.contains:
            if self.coefficients is None or any(c < 0 for c in self.coefficients):
                return False
            combination = [
                sum((c * Fraction(g[k]) for c, g in zip(self.coefficients, generators)), Fraction(0))
                for k in range(len(target))
            ]
            return combination == [Fraction(t) for t in target]
        if self.separator is None:
            return False
        return all(dot(self.separator, g) >= 0 for g in generators) and dot(
            self.separator, target
        ) < 0


def cone_contains(
    generators: Sequence[Sequence[RationalLike]], target: Sequence[RationalLike]
) -> ConeMembership:
    """Decide ``target in Cone(generators)`` by an exact phase-one simplex.

    Feasibility of ``G c = target, c >= 0`` is tested with artificial slacks and
    Bland's rule. A positive phase-one optimum yields the dual vector ``y``; the
    separating functional is read off from the artificial reduced costs.
    """
    dim = len(target)
    for generator in generators:
        if len(generator) != dim:
            raise ValueError(
                f"dimension mismatch: generator of length {len(generator)} vs target {dim}"
            )

    k = len(generators)
    signs = [1 if Fraction(t) >= 0 else -1 for t in target]
    width = k + dim
    tableau = [
        [signs[r] * Fraction(generators[j][r]) for j in range(k)]
        + [Fraction(int(r == s)) for s in range(dim)]
        + [signs[r] * Fraction(target[r])]
        for r in range(dim)
    ]
    basis = [k + r for r in range(dim)]
    costs = [Fraction(0)] * k + [Fraction(1)] * dim

    def reduced_costs() -> list[Fraction]:
        return [
            costs[j] - sum((costs[basis[r]] * tableau[r][j] for r in range(dim)), Fraction(0))
            for j in range(width)
        ]

    while True:
        rc = reduced_costs()
        entering = next((j for j in range(width) if rc[j] < 0), None)
        if entering is None:
            break
        rows = [r for r in range(dim) if tableau[r][entering] > 0]
        # phase one is bounded below by zero, so a blocking row always exists
        leave = min(rows, key=lambda r: (tableau[r][-1] / tableau[r][entering], basis[r]))
        pivot = tableau[leave][entering]
        tableau[leave] = [value / pivot for value in tableau[leave]]
        for r in range(dim):
            if r != leave and tableau[r][entering]:
                factor = tableau[r][entering]
                tableau[r] = [x - factor * y for x, y in zip(tableau[r], tableau[leave])]
        basis[leave] = entering

    objective = sum((costs[basis[r]] * tableau[r][-1] for r in range(dim)), Fraction(0))
    if objective == 0:
        coefficients = [Fraction(0)] * k
        for r, var in enumerate(basis):
            if var < k:
                coefficients[var] = tableau[r][-1]
        return ConeMembership(contains=True, coefficients=tuple(coefficients))

    rc = reduced_costs()
    dual = [1 - rc[k + r] for r in range(dim)]
    separator = tuple(-signs[r] * dual[r] for r in range(dim))
    return ConeMembership(contains=False, separator=separator)
