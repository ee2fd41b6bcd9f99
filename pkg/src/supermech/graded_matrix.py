"""Matrices of superfunctions with row and column parities."""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass

import sympy as sp

from .coordinates import CoordinateSystem, Parity
from .errors import CoordinateMismatchError, SingularBodyError
from .logging import get_logger, log_pipeline
from .scalar import is_zero, normalize
from .superfunction import SuperFunction

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class GradedMatrix:
    cs: CoordinateSystem
    rows: tuple[tuple[SuperFunction, ...], ...]
    row_parities: tuple[Parity, ...]
    col_parities: tuple[Parity, ...]

    __hash__ = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if len(self.rows) != len(self.row_parities):
            raise ValueError("row parity count does not match the number of rows")
        for row in self.rows:
            if len(row) != len(self.col_parities):
                raise ValueError("column parity count does not match the row length")
            for entry in row:
                if entry.cs != self.cs:
                    raise CoordinateMismatchError("matrix entries over different charts")

    @classmethod
    def build(
        cls,
        cs: CoordinateSystem,
        row_parities: Sequence[Parity],
        col_parities: Sequence[Parity],
        entry: Callable[[int, int], SuperFunction],
    ) -> GradedMatrix:
        rows = tuple(
            tuple(entry(i, j) for j in range(len(col_parities)))
            for i in range(len(row_parities))
        )
        return cls(cs, rows, tuple(row_parities), tuple(col_parities))

    @classmethod
    def identity(cls, cs: CoordinateSystem, parities: Sequence[Parity]) -> GradedMatrix:
        one = SuperFunction.constant(cs, 1)
        zero = SuperFunction.zero(cs)
        return cls.build(cs, parities, parities, lambda i, j: one if i == j else zero)

    @classmethod
    def from_scalars(
        cls,
        cs: CoordinateSystem,
        matrix: sp.Matrix,
        row_parities: Sequence[Parity],
        col_parities: Sequence[Parity],
    ) -> GradedMatrix:
        return cls.build(
            cs,
            row_parities,
            col_parities,
            lambda i, j: SuperFunction.constant(cs, matrix[i, j]),
        )

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.row_parities), len(self.col_parities)

    def __getitem__(self, index: tuple[int, int]) -> SuperFunction:
        i, j = index
        return self.rows[i][j]

    def body(self) -> sp.Matrix:
        return sp.Matrix([[entry.body for entry in row] for row in self.rows])

    def nilpotent_part(self) -> GradedMatrix:
        return GradedMatrix(
            self.cs,
            tuple(tuple(entry.soul for entry in row) for row in self.rows),
            self.row_parities,
            self.col_parities,
        )

    def is_invertible(self) -> bool:
        n_rows, n_cols = self.shape
        if n_rows != n_cols:
            return False
        if n_rows == 0:
            return True
        return not is_zero(self.body().det(method="berkowitz"))

    def body_rank(self) -> int:
        if 0 in self.shape:
            return 0
        return self.body().rank(iszerofunc=is_zero, simplify=False)

    def is_zero(self) -> bool:
        return all(entry.is_zero() for row in self.rows for entry in row)

    def is_identity(self) -> bool:
        n_rows, n_cols = self.shape
        if n_rows != n_cols:
            return False
        return all(
            (entry - 1 if i == j else entry).is_zero()
            for i, row in enumerate(self.rows)
            for j, entry in enumerate(row)
        )

    def transpose(self) -> GradedMatrix:
        return GradedMatrix.build(
            self.cs, self.col_parities, self.row_parities, lambda i, j: self.rows[j][i]
        )

    def __add__(self, other: GradedMatrix) -> GradedMatrix:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return GradedMatrix.build(
            self.cs,
            self.row_parities,
            self.col_parities,
            lambda i, j: self.rows[i][j] + other.rows[i][j],
        )

    def __sub__(self, other: GradedMatrix) -> GradedMatrix:
        return self + other.scale(-1)

    def scale(self, factor: int | sp.Expr | SuperFunction) -> GradedMatrix:
        return GradedMatrix.build(
            self.cs,
            self.row_parities,
            self.col_parities,
            lambda i, j: factor * self.rows[i][j],
        )

    def __matmul__(self, other: GradedMatrix) -> GradedMatrix:
        _, k = self.shape
        k2, _ = other.shape
        if k != k2:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        zero = SuperFunction.zero(self.cs)

        def entry(i: int, j: int) -> SuperFunction:
            total = zero
            for t in range(k):
                left, right = self.rows[i][t], other.rows[t][j]
                if left.is_zero() or right.is_zero():
                    continue
                total = total + left * right
            return total

        return GradedMatrix.build(self.cs, self.row_parities, other.col_parities, entry)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GradedMatrix):
            return NotImplemented
        if self.shape != other.shape or self.cs != other.cs:
            return False
        return (self - other).is_zero()

    def format_rows(self) -> list[list[str]]:
        return [[str(entry) for entry in row] for row in self.rows]


def matrix_invert(a: GradedMatrix) -> GradedMatrix:
    """Inverse via body inverse and a Neumann series on the nilpotent part.

    A = B + N with B the body matrix; A⁻¹ = Σ_k (−B⁻¹N)^k B⁻¹, and the
    series stops once a power of B⁻¹N vanishes.
    """
    n_rows, n_cols = a.shape
    if n_rows != n_cols:
        raise SingularBodyError(f"non-square matrix of shape {a.shape}")
    body = a.body()
    if n_rows and is_zero(body.det(method="berkowitz")):
        raise SingularBodyError("body matrix is singular")
    body_inverse = body.inv(method="LU").applyfunc(normalize) if n_rows else body
    b_inv = GradedMatrix.from_scalars(a.cs, body_inverse, a.col_parities, a.row_parities)
    step = (b_inv @ a.nilpotent_part()).scale(-1)
    result = b_inv
    term = b_inv
    for order in range(1, a.cs.n_odd + 1):
        term = step @ term
        if term.is_zero():
            break
        result = result + term
        log_pipeline(logger, "graded_matrix.neumann_term", order=order, size=n_rows)
    return result
