"""Tests for supermech.graded_matrix module."""

from __future__ import annotations

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from supermech.coordinates import Parity
from supermech.errors import SingularBodyError
from supermech.graded_matrix import GradedMatrix, matrix_invert
from supermech.superfunction import SuperFunction
from tests.factories import base, coords
from tests.strategies import rationals, superfunctions

CS = base(1, 2)
q, th1, th2 = coords(CS, "q1", "th1", "th2")
EVEN, ODD = Parity.EVEN, Parity.ODD


def _matrix(rows: list[list[SuperFunction | int]], parities: list[Parity]) -> GradedMatrix:
    return GradedMatrix.build(
        CS,
        parities,
        parities,
        lambda i, j: rows[i][j] if isinstance(rows[i][j], SuperFunction) else SuperFunction.constant(CS, rows[i][j]),
    )


class TestMatrixInvert:
    def test_nilpotent_off_diagonal(self) -> None:
        a = _matrix([[1, th1], [th2, 1]], [EVEN, ODD])
        inverse = matrix_invert(a)
        assert (a @ inverse).is_identity()
        assert (inverse @ a).is_identity()
        assert inverse[1, 1] == 1 - th1 * th2

    def test_symbolic_body(self) -> None:
        a = _matrix([[q, 0], [0, 2]], [EVEN, EVEN])
        assert matrix_invert(a)[0, 0] == SuperFunction.constant(CS, 1 / sp.Symbol("q1"))

    def test_singular_body(self) -> None:
        a = _matrix([[th1 * th2, 0], [0, 1]], [EVEN, EVEN])
        assert not a.is_invertible()
        with pytest.raises(SingularBodyError):
            matrix_invert(a)

    def test_non_square(self) -> None:
        a = GradedMatrix.build(CS, [EVEN], [EVEN, EVEN], lambda i, j: SuperFunction.constant(CS, 1))
        with pytest.raises(SingularBodyError):
            matrix_invert(a)

    @given(st.data())
    def test_round_trip(self, data: st.DataObject) -> None:
        parities = data.draw(st.lists(st.sampled_from([EVEN, ODD]), min_size=1, max_size=3))
        diagonal = [data.draw(rationals) for _ in parities]

        def entry(i: int, j: int) -> SuperFunction:
            soul = data.draw(superfunctions(CS, Parity((parities[i] + parities[j]) % 2))).soul
            return soul + diagonal[i] if i == j else soul

        a = GradedMatrix.build(CS, parities, parities, entry)
        assert (a @ matrix_invert(a)).is_identity()


class TestStructure:
    def test_body_and_nilpotent_part(self) -> None:
        a = _matrix([[q + th1 * th2, th1], [th2, 3]], [EVEN, ODD])
        assert a.body() == sp.Matrix([[sp.Symbol("q1"), 0], [0, 3]])
        assert a.nilpotent_part()[0, 0] == th1 * th2

    def test_body_rank(self) -> None:
        a = _matrix([[1, 2], [2, 4]], [EVEN, EVEN])
        assert a.body_rank() == 1

    def test_transpose_shape(self) -> None:
        a = GradedMatrix.build(CS, [EVEN], [EVEN, ODD], lambda i, j: SuperFunction.constant(CS, 0))
        assert a.transpose().shape == (2, 1)

    def test_identity_and_equality(self) -> None:
        identity = GradedMatrix.identity(CS, [EVEN, ODD])
        assert identity.is_identity()
        assert identity == _matrix([[1, 0], [0, 1]], [EVEN, ODD])
        assert (identity - identity).is_zero()

    def test_multiply_shape_mismatch(self) -> None:
        a = GradedMatrix.identity(CS, [EVEN, ODD])
        b = GradedMatrix.identity(CS, [EVEN])
        with pytest.raises(ValueError):
            a @ b
