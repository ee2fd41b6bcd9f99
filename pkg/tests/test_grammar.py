"""Tests for supermech.grammar module."""

from __future__ import annotations

import pytest
import sympy as sp

from supermech.errors import ModelError, ModelSyntaxError, UnknownIdentifierError
from supermech.grammar import parse_expression
from supermech.scalar import symbol
from supermech.superfunction import SuperFunction
from tests.factories import base, coords

CS = base(1, 2)
q, th1, th2 = coords(CS, "q1", "th1", "th2")


class TestParseExpression:
    def test_polynomial(self) -> None:
        assert parse_expression("q1^2 + 2*th1*th2", CS) == q * q + 2 * th1 * th2

    def test_precedence_and_unary_minus(self) -> None:
        assert parse_expression("-q1 + 2^3*q1", CS) == 7 * q
        assert parse_expression("-(q1 - 1)", CS) == 1 - q

    def test_rational_coefficients(self) -> None:
        value = parse_expression("q1/2 - th1*th2/3", CS)
        assert value.body == symbol("q1") / 2
        assert value.coefficient((0, 1)) == sp.Rational(-1, 3)

    def test_odd_generators_anticommute(self) -> None:
        assert parse_expression("th2*th1 + th1*th2", CS).is_zero()

    def test_elementary_function(self) -> None:
        value = parse_expression("sin(q1)", CS)
        assert value.body == sp.sin(symbol("q1"))
        assert value.soul.is_zero()

    def test_function_of_nilpotent_argument(self) -> None:
        value = parse_expression("exp(th1*th2)", CS)
        assert value == SuperFunction.constant(CS, 1) + th1 * th2

    def test_resolver(self) -> None:
        value = parse_expression("k*q1", CS, resolve=lambda token: 3 * q if str(token) == "k" else None)
        assert value == 3 * q * q


class TestErrors:
    def test_empty(self) -> None:
        with pytest.raises(ModelSyntaxError, match="empty expression"):
            parse_expression("   ", CS)

    def test_unexpected_end(self) -> None:
        with pytest.raises(ModelSyntaxError) as exc_info:
            parse_expression("q1 + ", CS)
        assert exc_info.value.message == "unexpected end of expression"

    def test_unexpected_character(self) -> None:
        with pytest.raises(ModelSyntaxError) as exc_info:
            parse_expression("q1 $ 2", CS)
        assert exc_info.value.column == 4
        assert "'$'" in exc_info.value.message

    def test_unknown_identifier_position(self) -> None:
        with pytest.raises(UnknownIdentifierError) as exc_info:
            parse_expression("q1 + bar", CS, line=3, column_offset=10)
        error = exc_info.value
        assert (error.name, error.line, error.column) == ("bar", 3, 16)
        assert str(error) == "line 3, column 16: unknown identifier 'bar'"

    def test_unknown_function(self) -> None:
        with pytest.raises(UnknownIdentifierError):
            parse_expression("tan(q1)", CS)

    @pytest.mark.parametrize("text", ["q1^th1", "q1^(1/2)", "q1^q1"])
    def test_exponent_must_be_integer(self, text: str) -> None:
        with pytest.raises(ModelError, match="exponents must be integer constants"):
            parse_expression(text, CS)
