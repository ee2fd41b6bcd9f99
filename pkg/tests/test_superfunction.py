"""Tests for supermech.superfunction module."""

from __future__ import annotations

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from supermech.coordinates import Parity
from supermech.errors import CoordinateMismatchError, NotInvertibleError, ParityError
from supermech.scalar import symbol
from supermech.superfunction import (
    SuperFunction,
    compose_scalar,
    format_superfunction,
    invert,
    left_derivative,
    merge_monomials,
)
from tests.factories import base, coords
from tests.strategies import homogeneous, invertible, superfunctions

CS = base(1, 3)
q, th1, th2, th3 = coords(CS, "q1", "th1", "th2", "th3")


class TestMonomials:
    def test_merge_sign(self) -> None:
        assert merge_monomials((1,), (0,)) == (-1, (0, 1))
        assert merge_monomials((0,), (1,)) == (1, (0, 1))

    def test_shared_generator(self) -> None:
        assert merge_monomials((0, 2), (2,)) is None


class TestArithmetic:
    def test_odd_generators_anticommute(self) -> None:
        assert th1 * th2 == -(th2 * th1)

    def test_odd_square_vanishes(self) -> None:
        assert (th1 * th1).is_zero()

    def test_body_and_soul(self) -> None:
        f = 2 * q + 3 + q * th1 * th2
        assert f.body == 2 * symbol("q1") + 3
        assert f.soul == q * th1 * th2

    def test_parity(self) -> None:
        assert (th1 * th2).parity is Parity.EVEN
        assert (q * th1).parity is Parity.ODD
        assert (th1 + th1 * th2).parity is None
        assert SuperFunction.zero(CS).parity is Parity.EVEN

    def test_parts(self) -> None:
        f = q + th1 + th1 * th2
        assert f.even_part == q + th1 * th2
        assert f.odd_part == th1

    def test_power(self) -> None:
        assert (1 + th1 * th2) ** 2 == 1 + 2 * th1 * th2
        assert (1 + th1 * th2) ** -1 == 1 - th1 * th2

    def test_division_by_zero_constant(self) -> None:
        with pytest.raises(NotInvertibleError):
            q / 0

    def test_chart_mismatch(self) -> None:
        other = SuperFunction.coordinate(base(1, 2), "q1")
        with pytest.raises(CoordinateMismatchError):
            q + other

    def test_equality_with_scalar(self) -> None:
        assert SuperFunction.constant(CS, 2) == 2

    def test_depends_on(self) -> None:
        f = q * th2
        assert f.depends_on("q1")
        assert f.depends_on("th2")
        assert not f.depends_on("th1")
        assert f.used_names() == frozenset({"q1", "th2"})


class TestLeftDerivative:
    def test_sign_follows_position(self) -> None:
        f = th1 * th2
        assert left_derivative(f, "th1") == th2
        assert left_derivative(f, "th2") == -th1

    def test_even_derivative(self) -> None:
        assert left_derivative(q**2 * th1, "q1") == 2 * q * th1

    @given(st.data())
    def test_odd_derivatives_anticommute(self, data: st.DataObject) -> None:
        f = data.draw(superfunctions(CS))
        a = data.draw(st.sampled_from(["th1", "th2", "th3"]))
        b = data.draw(st.sampled_from(["th1", "th2", "th3"]))
        total = left_derivative(left_derivative(f, a), b) + left_derivative(left_derivative(f, b), a)
        assert total.is_zero()

    @given(st.data())
    def test_leibniz(self, data: st.DataObject) -> None:
        pf, f = data.draw(homogeneous(CS))
        g = data.draw(superfunctions(CS))
        x = data.draw(st.sampled_from(CS.names))
        sign = -1 if CS.parity_of(x) is Parity.ODD and pf is Parity.ODD else 1
        assert left_derivative(f * g, x) == left_derivative(f, x) * g + sign * (f * left_derivative(g, x))


class TestInvert:
    def test_zero_body(self) -> None:
        with pytest.raises(NotInvertibleError):
            invert(th1 * th2)

    def test_example(self) -> None:
        assert invert(1 + th1 * th2) == 1 - th1 * th2

    def test_symbolic_body(self) -> None:
        f = q + th1 * th2
        assert f * invert(f) == 1

    @given(st.data())
    def test_round_trip(self, data: st.DataObject) -> None:
        f = data.draw(invertible(CS))
        assert f * invert(f) == 1
        assert invert(f) * f == 1


@given(st.data())
def test_super_commutativity(data: st.DataObject) -> None:
    pf, f = data.draw(homogeneous(CS))
    pg, g = data.draw(homogeneous(CS))
    sign = -1 if pf is Parity.ODD and pg is Parity.ODD else 1
    assert f * g == sign * (g * f)


@given(st.data())
def test_associativity(data: st.DataObject) -> None:
    f, g, h = (data.draw(superfunctions(CS)) for _ in range(3))
    assert (f * g) * h == f * (g * h)


class TestComposeScalar:
    def test_taylor_in_the_soul(self) -> None:
        x = symbol("x")
        result = compose_scalar(x**2, {x: q + th1 * th2}, CS)
        assert result == q * q + 2 * q * th1 * th2

    def test_exp_of_nilpotent(self) -> None:
        x = symbol("x")
        assert compose_scalar(sp.exp(x), {x: th1 * th2}, CS) == 1 + th1 * th2

    def test_odd_binding_rejected(self) -> None:
        x = symbol("x")
        with pytest.raises(ParityError):
            compose_scalar(x, {x: th1}, CS)


def test_format() -> None:
    assert format_superfunction(q / 2 - th1 * th2) == "q1/2 - th1*th2"
    assert format_superfunction(SuperFunction.zero(CS)) == "0"
    assert str((q + 1) * th1) == "(q1 + 1)*th1"
