"""Tests for the numeric exterior-algebra oracle."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from supermech.oracle import GrassmannOracle, agrees, multiplication_table, random_point, to_vector
from supermech.superfunction import invert, left_derivative
from tests.factories import base, coords
from tests.strategies import invertible, superfunctions

CS = base(1, 3)


class TestTable:
    def test_generators_anticommute(self) -> None:
        oracle = GrassmannOracle(2)
        e1, e2 = oracle.generator(0), oracle.generator(1)
        assert np.allclose(oracle.multiply(e1, e2), -oracle.multiply(e2, e1))
        assert np.allclose(oracle.multiply(e1, e1), 0.0)

    def test_table_is_read_only(self) -> None:
        with pytest.raises(ValueError):
            multiplication_table(2)[0, 0, 0] = 2.0

    def test_invert_zero_body(self) -> None:
        with pytest.raises(ZeroDivisionError):
            GrassmannOracle(1).invert(GrassmannOracle(1).generator(0))


def test_to_vector_places_blades_by_bitmask() -> None:
    q, th1, th3 = coords(CS, "q1", "th1", "th3")
    vector = to_vector(2 * q + th1 * th3, {"q1": 1.5})
    assert vector[0] == pytest.approx(3.0)
    assert vector[0b101] == pytest.approx(1.0)


@given(st.data())
def test_product_agrees(data: st.DataObject) -> None:
    f, g = data.draw(superfunctions(CS)), data.draw(superfunctions(CS))
    point = random_point(CS, np.random.default_rng(data.draw(st.integers(0, 2**16))))
    oracle = GrassmannOracle(CS.n_odd)
    assert agrees(to_vector(f * g, point), oracle.multiply(to_vector(f, point), to_vector(g, point)))


@given(st.data())
def test_left_derivative_agrees(data: st.DataObject) -> None:
    f = data.draw(superfunctions(CS))
    name = data.draw(st.sampled_from(["th1", "th2", "th3"]))
    point = random_point(CS, np.random.default_rng(0))
    oracle = GrassmannOracle(CS.n_odd)
    expected = oracle.left_derivative(to_vector(f, point), CS.odd_index(name))
    assert agrees(to_vector(left_derivative(f, name), point), expected)


@given(st.data())
def test_inverse_agrees(data: st.DataObject) -> None:
    f = data.draw(invertible(CS))
    point = random_point(CS, np.random.default_rng(1))
    oracle = GrassmannOracle(CS.n_odd)
    assert agrees(to_vector(invert(f), point), oracle.invert(to_vector(f, point)))
