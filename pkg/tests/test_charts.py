"""Tests for charts, coordinates and morphisms."""

from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from supermech.charts import base_chart, base_of, bundle_chart, make_chart, partner
from supermech.coordinates import ChartKind, Coordinate, CoordinateSystem, Parity, Role
from supermech.errors import CoordinateMismatchError, ParityError, UnknownCoordinateError
from supermech.morphisms import (
    SuperMorphism,
    body_map,
    canonical_imbedding,
    canonical_projection,
    compose,
    identity,
)
from supermech.superfunction import SuperFunction
from tests.factories import base, coords
from tests.strategies import morphisms, superfunctions


class TestMakeChart:
    def test_tangent_super_layout(self) -> None:
        cs = make_chart(ChartKind.TANGENT_SUPER, 1, 2)
        assert cs.label == "STM"
        assert cs.names == ("q1", "v1", "pz1", "pz2", "th1", "th2", "z1", "z2", "pv1")
        assert cs.dimension == (4, 5)

    def test_tangent_layout(self) -> None:
        cs = make_chart("tangent", 2, 1)
        assert cs.names == ("q1", "q2", "v1", "v2", "th1", "z1")
        assert cs.parity_of("z1") is Parity.ODD

    def test_cotangent_odd(self) -> None:
        cs = make_chart(ChartKind.COTANGENT_ODD, 1, 1)
        assert cs.label == "PiT*M"
        assert cs.names == ("q1", "peta1", "th1", "pp1")

    def test_custom_names(self) -> None:
        cs = make_chart(ChartKind.TANGENT, 1, 1, even_names=["x"], odd_names=["psi"])
        assert cs.names == ("x", "v1", "psi", "z1")

    def test_negative_dimension(self) -> None:
        with pytest.raises(ValueError):
            make_chart(ChartKind.BASE, -1, 0)

    def test_custom_kind_rejected(self) -> None:
        with pytest.raises(ValueError):
            make_chart(ChartKind.CUSTOM, 1, 1)


class TestCoordinateSystem:
    def test_unknown_coordinate(self) -> None:
        with pytest.raises(UnknownCoordinateError):
            base().get("x")

    def test_role_parity_enforced(self) -> None:
        with pytest.raises(ValueError):
            CoordinateSystem("bad", (Coordinate("v", Parity.ODD, Role.VELOCITY_EVEN),))

    def test_duplicate_names(self) -> None:
        with pytest.raises(ValueError):
            CoordinateSystem("bad", (Coordinate("x", Parity.EVEN), Coordinate("x", Parity.ODD)))

    def test_describe(self) -> None:
        assert base(1, 1).describe() == "M: [q1(e), th1(o)]"


class TestBundles:
    def test_base_chart_round_trip(self) -> None:
        m = base(2, 1)
        assert base_chart(bundle_chart(m, ChartKind.COTANGENT_SUPER)) == m

    def test_partner_and_base_of(self) -> None:
        stm = make_chart(ChartKind.TANGENT_SUPER, 2, 2)
        assert partner(stm, "q2", Role.PI_VELOCITY).name == "pv2"
        assert partner(stm, "th1", Role.PI_ODD_VELOCITY).name == "pz1"
        assert base_of(stm, "z2").name == "th2"

    def test_partner_missing_role(self) -> None:
        with pytest.raises(UnknownCoordinateError):
            partner(make_chart(ChartKind.TANGENT, 1, 1), "q1", Role.PI_VELOCITY)


class TestMorphisms:
    def test_parity_preserved(self) -> None:
        m = base(1, 2)
        (th1,) = coords(m, "th1")
        with pytest.raises(ParityError):
            SuperMorphism.from_mapping(m, m, {"q1": th1})

    def test_images_over_source(self) -> None:
        m, n = base(1, 2), make_chart(ChartKind.BASE, 1, 2, base_label="N")
        with pytest.raises(CoordinateMismatchError):
            SuperMorphism.from_mapping(n, m, {"q1": SuperFunction.coordinate(m, "q1")})

    def test_pullback_of_product(self) -> None:
        m = base(1, 2)
        q, th1, th2 = coords(m, "q1", "th1", "th2")
        phi = SuperMorphism.from_mapping(m, m, {"q1": 2 * q + th1 * th2, "th1": th1 + q * th2})
        assert phi.pullback(q * q) == 4 * q * q + 4 * q * th1 * th2
        assert phi.pullback(th1 * th2) == th1 * th2

    def test_compose_identity(self) -> None:
        m = base(1, 2)
        q, th1, th2 = coords(m, "q1", "th1", "th2")
        phi = SuperMorphism.from_mapping(m, m, {"q1": q + th1 * th2})
        assert compose(phi, identity(m)) == phi
        assert compose(identity(m), phi) == phi

    def test_compose_mismatch(self) -> None:
        m, n = base(1, 2), make_chart(ChartKind.BASE, 1, 2, base_label="N")
        with pytest.raises(CoordinateMismatchError):
            compose(identity(m), identity(n))

    @given(st.data())
    def test_pullback_reverses_composition(self, data: st.DataObject) -> None:
        m = base(1, 2)
        n = make_chart(ChartKind.BASE, 1, 2, base_label="N")
        p = make_chart(ChartKind.BASE, 1, 2, base_label="P")
        f = data.draw(morphisms(n, m))
        g = data.draw(morphisms(p, n))
        h = data.draw(superfunctions(m))
        assert compose(f, g).pullback(h) == g.pullback(f.pullback(h))

    def test_canonical_projection(self) -> None:
        stm = make_chart(ChartKind.TANGENT_SUPER, 1, 1)
        tau = canonical_projection(stm)
        assert tau.target == base(1, 1)
        assert tau.is_coordinate_projection()
        assert tau.name == "tau"

    def test_projection_of_base_rejected(self) -> None:
        with pytest.raises(ValueError):
            canonical_projection(base())

    def test_canonical_imbedding(self) -> None:
        tm = make_chart(ChartKind.TANGENT, 1, 1)
        phi = canonical_imbedding(tm)
        assert phi.target.kind is ChartKind.TANGENT_SUPER
        assert phi.assignment["pv1"].is_zero()
        assert phi.assignment["v1"] == SuperFunction.coordinate(tm, "v1")
        assert compose(canonical_projection(phi.target), phi) == canonical_projection(tm)

    def test_body_map(self) -> None:
        m = base(1, 2)
        q, th1, th2 = coords(m, "q1", "th1", "th2")
        phi = SuperMorphism.from_mapping(m, m, {"q1": 3 * q + th1 * th2})
        assert body_map(phi) == {"q1": 3 * q.body}

    def test_jacobian(self) -> None:
        m = base(1, 2)
        q, th1, th2 = coords(m, "q1", "th1", "th2")
        phi = SuperMorphism.from_mapping(m, m, {"q1": q + th1 * th2})
        jac = phi.jacobian(["q1"], ["th1", "th2"])
        assert jac[0, 0] == th2
        assert jac[0, 1] == -th1
