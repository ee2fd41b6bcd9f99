"""Tests for supermech.fields module."""

from __future__ import annotations

import pytest
from hypothesis import given

from supermech.charts import bundle_chart
from supermech.coordinates import ChartKind, Parity
from supermech.errors import CoordinateMismatchError
from supermech.fields import (
    FieldAlongMorphism,
    Projectability,
    SuperVectorField,
    determinacy_rank,
    field_to_section,
    generating_family,
    hat_restrict,
    is_sode,
    liouville_field,
    project,
    projectability,
    push_along,
    section_to_field,
    total_time_derivative,
    vertical_endomorphism,
    vertical_lift_field,
    vertical_lift_function,
)
from supermech.morphisms import SuperMorphism, canonical_projection, identity
from supermech.superfunction import SuperFunction
from tests.factories import base, coords, tangent
from tests.strategies import fields, homogeneous

M = base(1, 2)
TM = tangent(1, 2)
STM = bundle_chart(M, ChartKind.TANGENT_SUPER)
q, th1, th2 = coords(M, "q1", "th1", "th2")
Q, V, TH1, TH2, Z1, Z2 = coords(TM, "q1", "v1", "th1", "th2", "z1", "z2")


def d(cs, name: str) -> SuperVectorField:
    return SuperVectorField.basis(cs, name)


class TestSuperVectorField:
    def test_apply_basis(self) -> None:
        assert d(M, "q1")(q * q) == 2 * q
        assert d(M, "th1")(th1 * th2) == th2
        assert d(M, "th2")(th1 * th2) == -th1

    def test_parity(self) -> None:
        assert d(M, "q1").parity is Parity.EVEN
        assert d(M, "th1").parity is Parity.ODD
        assert (th1 * d(M, "q1")).parity is Parity.ODD
        assert (d(M, "q1") + d(M, "th1")).parity is None

    def test_parity_parts_sum_back(self) -> None:
        field = d(M, "q1") + th1 * d(M, "q1") + q * d(M, "th2")
        assert field.parity_part(Parity.EVEN) + field.parity_part(Parity.ODD) == field

    def test_unknown_component_rejected(self) -> None:
        with pytest.raises(CoordinateMismatchError):
            SuperVectorField(M, {"v1": q})

    def test_str(self) -> None:
        assert str(SuperVectorField.zero(M)) == "0"
        assert str(q * d(M, "q1")) == "q1*d_q1"

    @given(homogeneous(M), homogeneous(M), fields(M))
    def test_graded_leibniz(self, pf, pg, field) -> None:
        (pf_, f), (_, g) = pf, pg
        sign = -1 if (field.parity * pf_) % 2 else 1
        assert field(f * g) == field(f) * g + sign * f * field(g)


class TestAlongMorphisms:
    def test_hat_restrict_is_projectable(self) -> None:
        tau = canonical_projection(TM)
        field = q * d(M, "q1") + th1 * d(M, "th2")
        along = hat_restrict(field, tau)
        assert along.components["q1"] == Q
        assert projectability(along) is Projectability.PROJECTABLE
        assert project(along) == field

    def test_hat_restrict_wrong_target(self) -> None:
        with pytest.raises(CoordinateMismatchError):
            hat_restrict(d(TM, "v1"), canonical_projection(TM))

    def test_push_along_projection(self) -> None:
        tau = canonical_projection(TM)
        assert push_along(d(TM, "v1"), tau).is_zero()
        pushed = push_along(d(TM, "q1"), tau)
        assert pushed == hat_restrict(d(M, "q1"), tau)

    def test_total_time_derivative_not_projectable(self) -> None:
        along = total_time_derivative(TM)
        assert projectability(along) is Projectability.NOT_PROJECTABLE
        with pytest.raises(ValueError):
            project(along)

    def test_undecided_off_projections(self) -> None:
        phi = SuperMorphism(M, M, {"q1": q * q, "th1": th1, "th2": th2})
        field = FieldAlongMorphism(phi, {"q1": q})
        assert projectability(field) is Projectability.UNDECIDED

    def test_total_time_derivative_on_tm(self) -> None:
        along = total_time_derivative(TM)
        assert along(q * th1) == V * TH1 + Q * Z1

    def test_total_time_derivative_on_stm(self) -> None:
        v, pv, z1, pz1 = coords(STM, "v1", "pv1", "z1", "pz1")
        along = total_time_derivative(STM)
        assert along.components["q1"] == v + pv
        assert along.components["th1"] == z1 + pz1


class TestVerticalStructures:
    def test_vertical_lift_function(self) -> None:
        assert vertical_lift_function(q * q, TM) == 2 * Q * V
        assert vertical_lift_function(th1 * th2, TM) == Z1 * TH2 + TH1 * Z2

    def test_vertical_lift_field_on_tm(self) -> None:
        lifted = vertical_lift_field(q * d(M, "q1") + d(M, "th1"), TM)
        assert lifted == Q * d(TM, "v1") + d(TM, "z1")

    def test_vertical_lift_field_splits_on_stm(self) -> None:
        lifted = vertical_lift_field(d(M, "q1") + th1 * d(M, "q1"), STM)
        assert lifted.components["v1"] == SuperFunction.constant(STM, 1)
        assert lifted.components["pv1"] == SuperFunction.coordinate(STM, "th1")

    def test_liouville_is_euler_field(self) -> None:
        delta = liouville_field(TM)
        assert delta == V * d(TM, "v1") + Z1 * d(TM, "z1") + Z2 * d(TM, "z2")
        assert delta(V * V * Z1) == 3 * V * V * Z1

    def test_vertical_endomorphism_on_basis(self) -> None:
        s = vertical_endomorphism(TM)
        assert s(d(TM, "q1")) == d(TM, "v1")
        assert s(d(TM, "th2")) == d(TM, "z2")
        assert s(d(TM, "v1")).is_zero()

    @given(fields(TM))
    def test_vertical_endomorphism_squares_to_zero(self, field) -> None:
        s = vertical_endomorphism(TM)
        assert s(s(field)).is_zero()

    def test_vertical_endomorphism_matrix_rank(self) -> None:
        assert vertical_endomorphism(TM).matrix().body_rank() == 3
        assert vertical_endomorphism(STM).matrix().body_rank() == 3

    def test_s_on_stm_hits_both_slots(self) -> None:
        image = vertical_endomorphism(STM)(d(STM, "q1"))
        assert image == d(STM, "v1") + d(STM, "pv1")

    def test_is_sode(self) -> None:
        gamma = V * d(TM, "q1") + Z1 * d(TM, "th1") + Z2 * d(TM, "th2") + Q * d(TM, "v1")
        assert is_sode(gamma)
        assert not is_sode(d(TM, "q1"))

    def test_requires_tangent_chart(self) -> None:
        with pytest.raises(ValueError):
            vertical_endomorphism(M)


class TestSections:
    def test_even_field_round_trip(self) -> None:
        field = q * d(M, "q1") + th1 * d(M, "th2")
        section = field_to_section(field)
        assert section.target.kind is ChartKind.TANGENT_SUPER
        assert section.name == "Sigma"
        assert section_to_field(section) == field

    def test_mixed_field_uses_both_slots(self) -> None:
        field = d(M, "q1") + th1 * d(M, "q1")
        section = field_to_section(field)
        assert section.assignment["v1"] == SuperFunction.constant(M, 1)
        assert section.assignment["pv1"] == th1
        assert section_to_field(section) == field

    @given(fields(M))
    def test_round_trip(self, field) -> None:
        assert section_to_field(field_to_section(field)) == field

    def test_field_along_projection(self) -> None:
        along = total_time_derivative(TM)
        section = field_to_section(along)
        assert section.name == "Sigma(tau)"
        back = section_to_field(section)
        assert isinstance(back, FieldAlongMorphism)
        assert back.components["q1"] == V
        assert back.components["th2"] == Z2

    def test_section_needs_st_target(self) -> None:
        with pytest.raises(ValueError):
            section_to_field(identity(M))


class TestDeterminacy:
    def test_generating_family(self) -> None:
        family = generating_family(base(2, 1))
        assert len(family) == 2 + 1 + 3 + 2

    def test_fields_on_tm_determined_by_lifts(self) -> None:
        result = determinacy_rank(2, 2)
        assert result.determined
        assert result.rank == result.unknowns
