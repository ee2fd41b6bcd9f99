"""Tests for supermech.mechanics module."""

from __future__ import annotations

from fractions import Fraction

import pytest

from supermech.coordinates import Parity
from supermech.errors import (
    CoordinateMismatchError,
    DegenerateLagrangianError,
    NonHomogeneousLagrangianError,
)
from supermech.fields import SuperVectorField, is_sode
from supermech.forms import PRINTED_ODD_PAIRING, evaluate
from supermech.mechanics import LagrangianSystem, dynamics, energy
from supermech.modelfile import load_bundled_model
from supermech.superfunction import SuperFunction
from supermech.verify import REGULARITY_FAMILY
from tests.factories import (
    base,
    coords,
    free_superparticle,
    harmonic,
    odd_vz,
    superoscillator,
    system,
    tangent,
)

HALF = Fraction(1, 2)


class TestCartanForms:
    def test_theta_values(self) -> None:
        free = free_superparticle()
        v, z2 = coords(free.cs, "v1", "z2")
        assert evaluate(free.theta, SuperVectorField.basis(free.cs, "q1")) == v
        assert evaluate(free.theta, SuperVectorField.basis(free.cs, "th1")) == HALF * z2
        assert evaluate(free.theta, SuperVectorField.basis(free.cs, "v1")).is_zero()

    def test_theta_is_semibasic(self) -> None:
        assert free_superparticle().theta_is_semibasic()
        assert odd_vz().theta_is_semibasic()

    def test_energy_of_free_superparticle(self) -> None:
        free = free_superparticle()
        assert free.energy == free.lagrangian
        v, z1, z2 = coords(free.cs, "v1", "z1", "z2")
        assert free.action == v * v + z1 * z2

    def test_energy_of_harmonic_oscillator(self) -> None:
        q, v = coords(tangent(1, 0), "q1", "v1")
        assert energy(HALF * v * v - HALF * q * q) == HALF * v * v + HALF * q * q

    def test_omega_degenerate_on_stm(self) -> None:
        rank, dimension = free_superparticle().stm_omega_rank()
        assert rank < dimension


class TestRegularity:
    @pytest.mark.parametrize(
        ("label", "m", "n", "lagrangian", "expected"),
        REGULARITY_FAMILY,
        ids=[entry[0] for entry in REGULARITY_FAMILY],
    )
    def test_family(self, label: str, m: int, n: int, lagrangian: str, expected: str) -> None:
        report = system(lagrangian, m=m, n=n).regularity
        assert report.verdict == expected
        assert report.criteria_agree

    def test_even_blocks(self) -> None:
        report = free_superparticle().regularity
        assert report.parity is Parity.EVEN
        assert set(report.blocks) == {"vv", "zz"}
        assert report.block_verdicts == {"vv": True, "zz": True}
        assert report.omega_body_rank == report.omega_dimension == 6

    def test_odd_block(self) -> None:
        report = odd_vz().regularity
        assert report.parity is Parity.ODD
        assert set(report.blocks) == {"zv"}
        assert report.verdict == "regular"

    def test_degenerate_reasons(self) -> None:
        report = load_bundled_model("degenerate-zeta").system().regularity
        assert report.verdict == "degenerate"
        assert "d2L/dz dz is not invertible" in report.all_reasons

    def test_odd_lagrangian_needs_equal_dimensions(self) -> None:
        report = system("v1*z1", m=1, n=2).regularity
        assert any("m = n" in reason for reason in report.reasons)


class TestDynamics:
    def test_free_superparticle(self) -> None:
        free = free_superparticle()
        gamma = free.dynamics
        v, z1 = coords(free.cs, "v1", "z1")
        assert gamma.component("q1") == v
        assert gamma.component("th1") == z1
        assert gamma.component("v1").is_zero()
        assert gamma.component("z2").is_zero()

    def test_harmonic_equations(self) -> None:
        osc = harmonic()
        (q,) = coords(osc.cs, "q1")
        equations = dict(osc.euler_lagrange())
        assert set(equations) == {"d/dt q1", "d/dt v1"}
        assert equations["d/dt v1"] == -q

    def test_superoscillator_odd_equations(self) -> None:
        osc = superoscillator()
        q, th1, th2 = coords(osc.cs, "q1", "th1", "th2")
        gamma = osc.dynamics
        assert gamma.component("v1") == -q
        assert gamma.component("z1") == 2 * th1
        assert gamma.component("z2") == 2 * th2

    def test_odd_lagrangian_is_free(self) -> None:
        gamma = odd_vz().dynamics
        assert is_sode(gamma)
        assert gamma.component("v1").is_zero()
        assert gamma.component("z1").is_zero()

    @pytest.mark.parametrize("factory", [free_superparticle, superoscillator, odd_vz, harmonic])
    def test_identities(self, factory) -> None:
        identities = factory().identities()
        assert list(identities) == [
            "i_Gamma Omega_L = dE_L",
            "S(Gamma) = Delta",
            "i_Gamma Theta_L = Delta(L)",
        ]
        assert all(identities.values()), identities

    def test_degenerate_has_no_dynamics(self) -> None:
        degenerate = load_bundled_model("degenerate-zeta").system()
        with pytest.raises(DegenerateLagrangianError) as exc_info:
            _ = degenerate.dynamics
        assert exc_info.value.reasons

    def test_printed_odd_pairing_gives_no_second_order_field(self) -> None:
        free = free_superparticle()
        try:
            gamma = dynamics(free.lagrangian, odd_pairing=PRINTED_ODD_PAIRING)
        except DegenerateLagrangianError:
            return
        assert not is_sode(gamma)


class TestLagrangianSystem:
    def test_needs_tangent_chart(self) -> None:
        with pytest.raises(CoordinateMismatchError):
            LagrangianSystem(SuperFunction.coordinate(base(1, 1), "q1"))

    def test_rejects_mixed_parity(self) -> None:
        v, z1 = coords(tangent(1, 1), "v1", "z1")
        with pytest.raises(NonHomogeneousLagrangianError):
            LagrangianSystem(v + z1)

    def test_base(self) -> None:
        assert free_superparticle().base == base(1, 2)
