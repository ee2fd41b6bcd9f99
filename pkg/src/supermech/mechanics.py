"""Lagrangian supermechanics on the tangent superbundle.

Θ_L(Y) = dL(S(Y)), Ω_L = −dΘ_L, E_L = Δ(L) − L, and the dynamics Γ_L solve
i_Γ Ω_L = dE_L. Lagrangians live on TM; the STM forms are available for the
degeneracy statement only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Literal, NamedTuple

from .charts import base_chart, bundle_chart, partner
from .coordinates import ChartKind, CoordinateSystem, Parity, Role
from .errors import (
    CoordinateMismatchError,
    DegenerateLagrangianError,
    NonHomogeneousLagrangianError,
    SingularBodyError,
)
from .fields import (
    SuperVectorField,
    is_sode,
    liouville_field,
    vertical_endomorphism,
)
from .forms import (
    NATURAL_ODD_PAIRING,
    GradedForm,
    differential,
    evaluate,
    exterior_derivative,
    form_matrix,
    from_values,
    interior_product,
    is_semibasic,
    solve_contraction,
)
from .graded_matrix import GradedMatrix
from .logging import get_logger, log_pipeline
from .morphisms import canonical_projection
from .superfunction import SuperFunction, left_derivative

logger = get_logger(__name__)

Verdict = Literal["regular", "degenerate"]


def _require_tangent(lagrangian: SuperFunction) -> CoordinateSystem:
    cs = lagrangian.cs
    if cs.kind is not ChartKind.TANGENT:
        raise CoordinateMismatchError(f"Lagrangians live on a TM chart, not {cs.label!r}")
    return cs


def lagrangian_parity(lagrangian: SuperFunction) -> Parity:
    parity = lagrangian.parity
    if parity is None:
        raise NonHomogeneousLagrangianError(
            f"Lagrangian {lagrangian} mixes even and odd parts"
        )
    return parity


def cartan_one_form(lagrangian: SuperFunction, bundle: CoordinateSystem | None = None) -> GradedForm:
    """Θ_L = dL∘S, built from its values Θ_L(∂c) = S(∂c)(L).

    With `bundle` set to the STM chart the Lagrangian is lifted there first.
    """
    _require_tangent(lagrangian)
    if bundle is not None:
        lagrangian = lagrangian.rechart(bundle)
    cs = lagrangian.cs
    s = vertical_endomorphism(cs)
    values = {name: s(SuperVectorField.basis(cs, name)).apply(lagrangian) for name in cs.names}
    return from_values(cs, values)


def cartan_two_form(lagrangian: SuperFunction, bundle: CoordinateSystem | None = None) -> GradedForm:
    """Ω_L = −dΘ_L."""
    return -exterior_derivative(cartan_one_form(lagrangian, bundle))


def energy(lagrangian: SuperFunction) -> SuperFunction:
    """E_L = Δ(L) − L."""
    _require_tangent(lagrangian)
    return liouville_field(lagrangian.cs).apply(lagrangian) - lagrangian


def action(lagrangian: SuperFunction) -> SuperFunction:
    """Δ(L), the value of i_Γ Θ_L on the dynamics."""
    return liouville_field(lagrangian.cs).apply(lagrangian)


def _hessian(
    lagrangian: SuperFunction, outer: list[str], inner: list[str]
) -> GradedMatrix:
    cs = lagrangian.cs
    first = {name: left_derivative(lagrangian, name) for name in inner}
    return GradedMatrix.build(
        cs,
        [cs.parity_of(name) for name in outer],
        [cs.parity_of(name) for name in inner],
        lambda i, j: left_derivative(first[inner[j]], outer[i]),
    )


@dataclass(frozen=True)
class RegularityReport:
    parity: Parity
    operator_order: str
    blocks: dict[str, GradedMatrix]
    block_verdicts: dict[str, bool]
    omega_body_rank: int
    omega_dimension: int
    reasons: tuple[str, ...] = field(default_factory=tuple)

    @property
    def criterion_regular(self) -> bool:
        return not self.reasons

    @property
    def omega_nondegenerate(self) -> bool:
        return self.omega_body_rank == self.omega_dimension

    @property
    def criteria_agree(self) -> bool:
        return self.criterion_regular == self.omega_nondegenerate

    @property
    def verdict(self) -> Verdict:
        return "regular" if self.criterion_regular and self.criteria_agree else "degenerate"

    @property
    def all_reasons(self) -> tuple[str, ...]:
        if self.criteria_agree:
            return self.reasons
        return (
            *self.reasons,
            f"Hessian criterion and Ω_L body rank {self.omega_body_rank}/"
            f"{self.omega_dimension} disagree",
        )


def regularity(lagrangian: SuperFunction, omega: GradedForm | None = None) -> RegularityReport:
    """Hessian-block regularity, cross-checked against the body rank of Ω_L.

    Even L: ∂²L/∂v∂v and ∂²L/∂ζ∂ζ must be invertible. Odd L: m = n and
    ∂²L/∂ζ∂v invertible.
    """
    cs = _require_tangent(lagrangian)
    parity = lagrangian_parity(lagrangian)
    base = base_chart(cs)
    velocities = [partner(cs, c.name, Role.VELOCITY_EVEN).name for c in base.by_role(Role.BASE_EVEN)]
    odd_velocities = [partner(cs, c.name, Role.VELOCITY_ODD).name for c in base.by_role(Role.BASE_ODD)]
    blocks: dict[str, GradedMatrix] = {}
    verdicts: dict[str, bool] = {}
    reasons: list[str] = []
    if parity is Parity.EVEN:
        order = "H[i][j] = d/d(outer_i) (d/d(inner_j) L), left derivatives, inner applied first"
        blocks["vv"] = _hessian(lagrangian, velocities, velocities)
        blocks["zz"] = _hessian(lagrangian, odd_velocities, odd_velocities)
        for label, description in (("vv", "d2L/dv dv"), ("zz", "d2L/dz dz")):
            verdicts[label] = blocks[label].is_invertible()
            if not verdicts[label]:
                reasons.append(f"{description} is not invertible")
    else:
        order = "H[a][j] = d/dz_a (d/dv_j L), left derivatives, inner applied first"
        if len(velocities) != len(odd_velocities):
            reasons.append(
                f"an odd Lagrangian needs m = n, got m={len(velocities)}, n={len(odd_velocities)}"
            )
        blocks["zv"] = _hessian(lagrangian, odd_velocities, velocities)
        verdicts["zv"] = blocks["zv"].is_invertible()
        if not verdicts["zv"]:
            reasons.append("d2L/dz dv is not invertible")
    if omega is None:
        omega = cartan_two_form(lagrangian)
    rank = form_matrix(omega).body_rank()
    report = RegularityReport(
        parity=parity,
        operator_order=order,
        blocks=blocks,
        block_verdicts=verdicts,
        omega_body_rank=rank,
        omega_dimension=len(cs),
        reasons=tuple(reasons),
    )
    logger.debug(
        "mechanics.regularity",
        parity=parity.name.lower(),
        verdict=report.verdict,
        rank=rank,
        dimension=len(cs),
    )
    return report


def dynamics(
    lagrangian: SuperFunction,
    *,
    omega: GradedForm | None = None,
    odd_pairing: int = NATURAL_ODD_PAIRING,
) -> SuperVectorField:
    """Γ_L with i_Γ Ω_L = dE_L; the residual is checked after the solve."""
    cs = _require_tangent(lagrangian)
    if omega is None:
        omega = cartan_two_form(lagrangian)
    d_energy = differential(energy(lagrangian))
    try:
        gamma = solve_contraction(omega, d_energy, odd_pairing=odd_pairing)
    except SingularBodyError as exc:
        raise DegenerateLagrangianError([f"Ω_L is degenerate: {exc}"]) from exc
    residual = interior_product(gamma, omega, odd_pairing=odd_pairing) - d_energy
    if not residual.is_zero():
        raise DegenerateLagrangianError([f"i_Γ Ω_L − dE_L leaves {residual}"])
    log_pipeline(logger, "mechanics.dynamics", chart=cs.label, field=str(gamma))
    return gamma


class EulerLagrangeEquation(NamedTuple):
    lhs: str
    rhs: SuperFunction


def euler_lagrange(lagrangian: SuperFunction, gamma: SuperVectorField | None = None) -> list[EulerLagrangeEquation]:
    """The first-order system d/dt x = Γ^x, one equation per TM coordinate."""
    if gamma is None:
        gamma = dynamics(lagrangian)
    return [
        EulerLagrangeEquation(f"d/dt {name}", gamma.components[name])
        for name in gamma.cs.names
    ]


@dataclass(frozen=True)
class LagrangianSystem:
    """A Lagrangian on TM with its derived structures computed on first use."""

    lagrangian: SuperFunction
    name: str = ""

    def __post_init__(self) -> None:
        _require_tangent(self.lagrangian)
        lagrangian_parity(self.lagrangian)

    @property
    def cs(self) -> CoordinateSystem:
        return self.lagrangian.cs

    @property
    def parity(self) -> Parity:
        return lagrangian_parity(self.lagrangian)

    @property
    def base(self) -> CoordinateSystem:
        return base_chart(self.cs)

    @cached_property
    def theta(self) -> GradedForm:
        return cartan_one_form(self.lagrangian)

    @cached_property
    def omega(self) -> GradedForm:
        return -exterior_derivative(self.theta)

    @cached_property
    def energy(self) -> SuperFunction:
        return energy(self.lagrangian)

    @cached_property
    def action(self) -> SuperFunction:
        return action(self.lagrangian)

    @cached_property
    def regularity(self) -> RegularityReport:
        return regularity(self.lagrangian, self.omega)

    @property
    def is_regular(self) -> bool:
        return self.regularity.verdict == "regular"

    @cached_property
    def dynamics(self) -> SuperVectorField:
        report = self.regularity
        if report.verdict != "regular":
            raise DegenerateLagrangianError(report.all_reasons)
        return dynamics(self.lagrangian, omega=self.omega)

    def euler_lagrange(self) -> list[EulerLagrangeEquation]:
        return euler_lagrange(self.lagrangian, self.dynamics)

    def stm_omega_rank(self) -> tuple[int, int]:
        """Body rank and dimension of Ω_L computed on STM."""
        stm = bundle_chart(self.base, ChartKind.TANGENT_SUPER)
        omega = cartan_two_form(self.lagrangian, stm)
        return form_matrix(omega).body_rank(), len(stm)

    def theta_is_semibasic(self) -> bool:
        return is_semibasic(self.theta, canonical_projection(self.cs))

    def identities(self) -> dict[str, bool]:
        """The identities the solved dynamics satisfy; requires a regular Lagrangian."""
        gamma = self.dynamics
        d_energy = differential(self.energy)
        return {
            "i_Gamma Omega_L = dE_L": interior_product(gamma, self.omega) == d_energy,
            "S(Gamma) = Delta": is_sode(gamma),
            "i_Gamma Theta_L = Delta(L)": evaluate(self.theta, gamma) == self.action,
        }
