"""The super-Legendre transformation and the Hamiltonian picture.

FL is read off the τ-semibasic Θ_L by matching its coefficients against the
canonical Liouville form: the dq-coefficient feeds p (even part) and πp (odd
part), the dθ-coefficient feeds η (odd part) and πη (even part). An even L
lands in T*M, an odd L in the (q, θ, πη, πp) sector.
"""

from __future__ import annotations

from dataclasses import dataclass

from .charts import bundle_chart, partner
from .coordinates import ChartKind, CoordinateSystem, Parity, Role
from .errors import (
    DegenerateLagrangianError,
    NotAffineError,
    NotHyperregularError,
    SingularBodyError,
)
from .fields import SuperVectorField
from .forms import (
    canonical_two_form,
    differential,
    evaluate,
    interior_product,
    liouville_form,
    pullback,
)
from .graded_matrix import GradedMatrix, matrix_invert
from .logging import get_logger, log_pipeline
from .mechanics import LagrangianSystem
from .morphisms import SuperMorphism, compose
from .schemas import Check
from .superfunction import SuperFunction, left_derivative

logger = get_logger(__name__)


def target_kind(parity: Parity) -> ChartKind:
    return ChartKind.COTANGENT if parity is Parity.EVEN else ChartKind.COTANGENT_ODD


def _momentum_roles(parity: Parity) -> tuple[Role, Role]:
    """(role fed by the dq-coefficient, role fed by the dθ-coefficient)."""
    if parity is Parity.EVEN:
        return Role.MOMENTUM_EVEN, Role.MOMENTUM_ODD
    return Role.PI_MOMENTUM, Role.PI_ODD_MOMENTUM


@dataclass(frozen=True, eq=False)
class LegendreMap:
    system: LagrangianSystem
    morphism: SuperMorphism
    printed: SuperMorphism
    parity: Parity

    @property
    def target(self) -> CoordinateSystem:
        return self.morphism.target

    @property
    def table_agrees(self) -> bool:
        return self.morphism == self.printed

    def momenta(self) -> list[tuple[str, SuperFunction]]:
        return [
            (c.name, self.morphism.assignment[c.name])
            for c in self.target.fiber_coordinates
        ]

    def printed_momenta(self) -> list[tuple[str, SuperFunction]]:
        return [
            (c.name, self.printed.assignment[c.name])
            for c in self.target.fiber_coordinates
        ]


def _printed_table(system: LagrangianSystem, target: CoordinateSystem) -> SuperMorphism:
    tm = system.cs
    lagrangian = system.lagrangian
    images: dict[str, SuperFunction] = {}
    for c in system.base.by_role(Role.BASE_EVEN):
        dv = left_derivative(lagrangian, partner(tm, c.name, Role.VELOCITY_EVEN).name)
        if system.parity is Parity.EVEN:
            images[partner(target, c.name, Role.MOMENTUM_EVEN).name] = dv
        else:
            images[partner(target, c.name, Role.PI_MOMENTUM).name] = -dv
    for c in system.base.by_role(Role.BASE_ODD):
        dz = left_derivative(lagrangian, partner(tm, c.name, Role.VELOCITY_ODD).name)
        if system.parity is Parity.EVEN:
            images[partner(target, c.name, Role.MOMENTUM_ODD).name] = -dz
        else:
            images[partner(target, c.name, Role.PI_ODD_MOMENTUM).name] = dz
    return SuperMorphism.from_mapping(tm, target, images, name="FL(printed)")


def legendre(system: LagrangianSystem) -> LegendreMap:
    """FL from the coefficients of Θ_L."""
    tm = system.cs
    parity = system.parity
    target = bundle_chart(system.base, target_kind(parity))
    even_role, odd_role = _momentum_roles(parity)
    coefficients = system.theta.coefficients()
    images: dict[str, SuperFunction] = {}
    for c in system.base.by_role(Role.BASE_EVEN):
        images[partner(target, c.name, even_role).name] = coefficients[c.name].parity_part(
            Parity.EVEN if parity is Parity.EVEN else Parity.ODD
        )
    for c in system.base.by_role(Role.BASE_ODD):
        images[partner(target, c.name, odd_role).name] = coefficients[c.name].parity_part(
            Parity.ODD if parity is Parity.EVEN else Parity.EVEN
        )
    morphism = SuperMorphism.from_mapping(tm, target, images, name="FL")
    printed = _printed_table(system, target)
    log_pipeline(logger, "legendre.built", model=system.name, target=target.label)
    return LegendreMap(system=system, morphism=morphism, printed=printed, parity=parity)


def invert_legendre(fl: LegendreMap) -> SuperMorphism:
    """FL⁻¹ for momentum maps affine in the velocities: u = A⁻¹(y − a)."""
    system = fl.system
    report = system.regularity
    if report.verdict != "regular":
        raise DegenerateLagrangianError(report.all_reasons)
    tm, target = system.cs, fl.target
    velocities = [c.name for c in tm.fiber_coordinates]
    momenta = [c.name for c in target.fiber_coordinates]
    images = [fl.morphism.assignment[name] for name in momenta]

    entries: list[list[SuperFunction]] = []
    for k, image in enumerate(images):
        row = []
        for u in velocities:
            derivative = left_derivative(image, u)
            # P = A u + a with A on the left, so ∂P/∂u = (−1)^{|A||u|} A.
            if tm.parity_of(u) is Parity.ODD:
                derivative = derivative.even_part - derivative.odd_part
            if derivative.used_names() & set(velocities):
                raise NotAffineError(
                    f"momentum {momenta[k]} = {image} is not affine in the velocities"
                )
            row.append(derivative)
        entries.append(row)
    offsets = []
    for k, image in enumerate(images):
        linear = SuperFunction.zero(tm)
        for j, u in enumerate(velocities):
            linear = linear + entries[k][j] * SuperFunction.coordinate(tm, u)
        offsets.append((image - linear).rechart(target))

    matrix = GradedMatrix.build(
        target,
        [target.parity_of(name) for name in momenta],
        [tm.parity_of(name) for name in velocities],
        lambda i, j: entries[i][j].rechart(target),
    )
    try:
        inverse_matrix = matrix_invert(matrix)
    except SingularBodyError as exc:
        raise NotHyperregularError(f"the momentum map is not invertible: {exc}") from exc
    shifted = GradedMatrix.build(
        target,
        [target.parity_of(name) for name in momenta],
        [Parity.EVEN],
        lambda i, _: SuperFunction.coordinate(target, momenta[i]) - offsets[i],
    )
    solution = inverse_matrix @ shifted
    inverse = SuperMorphism.from_mapping(
        target,
        tm,
        {u: solution[j, 0] for j, u in enumerate(velocities)},
        name="FL^-1",
    )
    if not (compose(inverse, fl.morphism).is_identity() and compose(fl.morphism, inverse).is_identity()):
        raise NotHyperregularError("the symbolic inverse does not compose to the identity")
    log_pipeline(logger, "legendre.inverted", model=system.name)
    return inverse


def verify_theta_pullback(fl: LegendreMap) -> bool:
    """FL*(Θ₀) = Θ_L on the chart FL lands in."""
    return pullback(fl.morphism, liouville_form(fl.target)) == fl.system.theta


@dataclass(frozen=True, eq=False)
class HamiltonianSystem:
    hamiltonian: SuperFunction
    field: SuperVectorField
    theta_of_field: SuperFunction
    checks: tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)


def hamiltonian(fl: LegendreMap, inverse: SuperMorphism | None = None) -> HamiltonianSystem:
    """H = (FL⁻¹)*E_L and V = (FL⁻¹)*∘Γ_L∘FL*, with the identities they satisfy."""
    if inverse is None:
        inverse = invert_legendre(fl)
    system = fl.system
    target = fl.target
    gamma = system.dynamics
    h = inverse.pullback(system.energy)
    v = SuperVectorField(
        target,
        {
            name: inverse.pullback(gamma.apply(fl.morphism.assignment[name]))
            for name in target.names
        },
    )
    omega0 = canonical_two_form(target)
    theta0 = liouville_form(target)
    theta_of_v = evaluate(theta0, v)

    related_forward = all(
        gamma.apply(fl.morphism.pullback(SuperFunction.coordinate(target, name)))
        == fl.morphism.pullback(v.apply(SuperFunction.coordinate(target, name)))
        for name in target.names
    )
    related_backward = all(
        v.apply(inverse.pullback(SuperFunction.coordinate(system.cs, name)))
        == inverse.pullback(gamma.apply(SuperFunction.coordinate(system.cs, name)))
        for name in system.cs.names
    )
    checks = (
        Check("i_V Omega_0 = dH", interior_product(v, omega0) == differential(h)),
        Check("V is FL-related to Gamma_L", related_forward),
        Check("conjugating V back by FL gives Gamma_L", related_backward),
        Check("Theta_0(V) = (FL^-1)*(Delta L)", theta_of_v == inverse.pullback(system.action)),
    )
    for check in checks:
        if not check.passed:
            logger.warning("legendre.identity_failed", model=system.name, check=check.name)
    return HamiltonianSystem(hamiltonian=h, field=v, theta_of_field=theta_of_v, checks=checks)

