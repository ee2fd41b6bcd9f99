"""Supervector fields, fields along morphisms and the canonical tangent structures.

Components act from the left of left derivatives: X(f) = Σ X^c ∂f/∂x^c. A
field along φ: N → M has components over N indexed by M's coordinates and
acts as X(f) = Σ X^c φ*(∂f/∂x^c).
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from enum import StrEnum
from itertools import chain, combinations
from types import MappingProxyType
from typing import NamedTuple

import numpy as np
import sympy as sp

from .charts import base_chart, base_of, bundle_chart, make_chart, partner
from .coordinates import ChartKind, CoordinateSystem, Parity, Role
from .errors import CoordinateMismatchError
from .graded_matrix import GradedMatrix
from .logging import get_logger, log_pipeline
from .morphisms import SuperMorphism, canonical_projection, identity
from .superfunction import SuperFunction, left_derivative

logger = get_logger(__name__)

_TANGENT_KINDS = (ChartKind.TANGENT, ChartKind.TANGENT_SUPER)


def _component_map(
    coordinates: CoordinateSystem,
    coefficients: CoordinateSystem,
    components: Mapping[str, SuperFunction],
) -> MappingProxyType:
    unknown = [name for name in components if name not in coordinates]
    if unknown:
        raise CoordinateMismatchError(
            f"components {unknown} are not coordinates of {coordinates.label!r}"
        )
    ordered: dict[str, SuperFunction] = {}
    for coordinate in coordinates.coordinates:
        value = components.get(coordinate.name)
        if value is None:
            value = SuperFunction.zero(coefficients)
        elif value.cs != coefficients:
            raise CoordinateMismatchError(
                f"component {coordinate.name} lives over {value.cs.label!r}, "
                f"expected {coefficients.label!r}"
            )
        ordered[coordinate.name] = value
    return MappingProxyType(ordered)


def _field_parity(coordinates: CoordinateSystem, components: Mapping[str, SuperFunction]) -> Parity | None:
    seen: set[int] = set()
    for name, value in components.items():
        if value.is_zero():
            continue
        if value.parity is None:
            return None
        seen.add((value.parity + coordinates.parity_of(name)) % 2)
    if len(seen) > 1:
        return None
    return Parity(seen.pop()) if seen else Parity.EVEN


def _format(components: Mapping[str, SuperFunction]) -> str:
    parts = []
    for name, value in components.items():
        if value.is_zero():
            continue
        text = str(value)
        if len(value.terms) > 1:
            text = f"({text})"
        parts.append(f"{text}*d_{name}")
    return " + ".join(parts) if parts else "0"


@dataclass(frozen=True, eq=False)
class SuperVectorField:
    cs: CoordinateSystem
    components: Mapping[str, SuperFunction]

    __hash__ = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        object.__setattr__(self, "components", _component_map(self.cs, self.cs, self.components))

    @classmethod
    def zero(cls, cs: CoordinateSystem) -> SuperVectorField:
        return cls(cs, {})

    @classmethod
    def basis(cls, cs: CoordinateSystem, name: str) -> SuperVectorField:
        """The coordinate field ∂/∂x for x = name."""
        return cls(cs, {name: SuperFunction.constant(cs, 1)})

    @property
    def parity(self) -> Parity | None:
        return _field_parity(self.cs, self.components)

    def parity_part(self, parity: Parity) -> SuperVectorField:
        return SuperVectorField(
            self.cs,
            {
                name: value.parity_part(Parity((parity + self.cs.parity_of(name)) % 2))
                for name, value in self.components.items()
            },
        )

    def component(self, name: str) -> SuperFunction:
        self.cs.get(name)
        return self.components[name]

    def apply(self, f: SuperFunction) -> SuperFunction:
        if f.cs != self.cs:
            raise CoordinateMismatchError(
                f"field over {self.cs.label!r} applied to a function over {f.cs.label!r}"
            )
        total = SuperFunction.zero(self.cs)
        for name, value in self.components.items():
            if value.is_zero():
                continue
            total = total + value * left_derivative(f, name)
        return total

    __call__ = apply

    def is_zero(self) -> bool:
        return all(value.is_zero() for value in self.components.values())

    def __add__(self, other: SuperVectorField) -> SuperVectorField:
        if other.cs != self.cs:
            raise CoordinateMismatchError("fields over different charts")
        return SuperVectorField(
            self.cs, {name: value + other.components[name] for name, value in self.components.items()}
        )

    def __neg__(self) -> SuperVectorField:
        return SuperVectorField(self.cs, {name: -value for name, value in self.components.items()})

    def __sub__(self, other: SuperVectorField) -> SuperVectorField:
        return self + (-other)

    def __rmul__(self, factor: SuperFunction | int | sp.Expr) -> SuperVectorField:
        """f·X, the function multiplying each component from the left."""
        return SuperVectorField(self.cs, {name: factor * value for name, value in self.components.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SuperVectorField):
            return NotImplemented
        if other.cs != self.cs:
            return False
        return (self - other).is_zero()

    def describe(self) -> list[tuple[str, str]]:
        return [(name, str(value)) for name, value in self.components.items() if not value.is_zero()]

    def __str__(self) -> str:
        return _format(self.components)


@dataclass(frozen=True, eq=False)
class FieldAlongMorphism:
    """A supervector field along φ: N → M, components over N."""

    phi: SuperMorphism
    components: Mapping[str, SuperFunction]

    __hash__ = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "components",
            _component_map(self.phi.target, self.phi.source, self.components),
        )

    @property
    def cs(self) -> CoordinateSystem:
        return self.phi.source

    @property
    def parity(self) -> Parity | None:
        return _field_parity(self.phi.target, self.components)

    def parity_part(self, parity: Parity) -> FieldAlongMorphism:
        return FieldAlongMorphism(
            self.phi,
            {
                name: value.parity_part(Parity((parity + self.phi.target.parity_of(name)) % 2))
                for name, value in self.components.items()
            },
        )

    def apply(self, f: SuperFunction) -> SuperFunction:
        if f.cs != self.phi.target:
            raise CoordinateMismatchError(
                f"field along a map into {self.phi.target.label!r} applied to a "
                f"function over {f.cs.label!r}"
            )
        total = SuperFunction.zero(self.cs)
        for name, value in self.components.items():
            if value.is_zero():
                continue
            total = total + value * self.phi.pullback(left_derivative(f, name))
        return total

    __call__ = apply

    def is_zero(self) -> bool:
        return all(value.is_zero() for value in self.components.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FieldAlongMorphism):
            return NotImplemented
        if self.phi != other.phi:
            return False
        return all(
            (value - other.components[name]).is_zero() for name, value in self.components.items()
        )

    def describe(self) -> list[tuple[str, str]]:
        return [(name, str(value)) for name, value in self.components.items() if not value.is_zero()]

    def __str__(self) -> str:
        return _format(self.components)


def apply(field: SuperVectorField | FieldAlongMorphism, f: SuperFunction) -> SuperFunction:
    return field.apply(f)


def hat_restrict(field: SuperVectorField, phi: SuperMorphism) -> FieldAlongMorphism:
    """X̂ = φ*∘X, a field along φ."""
    if field.cs != phi.target:
        raise CoordinateMismatchError(
            f"field over {field.cs.label!r} cannot be restricted along a map into "
            f"{phi.target.label!r}"
        )
    return FieldAlongMorphism(phi, {name: phi.pullback(value) for name, value in field.components.items()})


def push_along(field: SuperVectorField, phi: SuperMorphism) -> FieldAlongMorphism:
    """Tφ(Y) = Y∘φ*, a field along φ."""
    if field.cs != phi.source:
        raise CoordinateMismatchError(
            f"field over {field.cs.label!r} cannot be pushed along a map from "
            f"{phi.source.label!r}"
        )
    return FieldAlongMorphism(phi, {name: field.apply(image) for name, image in phi.assignment.items()})


class Projectability(StrEnum):
    PROJECTABLE = "projectable"
    NOT_PROJECTABLE = "not-projectable"
    UNDECIDED = "undecided"


def projectability(field: FieldAlongMorphism) -> Projectability:
    """Whether a field along φ is X̂ for some field X on the target.

    Decided only for coordinate projections, where it means the components
    do not involve the fiber coordinates.
    """
    phi = field.phi
    if not phi.is_coordinate_projection():
        return Projectability.UNDECIDED
    allowed = frozenset(phi.target.names)
    for value in field.components.values():
        if not value.used_names() <= allowed:
            return Projectability.NOT_PROJECTABLE
    return Projectability.PROJECTABLE


def project(field: FieldAlongMorphism) -> SuperVectorField:
    """The field X on the target with X̂ = field, for projectable fields."""
    verdict = projectability(field)
    if verdict is not Projectability.PROJECTABLE:
        raise ValueError(f"field along {field.phi.name or field.phi.target.label} is {verdict}")
    target = field.phi.target
    return SuperVectorField(target, {name: value.rechart(target) for name, value in field.components.items()})


# -- canonical structures on TM and STM ------------------------------------


def _require_tangent(bundle: CoordinateSystem) -> None:
    if bundle.kind not in _TANGENT_KINDS:
        raise ValueError(f"chart {bundle.label!r} is not a tangent bundle chart")


def _coordinate(cs: CoordinateSystem, base_name: str, role: Role) -> SuperFunction:
    return SuperFunction.coordinate(cs, partner(cs, base_name, role).name)


def total_time_derivative(bundle: CoordinateSystem) -> FieldAlongMorphism:
    """T along τ: Σ v ∂q̂ + Σ ζ ∂θ̂ on TM, Σ (v + πv) ∂q̂ + Σ (ζ + πζ) ∂θ̂ on STM."""
    _require_tangent(bundle)
    tau = canonical_projection(bundle)
    components: dict[str, SuperFunction] = {}
    for c in tau.target.by_role(Role.BASE_EVEN):
        value = _coordinate(bundle, c.name, Role.VELOCITY_EVEN)
        if bundle.kind is ChartKind.TANGENT_SUPER:
            value = value + _coordinate(bundle, c.name, Role.PI_VELOCITY)
        components[c.name] = value
    for c in tau.target.by_role(Role.BASE_ODD):
        value = _coordinate(bundle, c.name, Role.VELOCITY_ODD)
        if bundle.kind is ChartKind.TANGENT_SUPER:
            value = value + _coordinate(bundle, c.name, Role.PI_ODD_VELOCITY)
        components[c.name] = value
    return FieldAlongMorphism(tau, components)


def vertical_lift_function(f: SuperFunction, bundle: CoordinateSystem) -> SuperFunction:
    """f^V = T(f): Σ v ∂F/∂q + Σ ζ ∂F/∂θ with F = τ*(f)."""
    return total_time_derivative(bundle).apply(f)


def _as_field_along_tau(field: SuperVectorField | FieldAlongMorphism, bundle: CoordinateSystem) -> FieldAlongMorphism:
    tau = canonical_projection(bundle)
    if isinstance(field, SuperVectorField):
        return hat_restrict(field, tau)
    if field.phi != tau:
        raise CoordinateMismatchError("vertical lifts take fields on M or fields along τ")
    return field


def vertical_lift_field(
    field: SuperVectorField | FieldAlongMorphism, bundle: CoordinateSystem
) -> SuperVectorField:
    """X^V on TM or STM.

    On TM the q-component goes to ∂v and the θ-component to ∂ζ. On STM the
    components are split by parity: even parts of q-components to ∂v, odd
    parts to ∂πv, odd parts of θ-components to ∂ζ, even parts to ∂πζ, which
    is X^V = X₀^V + X₁^V for a non-homogeneous X.
    """
    _require_tangent(bundle)
    along = _as_field_along_tau(field, bundle)
    lifted: dict[str, SuperFunction] = {}
    for name, value in along.components.items():
        role = bundle.get(name).role
        if bundle.kind is ChartKind.TANGENT:
            slot = Role.VELOCITY_EVEN if role is Role.BASE_EVEN else Role.VELOCITY_ODD
            lifted[partner(bundle, name, slot).name] = value
            continue
        if role is Role.BASE_EVEN:
            lifted[partner(bundle, name, Role.VELOCITY_EVEN).name] = value.even_part
            lifted[partner(bundle, name, Role.PI_VELOCITY).name] = value.odd_part
        else:
            lifted[partner(bundle, name, Role.VELOCITY_ODD).name] = value.odd_part
            lifted[partner(bundle, name, Role.PI_ODD_VELOCITY).name] = value.even_part
    return SuperVectorField(bundle, lifted)


def liouville_field(bundle: CoordinateSystem) -> SuperVectorField:
    """Δ = T^V, the Euler field of the fibers."""
    return vertical_lift_field(total_time_derivative(bundle), bundle)


@dataclass(frozen=True)
class VerticalEndomorphism:
    """S: Y ↦ (Tτ(Y))^V on TM; on STM S∂q = ∂v + ∂πv and S∂θ = ∂ζ + ∂πζ."""

    bundle: CoordinateSystem

    def __post_init__(self) -> None:
        _require_tangent(self.bundle)

    def __call__(self, field: SuperVectorField) -> SuperVectorField:
        if field.cs != self.bundle:
            raise CoordinateMismatchError(
                f"S on {self.bundle.label!r} applied to a field over {field.cs.label!r}"
            )
        pushed = push_along(field, canonical_projection(self.bundle))
        if self.bundle.kind is ChartKind.TANGENT:
            return vertical_lift_field(pushed, self.bundle)
        image: dict[str, SuperFunction] = {}
        for name, value in pushed.components.items():
            if self.bundle.get(name).role is Role.BASE_EVEN:
                slots = (Role.VELOCITY_EVEN, Role.PI_VELOCITY)
            else:
                slots = (Role.VELOCITY_ODD, Role.PI_ODD_VELOCITY)
            for slot in slots:
                image[partner(self.bundle, name, slot).name] = value
        return SuperVectorField(self.bundle, image)

    def matrix(self) -> GradedMatrix:
        """Column c holds the components of S(∂_c)."""
        names = self.bundle.names
        images = [self(SuperVectorField.basis(self.bundle, name)) for name in names]
        parities = [self.bundle.parity_of(name) for name in names]
        return GradedMatrix.build(
            self.bundle, parities, parities, lambda i, j: images[j].components[names[i]]
        )


def vertical_endomorphism(bundle: CoordinateSystem) -> VerticalEndomorphism:
    return VerticalEndomorphism(bundle)


def is_sode(field: SuperVectorField) -> bool:
    """S(Γ) = Δ."""
    return vertical_endomorphism(field.cs)(field) == liouville_field(field.cs)


# -- sections ---------------------------------------------------------------


def field_to_section(field: SuperVectorField | FieldAlongMorphism) -> SuperMorphism:
    """The section Σ: N → STM of a field along φ: N → M (φ = id for fields on M).

    q ↦ φ*(q), θ ↦ φ*(θ), v ↦ X₀, πv ↦ X₁, ζ ↦ χ₁, πζ ↦ χ₀, where the
    subscript is the parity of the component part.
    """
    along = field if isinstance(field, FieldAlongMorphism) else hat_restrict(field, identity(field.cs))
    phi = along.phi
    st = bundle_chart(base_chart(phi.target), ChartKind.TANGENT_SUPER)
    images: dict[str, SuperFunction] = {}
    for name, value in along.components.items():
        images[name] = phi.assignment[name]
        if phi.target.get(name).role is Role.BASE_EVEN:
            images[partner(st, name, Role.VELOCITY_EVEN).name] = value.even_part
            images[partner(st, name, Role.PI_VELOCITY).name] = value.odd_part
        else:
            images[partner(st, name, Role.VELOCITY_ODD).name] = value.odd_part
            images[partner(st, name, Role.PI_ODD_VELOCITY).name] = value.even_part
    name = f"Sigma({phi.name})" if isinstance(field, FieldAlongMorphism) and phi.name else "Sigma"
    return SuperMorphism(phi.source, st, images, name)


def section_to_field(section: SuperMorphism) -> SuperVectorField | FieldAlongMorphism:
    """Inverse of `field_to_section`; returns a plain field when τ∘Σ is the identity."""
    st = section.target
    if st.kind is not ChartKind.TANGENT_SUPER:
        raise ValueError(f"sections take values in a tangent-super chart, not {st.label!r}")
    base = base_chart(st)
    phi = SuperMorphism(
        section.source,
        base,
        {c.name: section.assignment[c.name] for c in base.coordinates},
        "tau∘" + section.name if section.name else "",
    )
    components: dict[str, SuperFunction] = {}
    for fiber in st.fiber_coordinates:
        owner = base_of(st, fiber.name).name
        components[owner] = components.get(owner, SuperFunction.zero(section.source)) + section.assignment[fiber.name]
    along = FieldAlongMorphism(phi, components)
    if phi.source == base and phi.is_identity():
        return SuperVectorField(base, dict(along.components))
    return along


# -- determinacy of fields by vertical lifts --------------------------------


class DeterminacyRank(NamedTuple):
    rank: int
    unknowns: int

    @property
    def determined(self) -> bool:
        return self.rank == self.unknowns


def generating_family(base: CoordinateSystem) -> list[SuperFunction]:
    """q^i, θ^α, q^i q^j (i ≤ j) and q^i θ^α."""
    q = [SuperFunction.coordinate(base, c.name) for c in base.by_role(Role.BASE_EVEN)]
    th = [SuperFunction.coordinate(base, c.name) for c in base.by_role(Role.BASE_ODD)]
    quadratic = [q[i] * q[j] for i in range(len(q)) for j in range(i, len(q))]
    mixed = [a * b for a in q for b in th]
    return [*q, *th, *quadratic, *mixed]


def _all_monomials(n_odd: int) -> Iterable[tuple[int, ...]]:
    return chain.from_iterable(combinations(range(n_odd), k) for k in range(n_odd + 1))


def determinacy_rank(m: int, n: int, *, seed: int = 0) -> DeterminacyRank:
    """Rank of the linear system Y(f^V) = 0 over the generating family.

    Y is a field on TM whose components carry one unknown constant per odd
    monomial; the coefficients are evaluated at a random rational point.
    Full rank there means Y ≡ 0 is the only solution.
    """
    base = make_chart(ChartKind.BASE, m, n)
    tm = bundle_chart(base, ChartKind.TANGENT)
    unknowns: list[sp.Symbol] = []
    components: dict[str, SuperFunction] = {}
    for coordinate in tm.coordinates:
        terms = {}
        for monomial in _all_monomials(tm.n_odd):
            u = sp.Symbol(f"u_{coordinate.name}_{'_'.join(map(str, monomial)) or 'b'}")
            unknowns.append(u)
            terms[monomial] = u
        components[coordinate.name] = SuperFunction.from_terms(tm, terms)
    field = SuperVectorField(tm, components)

    rng = np.random.default_rng(seed)
    point = {
        c.symbol: sp.Rational(int(rng.integers(1, 10)), int(rng.integers(1, 10)))
        for c in tm.even
    }
    rows: list[sp.Expr] = []
    for f in generating_family(base):
        image = field.apply(vertical_lift_function(f, tm))
        rows.extend(coeff.xreplace(point) for coeff in image.terms.values())
    if not rows:
        return DeterminacyRank(0, len(unknowns))
    matrix, _ = sp.linear_eq_to_matrix(rows, unknowns)
    rank = int(np.linalg.matrix_rank(np.array(matrix.tolist(), dtype=float)))
    log_pipeline(logger, "fields.determinacy", m=m, n=n, rank=rank, unknowns=len(unknowns))
    return DeterminacyRank(rank, len(unknowns))

