"""Morphisms of superdomains as parity-preserving superalgebra assignments.

A morphism F: N → M is stored as the pullback of M's coordinates,
`assignment[x] = F*(x)`, a superfunction over N's chart. Pullback of an
arbitrary function substitutes the assignments into each term, expanding the
even coefficients in the nilpotent souls.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from types import MappingProxyType

from .charts import base_chart, bundle_chart
from .coordinates import ChartKind, CoordinateSystem
from .errors import CoordinateMismatchError, ParityError
from .graded_matrix import GradedMatrix
from .logging import get_logger, log_pipeline
from .scalar import ScalarExpr
from .superfunction import SuperFunction, compose_scalar, left_derivative

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class SuperMorphism:
    source: CoordinateSystem
    target: CoordinateSystem
    assignment: Mapping[str, SuperFunction]
    name: str = field(default="", compare=False)

    __hash__ = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        missing = [c.name for c in self.target.coordinates if c.name not in self.assignment]
        if missing:
            raise ValueError(f"morphism {self.name or '?'} leaves {missing} unassigned")
        extra = [name for name in self.assignment if name not in self.target]
        if extra:
            raise ValueError(f"morphism {self.name or '?'} assigns unknown {extra}")
        for coordinate in self.target.coordinates:
            image = self.assignment[coordinate.name]
            if image.cs != self.source:
                raise CoordinateMismatchError(
                    f"image of {coordinate.name} lives over {image.cs.label!r}, "
                    f"expected {self.source.label!r}"
                )
            if not image.has_parity(coordinate.parity):
                raise ParityError(
                    f"{coordinate.name} is {coordinate.parity.name.lower()} but its image "
                    f"{image} is not"
                )
        ordered = {c.name: self.assignment[c.name] for c in self.target.coordinates}
        object.__setattr__(self, "assignment", MappingProxyType(ordered))

    @classmethod
    def from_mapping(
        cls,
        source: CoordinateSystem,
        target: CoordinateSystem,
        images: Mapping[str, SuperFunction],
        *,
        name: str = "",
    ) -> SuperMorphism:
        """Build a morphism; unlisted target coordinates map to the same-named source one."""
        assignment: dict[str, SuperFunction] = {}
        for coordinate in target.coordinates:
            if coordinate.name in images:
                assignment[coordinate.name] = images[coordinate.name]
            else:
                assignment[coordinate.name] = SuperFunction.coordinate(source, coordinate.name)
        return cls(source, target, assignment, name)

    def pullback(self, f: SuperFunction) -> SuperFunction:
        if f.cs != self.target:
            raise CoordinateMismatchError(
                f"cannot pull back a function over {f.cs.label!r} along a morphism "
                f"into {self.target.label!r}"
            )
        even_bindings = {c.symbol: self.assignment[c.name] for c in self.target.even}
        odd_images = [self.assignment[c.name] for c in self.target.odd]
        result = SuperFunction.zero(self.source)
        odd_products: dict[tuple[int, ...], SuperFunction] = {(): SuperFunction.constant(self.source, 1)}
        for monomial, coeff in f.terms.items():
            product = odd_products.get(monomial)
            if product is None:
                product = odd_products[()]
                for index in monomial:
                    product = product * odd_images[index]
                odd_products[monomial] = product
            if product.is_zero():
                continue
            result = result + compose_scalar(coeff, even_bindings, self.source) * product
        return result

    __call__ = pullback

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SuperMorphism):
            return NotImplemented
        if self.source != other.source or self.target != other.target:
            return False
        return all(self.assignment[name] == other.assignment[name] for name in self.assignment)

    def is_identity(self) -> bool:
        return self.source == self.target and self == identity(self.source)

    def is_coordinate_projection(self) -> bool:
        """True when every target coordinate maps to the same-named source coordinate."""
        for name, image in self.assignment.items():
            if name not in self.source:
                return False
            if not (image - SuperFunction.coordinate(self.source, name)).is_zero():
                return False
        return True

    def jacobian(self, rows: list[str] | None = None, cols: list[str] | None = None) -> GradedMatrix:
        """Matrix of left derivatives ∂F*(x_row)/∂y_col."""
        row_names = rows if rows is not None else list(self.target.names)
        col_names = cols if cols is not None else list(self.source.names)
        return GradedMatrix.build(
            self.source,
            [self.target.parity_of(r) for r in row_names],
            [self.source.parity_of(c) for c in col_names],
            lambda i, j: left_derivative(self.assignment[row_names[i]], col_names[j]),
        )

    def describe(self) -> list[str]:
        return [f"{name} -> {image}" for name, image in self.assignment.items()]


def identity(cs: CoordinateSystem) -> SuperMorphism:
    return SuperMorphism(
        cs, cs, {c.name: SuperFunction.coordinate(cs, c.name) for c in cs.coordinates}, "id"
    )


def compose(f: SuperMorphism, g: SuperMorphism) -> SuperMorphism:
    """F∘G, with (F∘G)* = G*∘F*."""
    if f.source != g.target:
        raise CoordinateMismatchError(
            f"cannot compose: source {f.source.label!r} of the outer map differs from "
            f"target {g.target.label!r} of the inner map"
        )
    log_pipeline(logger, "morphism.compose", outer=f.name, inner=g.name)
    assignment = {name: g.pullback(image) for name, image in f.assignment.items()}
    name = f"{f.name}∘{g.name}" if f.name and g.name else ""
    return SuperMorphism(g.source, f.target, assignment, name)


def canonical_projection(bundle: CoordinateSystem) -> SuperMorphism:
    """τ: STM→M, TM→M or π: ST*M→M, T*M→M, forgetting the fiber coordinates."""
    if bundle.kind in (ChartKind.BASE, ChartKind.CUSTOM):
        raise ValueError(f"chart {bundle.label!r} is not a bundle chart")
    base = base_chart(bundle)
    assignment = {c.name: SuperFunction.coordinate(bundle, c.name) for c in base.coordinates}
    prefix = "tau" if bundle.kind in (ChartKind.TANGENT, ChartKind.TANGENT_SUPER) else "pi"
    return SuperMorphism(bundle, base, assignment, prefix)


_IMBEDDING_AMBIENT: dict[ChartKind, ChartKind] = {
    ChartKind.TANGENT: ChartKind.TANGENT_SUPER,
    ChartKind.COTANGENT: ChartKind.COTANGENT_SUPER,
    ChartKind.COTANGENT_ODD: ChartKind.COTANGENT_SUPER,
}


def canonical_imbedding(sub: CoordinateSystem) -> SuperMorphism:
    """Φ: TM→STM, Ψ: T*M→ST*M or the π-sector ΠT*M→ST*M.

    Coordinates present in the subdomain map to themselves, the others to 0.
    """
    ambient_kind = _IMBEDDING_AMBIENT.get(sub.kind)
    if ambient_kind is None:
        raise ValueError(f"chart {sub.label!r} is not a canonical subsupermanifold chart")
    ambient = bundle_chart(base_chart(sub), ambient_kind)
    assignment = {
        c.name: (
            SuperFunction.coordinate(sub, c.name)
            if c.name in sub
            else SuperFunction.zero(sub)
        )
        for c in ambient.coordinates
    }
    name = {ChartKind.TANGENT: "Phi", ChartKind.COTANGENT: "Psi"}.get(sub.kind, "Psi_pi")
    return SuperMorphism(sub, ambient, assignment, name)


def body_map(morphism: SuperMorphism) -> dict[str, ScalarExpr]:
    """Bodies of the even assignments: the underlying smooth map."""
    return {c.name: morphism.assignment[c.name].body for c in morphism.target.even}
