"""Bigraded exterior calculus on superdomains.

A k-form is stored coefficient-on-the-left, `f · dx^{c1} ∧ … ∧ dx^{ck}`, keyed
by the non-decreasing tuple of chart indices. Moving an object of bidegree
(a, p) past one of bidegree (b, q) costs (−1)^(ab + pq), so adjacent
differentials swap with (−1)^(1 + |x||y|): even differentials anticommute and
square to zero, odd ones commute and may repeat.

`d` is the natural one, d(x) = dx, with df = Σ dx^c ∂f/∂x^c. The interior
product is the left antiderivation with i_{∂c} dx^c = 1 for every
coordinate, which gives i_X df = X(f).
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from types import MappingProxyType
from typing import TypeAlias

import sympy as sp

from .charts import bundle_chart, partner
from .coordinates import ChartKind, CoordinateSystem, Parity, Role
from .errors import CoordinateMismatchError
from .fields import FieldAlongMorphism, SuperVectorField
from .graded_matrix import GradedMatrix, matrix_invert
from .logging import get_logger, log_pipeline
from .morphisms import SuperMorphism
from .superfunction import SuperFunction, left_derivative

logger = get_logger(__name__)

Key: TypeAlias = tuple[int, ...]

# i_{∂c} dx^c for odd c under the natural pairing.
NATURAL_ODD_PAIRING = 1
# The sign printed for the dual basis of odd coordinates, dθ(∂θ) = −1.
PRINTED_ODD_PAIRING = -1


def _parities(cs: CoordinateSystem) -> tuple[int, ...]:
    return tuple(int(c.parity) for c in cs.coordinates)


def _sort_key(indices: Sequence[int], parities: Sequence[int]) -> tuple[int, Key] | None:
    """Sign and normal form of a differential monomial, or None if it vanishes."""
    items = list(indices)
    sign = 1
    for end in range(len(items) - 1, 0, -1):
        for i in range(end):
            a, b = items[i], items[i + 1]
            if a > b:
                items[i], items[i + 1] = b, a
                if (1 + parities[a] * parities[b]) % 2:
                    sign = -sign
    for a, b in zip(items, items[1:]):
        if a == b and parities[a] == 0:
            return None
    return sign, tuple(items)


def _key_parity(key: Key, parities: Sequence[int]) -> int:
    return sum(parities[i] for i in key) % 2


def _split(f: SuperFunction) -> Iterable[tuple[int, SuperFunction]]:
    even, odd = f.even_part, f.odd_part
    if not even.is_zero():
        yield 0, even
    if not odd.is_zero():
        yield 1, odd


def _accumulate(
    acc: dict[Key, SuperFunction], key: Key, value: SuperFunction
) -> None:
    current = acc.get(key)
    acc[key] = value if current is None else current + value


def _clean(terms: Mapping[Key, SuperFunction]) -> MappingProxyType:
    return MappingProxyType({k: v for k, v in sorted(terms.items()) if not v.is_zero()})


def _normalize_terms(
    terms: Mapping[Key, SuperFunction] | Iterable[tuple[Sequence[int], SuperFunction]],
    degree: int,
    parities: Sequence[int],
) -> MappingProxyType:
    items = terms.items() if isinstance(terms, Mapping) else terms
    acc: dict[Key, SuperFunction] = {}
    for indices, value in items:
        if len(indices) != degree:
            raise ValueError(f"differential monomial {tuple(indices)} in a {degree}-form")
        sorted_key = _sort_key(indices, parities)
        if sorted_key is None:
            continue
        sign, key = sorted_key
        _accumulate(acc, key, value if sign > 0 else -value)
    return _clean(acc)


def _wedge_terms(
    a: Mapping[Key, SuperFunction], b: Mapping[Key, SuperFunction], parities: Sequence[int]
) -> dict[Key, SuperFunction]:
    acc: dict[Key, SuperFunction] = {}
    for key_a, f in a.items():
        p_a = _key_parity(key_a, parities)
        for key_b, g in b.items():
            merged = _sort_key(key_a + key_b, parities)
            if merged is None:
                continue
            sign, key = merged
            for p_g, part in _split(g):
                s = sign * (-1 if p_g * p_a else 1)
                product = f * part
                _accumulate(acc, key, product if s > 0 else -product)
    return acc


def _contract_terms(
    terms: Mapping[Key, SuperFunction],
    index: int,
    parities: Sequence[int],
    odd_pairing: int,
) -> dict[Key, SuperFunction]:
    """i_{∂c} for the coordinate at `index`, as a left antiderivation."""
    p_c = parities[index]
    pairing = odd_pairing if p_c else 1
    acc: dict[Key, SuperFunction] = {}
    for key, f in terms.items():
        running = 1
        for position, c in enumerate(key):
            if c == index:
                reduced = key[:position] + key[position + 1 :]
                for p_f, part in _split(f):
                    s = running * pairing * (-1 if p_c * p_f else 1)
                    _accumulate(acc, reduced, part if s > 0 else -part)
            if (p_c * parities[c]) % 2 == 0:
                running = -running
    return acc


def _format_terms(terms: Mapping[Key, SuperFunction], cs: CoordinateSystem) -> str:
    if not terms:
        return "0"
    names = cs.names
    parts = []
    for key, value in terms.items():
        differential = "∧".join(f"d{names[i]}" for i in key)
        if not key:
            parts.append(str(value))
            continue
        if value == 1:
            parts.append(differential)
        elif value == -1:
            parts.append(f"-{differential}")
        else:
            text = str(value)
            if len(value.terms) > 1:
                text = f"({text})"
            parts.append(f"{text}*{differential}")
    return " + ".join(parts).replace("+ -", "- ")


@dataclass(frozen=True, eq=False)
class GradedForm:
    cs: CoordinateSystem
    degree: int
    terms: Mapping[Key, SuperFunction]

    __hash__ = None  # type: ignore[assignment]

    @classmethod
    def from_terms(
        cls,
        cs: CoordinateSystem,
        degree: int,
        terms: Mapping[Key, SuperFunction] | Iterable[tuple[Sequence[int], SuperFunction]],
    ) -> GradedForm:
        return cls(cs, degree, _normalize_terms(terms, degree, _parities(cs)))

    @classmethod
    def zero(cls, cs: CoordinateSystem, degree: int) -> GradedForm:
        return cls(cs, degree, MappingProxyType({}))

    @classmethod
    def function(cls, f: SuperFunction) -> GradedForm:
        return cls(f.cs, 0, _clean({(): f}))

    @classmethod
    def differential(cls, cs: CoordinateSystem, name: str) -> GradedForm:
        return cls(cs, 1, MappingProxyType({(cs.index(name),): SuperFunction.constant(cs, 1)}))

    @classmethod
    def from_coefficients(cls, cs: CoordinateSystem, coefficients: Mapping[str, SuperFunction]) -> GradedForm:
        """Σ a_c dx^c from coefficients keyed by coordinate name."""
        return cls.from_terms(cs, 1, [((cs.index(name),), value) for name, value in coefficients.items()])

    def coefficient(self, *names: str) -> SuperFunction:
        """Coefficient of dx^{names} after normalizing the differential order."""
        parities = _parities(self.cs)
        sorted_key = _sort_key([self.cs.index(n) for n in names], parities)
        if sorted_key is None:
            return SuperFunction.zero(self.cs)
        sign, key = sorted_key
        value = self.terms.get(key, SuperFunction.zero(self.cs))
        return value if sign > 0 else -value

    def coefficients(self) -> dict[str, SuperFunction]:
        """Coefficient per coordinate of a 1-form, in chart order."""
        if self.degree != 1:
            raise ValueError("coefficients() is defined for 1-forms")
        return {c.name: self.coefficient(c.name) for c in self.cs.coordinates}

    @property
    def parity(self) -> Parity | None:
        """Total Grassmann parity (coefficient plus differentials) when homogeneous."""
        parities = _parities(self.cs)
        seen = set()
        for key, value in self.terms.items():
            if value.parity is None:
                return None
            seen.add((value.parity + _key_parity(key, parities)) % 2)
        if len(seen) > 1:
            return None
        return Parity(seen.pop()) if seen else Parity.EVEN

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: GradedForm) -> None:
        if other.cs != self.cs:
            raise CoordinateMismatchError(f"forms over {self.cs.label!r} and {other.cs.label!r}")

    def __add__(self, other: GradedForm) -> GradedForm:
        self._check(other)
        if other.degree != self.degree:
            raise ValueError(f"cannot add a {self.degree}-form and a {other.degree}-form")
        acc = dict(self.terms)
        for key, value in other.terms.items():
            _accumulate(acc, key, value)
        return GradedForm(self.cs, self.degree, _clean(acc))

    def __neg__(self) -> GradedForm:
        return GradedForm(self.cs, self.degree, MappingProxyType({k: -v for k, v in self.terms.items()}))

    def __sub__(self, other: GradedForm) -> GradedForm:
        return self + (-other)

    def __rmul__(self, factor: SuperFunction | int | sp.Expr) -> GradedForm:
        """f·ω with the function on the left."""
        return GradedForm(self.cs, self.degree, _clean({k: factor * v for k, v in self.terms.items()}))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GradedForm):
            return NotImplemented
        if other.cs != self.cs or other.degree != self.degree:
            return False
        return (self - other).is_zero()

    def __str__(self) -> str:
        return _format_terms(self.terms, self.cs)

    def __repr__(self) -> str:
        return f"GradedForm({self.cs.label}, {self.degree}: {self})"


@dataclass(frozen=True, eq=False)
class FormAlongMorphism:
    """A form along φ: N → M, coefficients over N and differentials dx̂ of M."""

    phi: SuperMorphism
    degree: int
    terms: Mapping[Key, SuperFunction]

    __hash__ = None  # type: ignore[assignment]

    @property
    def cs(self) -> CoordinateSystem:
        return self.phi.source

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FormAlongMorphism):
            return NotImplemented
        if self.phi != other.phi or self.degree != other.degree:
            return False
        keys = set(self.terms) | set(other.terms)
        zero = SuperFunction.zero(self.cs)
        return all((self.terms.get(k, zero) - other.terms.get(k, zero)).is_zero() for k in keys)

    def __str__(self) -> str:
        return _format_terms(self.terms, self.phi.target)


def wedge(a: GradedForm, b: GradedForm) -> GradedForm:
    a._check(b)
    terms = _wedge_terms(a.terms, b.terms, _parities(a.cs))
    return GradedForm(a.cs, a.degree + b.degree, _clean(terms))


def exterior_derivative(form: GradedForm) -> GradedForm:
    """d(f dx^I) = df ∧ dx^I with df = Σ dx^c ∂f/∂x^c."""
    cs = form.cs
    parities = _parities(cs)
    acc: dict[Key, SuperFunction] = {}
    for key, f in form.terms.items():
        for index, coordinate in enumerate(cs.coordinates):
            h = left_derivative(f, coordinate.name)
            if h.is_zero():
                continue
            merged = _sort_key((index, *key), parities)
            if merged is None:
                continue
            sign, new_key = merged
            for p_h, part in _split(h):
                # dx^c · h = (−1)^{|c||h|} h · dx^c
                s = sign * (-1 if parities[index] * p_h else 1)
                _accumulate(acc, new_key, part if s > 0 else -part)
    log_pipeline(logger, "forms.d", chart=cs.label, degree=form.degree, terms=len(form.terms))
    return GradedForm(cs, form.degree + 1, _clean(acc))


def differential(f: SuperFunction) -> GradedForm:
    return exterior_derivative(GradedForm.function(f))


def interior_product(
    field: SuperVectorField, form: GradedForm, *, odd_pairing: int = NATURAL_ODD_PAIRING
) -> GradedForm:
    """i_X ω = Σ X^c i_{∂c} ω."""
    if field.cs != form.cs:
        raise CoordinateMismatchError(
            f"field over {field.cs.label!r} contracted with a form over {form.cs.label!r}"
        )
    if form.degree == 0:
        raise ValueError("cannot contract a 0-form")
    parities = _parities(form.cs)
    acc: dict[Key, SuperFunction] = {}
    for index, coordinate in enumerate(form.cs.coordinates):
        component = field.components[coordinate.name]
        if component.is_zero():
            continue
        for key, value in _contract_terms(form.terms, index, parities, odd_pairing).items():
            _accumulate(acc, key, component * value)
    return GradedForm(form.cs, form.degree - 1, _clean(acc))


def interior_product_along(field: FieldAlongMorphism, form: FormAlongMorphism) -> FormAlongMorphism:
    if field.phi != form.phi:
        raise CoordinateMismatchError("field and form live along different morphisms")
    if form.degree == 0:
        raise ValueError("cannot contract a 0-form")
    parities = _parities(form.phi.target)
    acc: dict[Key, SuperFunction] = {}
    for index, coordinate in enumerate(form.phi.target.coordinates):
        component = field.components[coordinate.name]
        if component.is_zero():
            continue
        for key, value in _contract_terms(form.terms, index, parities, NATURAL_ODD_PAIRING).items():
            _accumulate(acc, key, component * value)
    return FormAlongMorphism(form.phi, form.degree - 1, _clean(acc))


def evaluate(form: GradedForm, *fields: SuperVectorField) -> SuperFunction:
    """ω(X1, …, Xk) = i_{Xk} ⋯ i_{X1} ω."""
    if len(fields) != form.degree:
        raise ValueError(f"a {form.degree}-form takes {form.degree} fields, got {len(fields)}")
    current = form
    for field in fields:
        current = interior_product(field, current)
    return current.terms.get((), SuperFunction.zero(form.cs))


def evaluate_along(form: FormAlongMorphism, *fields: FieldAlongMorphism) -> SuperFunction:
    if len(fields) != form.degree:
        raise ValueError(f"a {form.degree}-form takes {form.degree} fields, got {len(fields)}")
    current = form
    for field in fields:
        current = interior_product_along(field, current)
    return current.terms.get((), SuperFunction.zero(form.cs))


def restrict_form(form: GradedForm, phi: SuperMorphism) -> FormAlongMorphism:
    """ω̂ with ω̂(X̂) = φ*(ω(X)): coefficients pulled back, differentials kept."""
    if form.cs != phi.target:
        raise CoordinateMismatchError(
            f"form over {form.cs.label!r} restricted along a map into {phi.target.label!r}"
        )
    return FormAlongMorphism(
        phi, form.degree, _clean({key: phi.pullback(value) for key, value in form.terms.items()})
    )


def sharp(form: FormAlongMorphism) -> GradedForm:
    """φ♯ω, the form on N with φ♯ω(Y) = ω(Tφ(Y)); dx̂^c becomes d(φ*x^c)."""
    phi = form.phi
    source = phi.source
    images = {
        index: differential(phi.assignment[c.name]) for index, c in enumerate(phi.target.coordinates)
    }
    result = GradedForm.zero(source, form.degree)
    for key, value in form.terms.items():
        product = GradedForm.function(SuperFunction.constant(source, 1))
        for index in key:
            product = wedge(product, images[index])
        result = result + value * product
    return result


def pullback(phi: SuperMorphism, form: GradedForm) -> GradedForm:
    """Φ*μ = φ♯(μ̂)."""
    return sharp(restrict_form(form, phi))


def from_values(cs: CoordinateSystem, values: Mapping[str, SuperFunction]) -> GradedForm:
    """The 1-form ω with ω(∂c) = values[c]."""
    coefficients: dict[str, SuperFunction] = {}
    for name, value in values.items():
        parity = cs.parity_of(name)
        total = SuperFunction.zero(cs)
        for p, part in _split(value):
            total = total + (-part if parity * p else part)
        coefficients[name] = total
    return GradedForm.from_coefficients(cs, coefficients)


# -- matrices and linear solves ---------------------------------------------


def form_matrix(form: GradedForm) -> GradedMatrix:
    """M[i][j] = ω(∂i, ∂j) in chart order."""
    if form.degree != 2:
        raise ValueError("form_matrix takes a 2-form")
    cs = form.cs
    basis = [SuperVectorField.basis(cs, name) for name in cs.names]
    parities = [c.parity for c in cs.coordinates]
    return GradedMatrix.build(cs, parities, parities, lambda i, j: evaluate(form, basis[i], basis[j]))


def contraction_matrix(form: GradedForm, *, odd_pairing: int = NATURAL_ODD_PAIRING) -> GradedMatrix:
    """N[c][d] = coefficient of dx^d in i_{∂c} ω, for a 2-form ω."""
    if form.degree != 2:
        raise ValueError("contraction_matrix takes a 2-form")
    cs = form.cs
    rows = []
    for name in cs.names:
        contracted = interior_product(SuperVectorField.basis(cs, name), form, odd_pairing=odd_pairing)
        rows.append(contracted.coefficients())
    parities = [c.parity for c in cs.coordinates]
    return GradedMatrix.build(cs, parities, parities, lambda i, j: rows[i][cs.names[j]])


def solve_contraction(
    form: GradedForm, rhs: GradedForm, *, odd_pairing: int = NATURAL_ODD_PAIRING
) -> SuperVectorField:
    """The field X with i_X ω = rhs; raises SingularBodyError when ω is degenerate."""
    form._check(rhs)
    if rhs.degree != 1:
        raise ValueError("the right-hand side must be a 1-form")
    cs = form.cs
    n = contraction_matrix(form, odd_pairing=odd_pairing)
    values = rhs.coefficients()
    row = GradedMatrix.build(
        cs, [Parity.EVEN], n.row_parities, lambda _, j: values[cs.names[j]]
    )
    solution = row @ matrix_invert(n)
    return SuperVectorField(cs, {name: solution[0, j] for j, name in enumerate(cs.names)})


def body_rank(form: GradedForm) -> int:
    return form_matrix(form).body_rank()


def is_semibasic(form: GradedForm, projection: SuperMorphism) -> bool:
    """i_Y ω = 0 for every vertical coordinate field of the projection."""
    if projection.source != form.cs:
        raise CoordinateMismatchError("the projection must start at the form's chart")
    for coordinate in form.cs.coordinates:
        if coordinate.name in projection.target:
            continue
        field = SuperVectorField.basis(form.cs, coordinate.name)
        if not interior_product(field, form).is_zero():
            return False
    return True


# -- canonical forms on the cotangent side ----------------------------------


_LIOUVILLE_SLOTS: dict[ChartKind, tuple[tuple[Role, ...], tuple[Role, ...]]] = {
    ChartKind.COTANGENT_SUPER: (
        (Role.MOMENTUM_EVEN, Role.PI_MOMENTUM),
        (Role.MOMENTUM_ODD, Role.PI_ODD_MOMENTUM),
    ),
    ChartKind.COTANGENT: ((Role.MOMENTUM_EVEN,), (Role.MOMENTUM_ODD,)),
    ChartKind.COTANGENT_ODD: ((Role.PI_MOMENTUM,), (Role.PI_ODD_MOMENTUM,)),
}


def liouville_form(cs: CoordinateSystem) -> GradedForm:
    """Θ₀ = Σ (p + πp) dq + Σ (η + πη) dθ, restricted to the momenta the chart carries."""
    slots = _LIOUVILLE_SLOTS.get(cs.kind)
    if slots is None:
        raise ValueError(f"chart {cs.label!r} is not a cotangent chart")
    even_slots, odd_slots = slots
    coefficients: dict[str, SuperFunction] = {}
    for base_role, fiber_roles in ((Role.BASE_EVEN, even_slots), (Role.BASE_ODD, odd_slots)):
        bases = cs.by_role(base_role)
        for index, base in enumerate(bases):
            total = SuperFunction.zero(cs)
            for role in fiber_roles:
                total = total + SuperFunction.coordinate(cs, cs.by_role(role)[index].name)
            coefficients[base.name] = total
    return GradedForm.from_coefficients(cs, coefficients)


def canonical_two_form(cs: CoordinateSystem) -> GradedForm:
    """Ω₀ = −dΘ₀."""
    return -exterior_derivative(liouville_form(cs))


def form_section(form: GradedForm) -> SuperMorphism:
    """The section Σ_ω: M → ST*M of a 1-form on M, with Σ_ω*(Θ₀) = ω.

    p ↦ w₀, πp ↦ w₁, η ↦ ω₁, πη ↦ ω₀, where w and ω are the left
    coefficients of dq and dθ split into parity parts.
    """
    base = form.cs
    if base.kind is not ChartKind.BASE or form.degree != 1:
        raise ValueError("sections are built from 1-forms on a base chart")
    target = bundle_chart(base, ChartKind.COTANGENT_SUPER)
    coefficients = form.coefficients()
    images: dict[str, SuperFunction] = {}
    for coordinate in base.coordinates:
        value = coefficients.get(coordinate.name, SuperFunction.zero(base))
        if coordinate.role is Role.BASE_EVEN:
            images[partner(target, coordinate.name, Role.MOMENTUM_EVEN).name] = value.even_part
            images[partner(target, coordinate.name, Role.PI_MOMENTUM).name] = value.odd_part
        else:
            images[partner(target, coordinate.name, Role.MOMENTUM_ODD).name] = value.odd_part
            images[partner(target, coordinate.name, Role.PI_ODD_MOMENTUM).name] = value.even_part
    return SuperMorphism.from_mapping(base, target, images, name="Sigma_omega")
