"""Grassmann polynomials over a coordinate system.

A superfunction maps sorted tuples of odd-generator positions (monomials) to
scalar coefficients in the even coordinates. Signs are computed when terms
are multiplied or differentiated and never stored; zero coefficients are
dropped, so the term map is a normal form.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from types import MappingProxyType
from typing import TypeAlias

import sympy as sp

from .coordinates import CoordinateSystem, Parity
from .errors import (
    CoordinateMismatchError,
    NotInvertibleError,
    ParityError,
    UnknownCoordinateError,
)
from .scalar import ONE, ZERO, ScalarExpr, constant, format_scalar, normalize, symbol

Monomial: TypeAlias = tuple[int, ...]
ScalarLike: TypeAlias = int | Fraction | sp.Expr
RawTerms: TypeAlias = dict[Monomial, ScalarExpr]


def merge_monomials(a: Monomial, b: Monomial) -> tuple[int, Monomial] | None:
    """Koszul sign and sorted union of two monomials, or None if they share a generator."""
    if not a:
        return 1, b
    if not b:
        return 1, a
    if set(a).intersection(b):
        return None
    inversions = sum(1 for i in a for j in b if i > j)
    return (-1 if inversions % 2 else 1), tuple(sorted(a + b))


def multiply_terms(a: Mapping[Monomial, ScalarExpr], b: Mapping[Monomial, ScalarExpr]) -> RawTerms:
    """Grassmann product of raw term maps; coefficients are left unnormalized."""
    parts: dict[Monomial, list[ScalarExpr]] = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            merged = merge_monomials(ma, mb)
            if merged is None:
                continue
            sign, monomial = merged
            parts.setdefault(monomial, []).append(ca * cb if sign > 0 else -ca * cb)
    return {m: sp.Add(*p) for m, p in parts.items()}


def _add_terms(acc: RawTerms, extra: Mapping[Monomial, ScalarExpr], scale: ScalarExpr = ONE) -> None:
    for monomial, coeff in extra.items():
        acc[monomial] = acc.get(monomial, ZERO) + scale * coeff


@dataclass(frozen=True, eq=False)
class SuperFunction:
    cs: CoordinateSystem
    terms: Mapping[Monomial, ScalarExpr]

    __hash__ = None  # type: ignore[assignment]

    @classmethod
    def from_terms(
        cls,
        cs: CoordinateSystem,
        terms: Mapping[Monomial, ScalarLike] | Iterable[tuple[Monomial, ScalarLike]],
    ) -> SuperFunction:
        items = terms.items() if isinstance(terms, Mapping) else terms
        n_odd = cs.n_odd
        clean: dict[Monomial, ScalarExpr] = {}
        for monomial, raw in items:
            monomial = tuple(monomial)
            if any(i >= n_odd or i < 0 for i in monomial) or any(
                a >= b for a, b in zip(monomial, monomial[1:])
            ):
                raise ValueError(f"invalid odd monomial {monomial} in chart {cs.label!r}")
            coeff = normalize(clean.get(monomial, ZERO) + normalize(raw))
            if coeff == ZERO:
                clean.pop(monomial, None)
            else:
                clean[monomial] = coeff
        return cls(cs, MappingProxyType(dict(sorted(clean.items(), key=_term_order))))

    @classmethod
    def zero(cls, cs: CoordinateSystem) -> SuperFunction:
        return cls(cs, MappingProxyType({}))

    @classmethod
    def constant(cls, cs: CoordinateSystem, value: ScalarLike) -> SuperFunction:
        return cls.from_terms(cs, {(): constant(value) if not isinstance(value, sp.Expr) else value})

    @classmethod
    def coordinate(cls, cs: CoordinateSystem, name: str) -> SuperFunction:
        coordinate = cs.get(name)
        if coordinate.is_odd:
            return cls(cs, MappingProxyType({(cs.odd_index(name),): ONE}))
        return cls(cs, MappingProxyType({(): symbol(name)}))

    # -- structure ---------------------------------------------------------

    @property
    def body(self) -> ScalarExpr:
        return self.terms.get((), ZERO)

    @property
    def soul(self) -> SuperFunction:
        return SuperFunction(self.cs, MappingProxyType({m: c for m, c in self.terms.items() if m}))

    @property
    def parity(self) -> Parity | None:
        """Parity of a homogeneous function (zero counts as even); None when mixed."""
        parities = {len(m) % 2 for m in self.terms}
        if not parities:
            return Parity.EVEN
        if len(parities) == 1:
            return Parity(parities.pop())
        return None

    def has_parity(self, parity: Parity) -> bool:
        return all(len(m) % 2 == parity for m in self.terms)

    @property
    def is_homogeneous(self) -> bool:
        return self.parity is not None

    @property
    def even_part(self) -> SuperFunction:
        return SuperFunction(self.cs, MappingProxyType({m: c for m, c in self.terms.items() if len(m) % 2 == 0}))

    @property
    def odd_part(self) -> SuperFunction:
        return SuperFunction(self.cs, MappingProxyType({m: c for m, c in self.terms.items() if len(m) % 2 == 1}))

    def parity_part(self, parity: Parity) -> SuperFunction:
        return self.even_part if parity is Parity.EVEN else self.odd_part

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, monomial: Monomial) -> ScalarExpr:
        return self.terms.get(tuple(monomial), ZERO)

    def names_in(self, monomial: Monomial) -> tuple[str, ...]:
        odd = self.cs.odd
        return tuple(odd[i].name for i in monomial)

    def depends_on(self, name: str) -> bool:
        coordinate = self.cs.get(name)
        if coordinate.is_odd:
            index = self.cs.odd_index(name)
            return any(index in m for m in self.terms)
        return any(coordinate.symbol in c.free_symbols for c in self.terms.values())

    def used_names(self) -> frozenset[str]:
        names: set[str] = set()
        for monomial, coeff in self.terms.items():
            names.update(self.names_in(monomial))
            names.update(s.name for s in coeff.free_symbols if s.name in self.cs)
        return frozenset(names)

    def rechart(self, cs: CoordinateSystem) -> SuperFunction:
        """The same function written over another chart that shares its coordinates."""
        if cs == self.cs:
            return self
        terms: RawTerms = {}
        for monomial, coeff in self.terms.items():
            for s in coeff.free_symbols:
                if s.name in self.cs and s.name not in cs.even_names:
                    raise UnknownCoordinateError(s.name, cs.label)
            names = self.names_in(monomial)
            positions = []
            for name in names:
                if name not in cs or not cs.get(name).is_odd:
                    raise UnknownCoordinateError(name, cs.label)
                positions.append(cs.odd_index(name))
            ordered = sorted(range(len(positions)), key=positions.__getitem__)
            sign = _permutation_sign(ordered)
            key = tuple(positions[i] for i in ordered)
            terms[key] = terms.get(key, ZERO) + sign * coeff
        return SuperFunction.from_terms(cs, terms)

    def map_coefficients(self, fn) -> SuperFunction:
        return SuperFunction.from_terms(self.cs, {m: fn(c) for m, c in self.terms.items()})

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other: object) -> SuperFunction:
        if isinstance(other, SuperFunction):
            if other.cs != self.cs:
                raise CoordinateMismatchError(
                    f"superfunctions over {self.cs.label!r} and {other.cs.label!r}"
                )
            return other
        if isinstance(other, (int, Fraction, sp.Expr)):
            return SuperFunction.constant(self.cs, other)
        return NotImplemented

    def __add__(self, other: object) -> SuperFunction:
        rhs = self._coerce(other)
        if rhs is NotImplemented:
            return NotImplemented
        acc = dict(self.terms)
        _add_terms(acc, rhs.terms)
        return SuperFunction.from_terms(self.cs, acc)

    __radd__ = __add__

    def __neg__(self) -> SuperFunction:
        return SuperFunction(self.cs, MappingProxyType({m: -c for m, c in self.terms.items()}))

    def __sub__(self, other: object) -> SuperFunction:
        rhs = self._coerce(other)
        if rhs is NotImplemented:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other: object) -> SuperFunction:
        return (-self) + other

    def __mul__(self, other: object) -> SuperFunction:
        if isinstance(other, (int, Fraction, sp.Expr)):
            factor = other if isinstance(other, sp.Expr) else constant(other)
            return SuperFunction.from_terms(self.cs, {m: factor * c for m, c in self.terms.items()})
        rhs = self._coerce(other)
        if rhs is NotImplemented:
            return NotImplemented
        return SuperFunction.from_terms(self.cs, multiply_terms(self.terms, rhs.terms))

    def __rmul__(self, other: object) -> SuperFunction:
        # Scalars are even, so left and right multiplication agree.
        return self.__mul__(other)

    def __truediv__(self, other: object) -> SuperFunction:
        if isinstance(other, (int, Fraction, sp.Expr)):
            divisor = other if isinstance(other, sp.Expr) else constant(other)
            if normalize(divisor) == ZERO:
                raise NotInvertibleError("division by zero")
            return self * (ONE / divisor)
        rhs = self._coerce(other)
        if rhs is NotImplemented:
            return NotImplemented
        return self * invert(rhs)

    def __pow__(self, exponent: int) -> SuperFunction:
        if not isinstance(exponent, int):
            raise TypeError("superfunctions only take integer powers")
        if exponent < 0:
            return invert(self) ** (-exponent)
        result = SuperFunction.constant(self.cs, 1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction, sp.Expr)):
            other = SuperFunction.constant(self.cs, other)
        if not isinstance(other, SuperFunction):
            return NotImplemented
        if other.cs != self.cs:
            return False
        return (self - other).is_zero()

    def __str__(self) -> str:
        return format_superfunction(self)

    def __repr__(self) -> str:
        return f"SuperFunction({self.cs.label}: {format_superfunction(self)})"


def _term_order(item: tuple[Monomial, ScalarExpr]) -> tuple[int, Monomial]:
    return len(item[0]), item[0]


def _permutation_sign(order: list[int]) -> int:
    inversions = sum(1 for i in range(len(order)) for j in range(i + 1, len(order)) if order[i] > order[j])
    return -1 if inversions % 2 else 1


def left_derivative(f: SuperFunction, name: str) -> SuperFunction:
    """∂f/∂x acting from the left; odd x picks up (−1)^(generators before x)."""
    coordinate = f.cs.get(name)
    if not coordinate.is_odd:
        variable = coordinate.symbol
        return SuperFunction.from_terms(
            f.cs, {m: sp.diff(c, variable) for m, c in f.terms.items()}
        )
    index = f.cs.odd_index(name)
    terms: RawTerms = {}
    for monomial, coeff in f.terms.items():
        if index not in monomial:
            continue
        position = monomial.index(index)
        reduced = monomial[:position] + monomial[position + 1 :]
        terms[reduced] = -coeff if position % 2 else coeff
    return SuperFunction.from_terms(f.cs, terms)


def invert(f: SuperFunction) -> SuperFunction:
    """f⁻¹ = b⁻¹ Σ_j (−s/b)^j, exact because the soul s is nilpotent."""
    body = f.body
    if normalize(body) == ZERO:
        raise NotInvertibleError(f"superfunction {format_superfunction(f)} has zero body")
    inverse_body = ONE / body
    ratio = f.soul * (-inverse_body)
    result = SuperFunction.constant(f.cs, 1)
    term = result
    for _ in range(f.cs.n_odd):
        term = term * ratio
        if term.is_zero():
            break
        result = result + term
    return result * inverse_body


def compose_scalar(
    expr: ScalarExpr,
    bindings: Mapping[sp.Symbol, SuperFunction],
    cs: CoordinateSystem,
) -> SuperFunction:
    """Substitute even superfunctions for the symbols of a scalar expression.

    Each binding splits into body + nilpotent soul; the expression is
    Taylor-expanded in the souls, which terminates by nilpotency.
    """
    relevant = {s: f for s, f in bindings.items() if s in expr.free_symbols}
    for s, f in relevant.items():
        if f.cs != cs:
            raise CoordinateMismatchError(f"binding for {s} lives over {f.cs.label!r}")
        if not f.has_parity(Parity.EVEN):
            raise ParityError(f"even variable {s} bound to a non-even superfunction")
    if not relevant:
        return SuperFunction.constant(cs, expr)
    dummies = {s: sp.Dummy(s.name) for s in relevant}
    bodies = {dummies[s]: f.body for s, f in relevant.items()}
    souls = {dummies[s]: f.soul.terms for s, f in relevant.items() if not f.soul.is_zero()}
    current: RawTerms = {(): expr.xreplace(dummies)}
    total: RawTerms = dict(current)
    order = 0
    while souls and current:
        order += 1
        step: RawTerms = {}
        for dummy, soul in souls.items():
            derived = {m: sp.diff(c, dummy) for m, c in current.items()}
            derived = {m: c for m, c in derived.items() if c != ZERO}
            if derived:
                _add_terms(step, multiply_terms(soul, derived))
        current = {m: c for m, c in step.items() if c != ZERO}
        _add_terms(total, current, sp.Rational(1, factorial(order)))
    return SuperFunction.from_terms(cs, {m: c.xreplace(bodies) for m, c in total.items()})


def format_superfunction(f: SuperFunction) -> str:
    """Deterministic rendering in the model-file expression grammar."""
    if f.is_zero():
        return "0"
    parts: list[str] = []
    for monomial, coeff in f.terms.items():
        names = f.names_in(monomial)
        if not names:
            parts.append(format_scalar(coeff))
            continue
        mono = "*".join(names)
        if coeff == ONE:
            parts.append(mono)
        elif coeff == -ONE:
            parts.append("-" + mono)
        else:
            text = format_scalar(coeff)
            if isinstance(coeff, sp.Add):
                text = f"({text})"
            parts.append(f"{text}*{mono}")
    return " + ".join(parts).replace("+ -", "- ")
