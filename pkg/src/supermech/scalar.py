"""Exact scalar expressions in named even variables.

Scalars are plain sympy expressions restricted to rational constants, named
even variables, sums, products, integer powers and sin/cos/exp. `normalize`
is `sympy.cancel`, which is canonical on the rational subset: two rational
expressions are equal iff their normal forms are structurally equal. Outside
that subset `is_zero` is sound but incomplete (sin(q)^2 + cos(q)^2 - 1 is
not recognised as zero).
"""

from __future__ import annotations

from collections.abc import Collection, Mapping
from fractions import Fraction
from functools import cache
from typing import TypeAlias

import sympy as sp

from .errors import UnknownVariableError

ScalarExpr: TypeAlias = sp.Expr

ELEMENTARY_FUNCTIONS: dict[str, type[sp.Function]] = {
    "sin": sp.sin,
    "cos": sp.cos,
    "exp": sp.exp,
}

ZERO: ScalarExpr = sp.S.Zero
ONE: ScalarExpr = sp.S.One


@cache
def symbol(name: str) -> sp.Symbol:
    return sp.Symbol(name)


def constant(value: int | Fraction | str | ScalarExpr) -> ScalarExpr:
    """Exact rational constant; floats are rejected to keep Grassmann signs exact."""
    if isinstance(value, float):
        raise TypeError("floating-point coefficients are not supported")
    if isinstance(value, Fraction):
        return sp.Rational(value.numerator, value.denominator)
    if isinstance(value, sp.Expr):
        return value
    return sp.Rational(value)


def normalize(expr: ScalarExpr | int | Fraction) -> ScalarExpr:
    if not isinstance(expr, sp.Expr):
        expr = constant(expr)
    if expr.is_Rational or expr.is_Symbol:
        return expr
    return sp.cancel(expr)


def derivative(
    expr: ScalarExpr, name: str, *, variables: Collection[str] | None = None
) -> ScalarExpr:
    """∂expr/∂name; the variable must be declared in `variables` or occur in expr."""
    declared = variables if variables is not None else free_names(expr)
    if name not in declared:
        raise UnknownVariableError(name)
    return normalize(sp.diff(expr, symbol(name)))


def substitute(
    expr: ScalarExpr, bindings: Mapping[str | sp.Symbol, ScalarExpr]
) -> ScalarExpr:
    """Simultaneous substitution followed by normalization."""
    if not bindings:
        return normalize(expr)
    table = {
        symbol(key) if isinstance(key, str) else key: value
        for key, value in bindings.items()
    }
    return normalize(expr.xreplace(table))


def is_zero(expr: ScalarExpr) -> bool:
    return normalize(expr) == ZERO


def is_rational(expr: ScalarExpr) -> bool:
    """True when the expression avoids transcendental functions."""
    return not expr.has(*ELEMENTARY_FUNCTIONS.values())


def free_names(expr: ScalarExpr) -> frozenset[str]:
    return frozenset(s.name for s in expr.free_symbols)


def evaluate(expr: ScalarExpr, values: Mapping[str, float]) -> float:
    """Numeric value of the expression at the given variable assignment."""
    table = {symbol(name): sp.Float(value, 30) for name, value in values.items()}
    result = expr.xreplace(table).evalf(30)
    if result.free_symbols:
        missing = sorted(s.name for s in result.free_symbols)
        raise UnknownVariableError(missing[0])
    return float(result)


def format_scalar(expr: ScalarExpr) -> str:
    """Render in the model-file grammar (`^` for powers)."""
    return sp.sstr(expr, order="lex").replace("**", "^")
