"""Expression grammar shared by model and atlas files.

Infix arithmetic with `+ - * / ^`, unary minus, integer literals (rationals
are written `p/q`), identifiers and `sin/cos/exp` application. Expressions
are turned straight into superfunctions over a chart: even identifiers become
scalar symbols, odd ones become Grassmann generators.
"""

from __future__ import annotations

from collections.abc import Callable
from functools import cache

import sympy as sp
from lark import Lark, Token, Transformer, v_args
from lark.exceptions import (
    UnexpectedCharacters,
    UnexpectedEOF,
    UnexpectedInput,
    UnexpectedToken,
    VisitError,
)

from .coordinates import CoordinateSystem
from .errors import ModelError, ModelSyntaxError, UnknownIdentifierError
from .scalar import ELEMENTARY_FUNCTIONS
from .superfunction import SuperFunction, compose_scalar

EXPRESSION_GRAMMAR = r"""
    ?start: sum

    ?sum: product
        | sum "+" product   -> add
        | sum "-" product   -> sub

    ?product: unary
        | product "*" unary -> mul
        | product "/" unary -> div

    ?unary: power
        | "-" unary         -> neg
        | "+" unary

    ?power: atom
        | atom "^" unary    -> pow

    ?atom: INT              -> number
        | NAME "(" sum ")"  -> call
        | NAME              -> name
        | "(" sum ")"

    NAME: /[A-Za-z][A-Za-z0-9_]*/

    %import common.INT
    %import common.WS_INLINE
    %ignore WS_INLINE
"""

# Resolves an identifier that is not a coordinate of the chart; returning None
# means "unknown", raising ModelError rejects it with a custom message.
Resolver = Callable[[Token], SuperFunction | None]


@cache
def _parser() -> Lark:
    return Lark(EXPRESSION_GRAMMAR, start="start", parser="lalr", maybe_placeholders=False)


@v_args(inline=True)
class _ToSuperFunction(Transformer):
    def __init__(
        self,
        cs: CoordinateSystem,
        *,
        line: int,
        column_offset: int,
        resolve: Resolver | None,
    ) -> None:
        super().__init__()
        self.cs = cs
        self.line = line
        self.column_offset = column_offset
        self.resolve = resolve

    def _unknown(self, token: Token) -> UnknownIdentifierError:
        return UnknownIdentifierError(
            str(token), line=self.line, column=self.column_offset + (token.column or 1)
        )

    def number(self, token: Token) -> SuperFunction:
        return SuperFunction.constant(self.cs, int(token))

    def name(self, token: Token) -> SuperFunction:
        if str(token) in self.cs:
            return SuperFunction.coordinate(self.cs, str(token))
        if self.resolve is not None:
            resolved = self.resolve(token)
            if resolved is not None:
                return resolved
        raise self._unknown(token)

    def call(self, token: Token, argument: SuperFunction) -> SuperFunction:
        function = ELEMENTARY_FUNCTIONS.get(str(token))
        if function is None:
            raise self._unknown(token)
        x = sp.Dummy("x")
        return compose_scalar(function(x), {x: argument}, self.cs)

    def add(self, a: SuperFunction, b: SuperFunction) -> SuperFunction:
        return a + b

    def sub(self, a: SuperFunction, b: SuperFunction) -> SuperFunction:
        return a - b

    def mul(self, a: SuperFunction, b: SuperFunction) -> SuperFunction:
        return a * b

    def div(self, a: SuperFunction, b: SuperFunction) -> SuperFunction:
        return a / b

    def neg(self, a: SuperFunction) -> SuperFunction:
        return -a

    def pow(self, base: SuperFunction, exponent: SuperFunction) -> SuperFunction:
        value = exponent.body
        if not exponent.soul.is_zero() or not isinstance(value, sp.Integer):
            raise ModelError(
                f"line {self.line}: exponents must be integer constants, got {exponent}"
            )
        return base ** int(value)


def parse_expression(
    text: str,
    cs: CoordinateSystem,
    *,
    line: int = 1,
    column_offset: int = 0,
    resolve: Resolver | None = None,
) -> SuperFunction:
    """Parse an expression into a superfunction over `cs`.

    `line` and `column_offset` place the text inside a larger file so errors
    point at the right spot.

    Raises:
        ModelSyntaxError: The text does not match the grammar.
        UnknownIdentifierError: An identifier is neither a coordinate of `cs`
            nor accepted by `resolve`.
    """
    if not text.strip():
        raise ModelSyntaxError("empty expression", line=line, column=column_offset + 1)
    try:
        tree = _parser().parse(text)
    except UnexpectedInput as exc:
        at_end = isinstance(exc, UnexpectedEOF) or (
            isinstance(exc, UnexpectedToken) and exc.token.type == "$END"
        )
        column = exc.column if not at_end and exc.column and exc.column > 0 else len(text) + 1
        if isinstance(exc, UnexpectedCharacters):
            message = f"unexpected character {text[exc.pos_in_stream]!r}"
        elif at_end:
            message = "unexpected end of expression"
        else:
            message = f"unexpected token {str(exc.token)!r}"
        raise ModelSyntaxError(message, line=line, column=column_offset + column) from None
    transformer = _ToSuperFunction(cs, line=line, column_offset=column_offset, resolve=resolve)
    try:
        return transformer.transform(tree)
    except VisitError as exc:
        raise exc.orig_exc from None
