"""Model files: a named super-Lagrangian on a tangent-bundle chart.

    model "<name>"
    even q1 ... qm
    odd th1 ... thn
    option <flag>            (any number, optional)
    lagrangian <expression in q*, th*, v*, z*>

Velocities `v<i>` and `z<a>` are declared implicitly from the even and odd
lists. `#` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from importlib.resources.abc import Traversable
from pathlib import Path

from lark import Token

from .charts import base_chart, make_chart
from .coordinates import ChartKind, CoordinateSystem, Parity
from .errors import (
    ModelError,
    ModelSyntaxError,
    NonHomogeneousLagrangianError,
)
from .grammar import parse_expression
from .logging import get_logger
from .mechanics import LagrangianSystem
from .scalar import ELEMENTARY_FUNCTIONS
from .superfunction import SuperFunction, format_superfunction

logger = get_logger(__name__)

MODEL_SUFFIX = ".model"
_IDENTIFIER = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
_HEADER = re.compile(r'model\s+(?:"(?P<quoted>[^"]*)"|(?P<bare>\S+))\s*\Z')


@dataclass(frozen=True, eq=False)
class ModelSpec:
    name: str
    chart: CoordinateSystem
    lagrangian: SuperFunction
    flags: tuple[str, ...] = ()

    @property
    def base(self) -> CoordinateSystem:
        return base_chart(self.chart)

    @property
    def m(self) -> int:
        return self.chart.base_dimension[0]

    @property
    def n(self) -> int:
        return self.chart.base_dimension[1]

    @property
    def parity(self) -> Parity:
        parity = self.lagrangian.parity
        assert parity is not None
        return parity

    def system(self) -> LagrangianSystem:
        return LagrangianSystem(self.lagrangian, self.name)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ModelSpec):
            return NotImplemented
        return (
            self.name == other.name
            and self.chart == other.chart
            and self.flags == other.flags
            and self.lagrangian == other.lagrangian
        )


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].rstrip()


def _declared_names(keyword: str, rest: str, line_no: int, column: int) -> list[str]:
    names = rest.split()
    for name in names:
        if not _IDENTIFIER.match(name) or name in ELEMENTARY_FUNCTIONS:
            raise ModelSyntaxError(
                f"invalid coordinate name {name!r} in {keyword!r} list",
                line=line_no,
                column=column + rest.find(name) + 1,
            )
    return names


def parse_model_text(text: str, *, source: str = "<string>") -> ModelSpec:
    """Parse model text; errors carry line and column.

    Raises:
        ModelSyntaxError: Malformed or missing declarations.
        UnknownIdentifierError: The Lagrangian uses an undeclared identifier.
        ModelError: The Lagrangian uses parity-changed velocities.
        NonHomogeneousLagrangianError: The Lagrangian mixes parities.
    """
    name: str | None = None
    even: list[str] | None = None
    odd: list[str] | None = None
    flags: list[str] = []
    lagrangian: tuple[str, int, int] | None = None
    last_line = 1

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        last_line = line_no
        indent = len(line) - len(line.lstrip())
        stripped = line.strip()
        keyword, _, rest = stripped.partition(" ")
        rest_column = indent + len(keyword) + 1
        if keyword == "model":
            match = _HEADER.match(stripped)
            if match is None or name is not None:
                raise ModelSyntaxError("expected one `model \"<name>\"` header", line=line_no, column=indent + 1)
            name = match.group("quoted") if match.group("quoted") is not None else match.group("bare")
        elif name is None:
            raise ModelSyntaxError("the file must start with `model \"<name>\"`", line=line_no, column=indent + 1)
        elif keyword == "even" and even is None:
            even = _declared_names(keyword, rest, line_no, rest_column)
        elif keyword == "odd" and odd is None:
            odd = _declared_names(keyword, rest, line_no, rest_column)
        elif keyword == "option":
            flag = rest.strip()
            if not _IDENTIFIER.match(flag.replace("-", "_")):
                raise ModelSyntaxError(f"invalid option {flag!r}", line=line_no, column=rest_column + 1)
            flags.append(flag)
        elif keyword == "lagrangian" and lagrangian is None:
            offset = rest_column + (len(rest) - len(rest.lstrip()))
            lagrangian = (rest.strip(), line_no, offset)
        else:
            raise ModelSyntaxError(f"unexpected {keyword!r}", line=line_no, column=indent + 1)

    if name is None:
        raise ModelSyntaxError("empty model file", line=1, column=1)
    if lagrangian is None:
        raise ModelSyntaxError("missing `lagrangian` line", line=last_line, column=1)
    even = even or []
    odd = odd or []

    try:
        chart = make_chart(ChartKind.TANGENT, len(even), len(odd), even_names=even, odd_names=odd)
        stm = make_chart(ChartKind.TANGENT_SUPER, len(even), len(odd), even_names=even, odd_names=odd)
    except ValueError as exc:
        raise ModelError(f"{source}: {exc}") from exc

    expression, line_no, offset = lagrangian

    def reject_pi(token: Token) -> SuperFunction | None:
        if str(token) in stm:
            raise ModelError(
                f"line {line_no}, column {offset + (token.column or 1)}: "
                f"Lagrangian must live on TM, {token} is a parity-changed velocity"
            )
        return None

    value = parse_expression(
        expression, chart, line=line_no, column_offset=offset, resolve=reject_pi
    )
    if value.parity is None:
        raise NonHomogeneousLagrangianError(
            f"line {line_no}: Lagrangian {value} mixes even and odd parts"
        )
    spec = ModelSpec(name=name, chart=chart, lagrangian=value, flags=tuple(flags))
    logger.debug("model.parsed", source=source, model=name, m=spec.m, n=spec.n)
    return spec


def parse_model(path: Path | str) -> ModelSpec:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ModelError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_model_text(text, source=str(path))


def format_model(spec: ModelSpec) -> str:
    """Text that parses back to an equal ModelSpec."""
    base = spec.base
    lines = [
        f'model "{spec.name}"',
        " ".join(["even", *(c.name for c in base.even)]),
        " ".join(["odd", *(c.name for c in base.odd)]),
        *(f"option {flag}" for flag in spec.flags),
        f"lagrangian {format_superfunction(spec.lagrangian)}",
    ]
    return "\n".join(lines) + "\n"


def _data_dir(kind: str) -> Traversable:
    return resources.files("supermech").joinpath("data", kind)


def bundled_files(kind: str, suffix: str) -> dict[str, Traversable]:
    """Bundled example files by stem, sorted."""
    entries = {
        entry.name.removesuffix(suffix): entry
        for entry in _data_dir(kind).iterdir()
        if entry.name.endswith(suffix)
    }
    return dict(sorted(entries.items()))


def bundled_models() -> dict[str, Traversable]:
    return bundled_files("models", MODEL_SUFFIX)


def load_bundled_model(name: str) -> ModelSpec:
    models = bundled_models()
    if name not in models:
        raise ModelError(f"no bundled model {name!r}; known: {', '.join(models)}")
    return parse_model_text(models[name].read_text(encoding="utf-8"), source=f"bundled:{name}")
