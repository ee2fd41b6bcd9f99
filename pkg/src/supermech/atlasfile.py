"""Atlas files: charts of one base superdomain and their transitions.

    atlas <name>
    option batchelor                     (optional)
    chart <id> even <m> odd <n>
    transition <id1> <id2>
      <coord> := <superfunction-expression>
      ...
    end

Every chart uses the default names q1..qm, th1..thn. A transition block gives
chart-<id2> coordinates as functions of chart-<id1> coordinates; coordinates
left out are kept unchanged.
"""

from __future__ import annotations

import re
import time
from importlib.resources.abc import Traversable
from pathlib import Path

from .atlas import AtlasSpec, check_atlas
from .charts import make_chart
from .coordinates import ChartKind, CoordinateSystem
from .errors import ModelError, ModelSyntaxError
from .grammar import parse_expression
from .logging import get_logger
from .modelfile import bundled_files
from .morphisms import SuperMorphism
from .schemas import Assignment, AtlasReport, TransitionEcho
from .superfunction import SuperFunction, format_superfunction

logger = get_logger(__name__)

ATLAS_SUFFIX = ".atlas"
_CHART = re.compile(r"chart\s+(?P<id>\S+)\s+even\s+(?P<m>\d+)\s+odd\s+(?P<n>\d+)\s*\Z")
_TRANSITION = re.compile(r"transition\s+(?P<a>\S+)\s+(?P<b>\S+)\s*\Z")
_ASSIGNMENT = re.compile(r"(?P<coord>[A-Za-z][A-Za-z0-9_]*)\s*:=\s*")


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].rstrip()


def parse_atlas_text(text: str, *, source: str = "<string>") -> AtlasSpec:
    """Parse atlas text into charts and transition morphisms.

    Raises:
        ModelSyntaxError: Malformed lines, unknown charts, unterminated blocks.
        UnknownIdentifierError: A right-hand side uses a name outside the source chart.
        ModelError: Duplicate charts or transitions, or mismatched chart dimensions.
    """
    name: str | None = None
    batchelor = False
    charts: dict[str, CoordinateSystem] = {}
    transitions: dict[tuple[str, str], SuperMorphism] = {}
    block: tuple[str, str, int] | None = None
    images: dict[str, SuperFunction] = {}

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        stripped = line.strip()
        column = indent + 1

        if block is not None:
            a, b, _ = block
            if stripped == "end":
                source_cs, target_cs = charts[a], charts[b]
                transitions[(a, b)] = SuperMorphism.from_mapping(
                    source_cs, target_cs, images, name=f"{a}->{b}"
                )
                block, images = None, {}
                continue
            match = _ASSIGNMENT.match(stripped)
            if match is None:
                raise ModelSyntaxError("expected `<coord> := <expression>` or `end`", line=line_no, column=column)
            coord = match.group("coord")
            if coord not in charts[b]:
                raise ModelSyntaxError(
                    f"{coord!r} is not a coordinate of chart {b!r}", line=line_no, column=column
                )
            if coord in images:
                raise ModelSyntaxError(f"{coord!r} assigned twice", line=line_no, column=column)
            images[coord] = parse_expression(
                stripped[match.end() :], charts[a], line=line_no, column_offset=indent + match.end()
            )
            continue

        keyword = stripped.split()[0]
        if keyword == "atlas":
            parts = stripped.split(maxsplit=1)
            if name is not None or len(parts) != 2:
                raise ModelSyntaxError("expected one `atlas <name>` header", line=line_no, column=column)
            name = parts[1].strip('"')
        elif name is None:
            raise ModelSyntaxError("the file must start with `atlas <name>`", line=line_no, column=column)
        elif stripped == "option batchelor":
            batchelor = True
        elif keyword == "chart":
            match = _CHART.match(stripped)
            if match is None:
                raise ModelSyntaxError("expected `chart <id> even <m> odd <n>`", line=line_no, column=column)
            chart_id = match.group("id")
            if chart_id in charts:
                raise ModelError(f"line {line_no}: chart {chart_id!r} declared twice")
            charts[chart_id] = make_chart(
                ChartKind.BASE, int(match.group("m")), int(match.group("n")), base_label=chart_id
            )
        elif keyword == "transition":
            match = _TRANSITION.match(stripped)
            if match is None:
                raise ModelSyntaxError("expected `transition <id1> <id2>`", line=line_no, column=column)
            a, b = match.group("a"), match.group("b")
            for chart_id in (a, b):
                if chart_id not in charts:
                    raise ModelSyntaxError(
                        f"unknown chart {chart_id!r}", line=line_no, column=indent + stripped.find(chart_id) + 1
                    )
            if charts[a].dimension != charts[b].dimension:
                raise ModelError(f"line {line_no}: charts {a!r} and {b!r} have different dimensions")
            if (a, b) in transitions:
                raise ModelError(f"line {line_no}: transition {a} {b} declared twice")
            block = (a, b, line_no)
        else:
            raise ModelSyntaxError(f"unexpected {keyword!r}", line=line_no, column=column)

    if name is None:
        raise ModelSyntaxError("empty atlas file", line=1, column=1)
    if block is not None:
        raise ModelSyntaxError(f"transition {block[0]} {block[1]} is missing `end`", line=block[2], column=1)
    if not charts:
        raise ModelSyntaxError("an atlas needs at least one chart", line=1, column=1)
    logger.debug("atlas.parsed", source=source, atlas=name, charts=len(charts), transitions=len(transitions))
    return AtlasSpec(name=name, charts=charts, transitions=transitions, batchelor=batchelor)


def parse_atlas(path: Path | str) -> AtlasSpec:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ModelError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_atlas_text(text, source=str(path))


def bundled_atlases() -> dict[str, Traversable]:
    return bundled_files("atlases", ATLAS_SUFFIX)


def load_bundled_atlas(name: str) -> AtlasSpec:
    atlases = bundled_atlases()
    if name not in atlases:
        raise ModelError(f"no bundled atlas {name!r}; known: {', '.join(atlases)}")
    return parse_atlas_text(atlases[name].read_text(encoding="utf-8"), source=f"bundled:{name}")


def atlas_report(
    atlas: AtlasSpec, *, samples: int = 10, seed: int = 0, tolerance: float = 1e-9
) -> AtlasReport:
    """Run every atlas check and collect the result."""
    started = time.perf_counter()
    checks = check_atlas(atlas, samples=samples, seed=seed, tolerance=tolerance)
    transitions = [
        TransitionEcho(
            source=a,
            target=b,
            assignments=[
                Assignment(coordinate, format_superfunction(value))
                for coordinate, value in t.assignment.items()
            ],
        )
        for (a, b), t in sorted(atlas.transitions.items())
    ]
    report = AtlasReport(
        name=atlas.name,
        charts=list(atlas.charts),
        transitions=transitions,
        batchelor=atlas.batchelor,
        checks=checks,
    )
    logger.info(
        "atlas.report_built",
        atlas=atlas.name,
        passed=report.passed,
        checks=len(checks),
        elapsed=round(time.perf_counter() - started, 3),
    )
    return report
