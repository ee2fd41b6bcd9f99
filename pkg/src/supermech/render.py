"""Pure text renderers for reports and checklists (no computation here)."""

from __future__ import annotations

from collections.abc import Iterable

from .schemas import Assignment, AtlasReport, Check, Checklist, Report

STATUS = {"pass": "✓", "fail": "✗"}
HEADER_SEP = " · "
INDENT = "  "


def check_line(check: Check) -> str:
    status = STATUS["pass"] if check.passed else STATUS["fail"]
    line = f"{INDENT}{status} {check.name}"
    if check.detail:
        line += f" ({check.detail})"
    return line


def _assignment_lines(assignments: Iterable[Assignment], *, arrow: str = "=") -> list[str]:
    return [f"{INDENT}{a.coordinate} {arrow} {a.value}" for a in assignments]


def _section(title: str, lines: list[str]) -> list[str]:
    return ["", title, *lines]


def format_header(report: Report) -> str:
    model = report.model
    parts = [
        f"model {model.name}",
        f"(m, n) = ({model.m}, {model.n})",
        f"{model.parity} Lagrangian",
        report.regularity.verdict,
    ]
    return HEADER_SEP.join(parts)


def render_report(report: Report) -> str:
    """Deterministic text form of an analysis report."""
    model = report.model
    coordinates = ", ".join(f"{c.name}({c.parity[0]})" for c in model.coordinates)
    lines = [
        format_header(report),
        f"chart {model.chart}: [{coordinates}]",
        f"L = {model.lagrangian}",
    ]
    if model.flags:
        lines.append("options: " + ", ".join(model.flags))

    lines += _section("Cartan forms", [f"{INDENT}Theta_L = {report.cartan_one_form}"])
    lines += _section("Energy", [f"{INDENT}E_L = {report.energy}"])

    regularity = report.regularity
    body = [f"{INDENT}order: {regularity.operator_order}"]
    for label, rows in regularity.blocks.items():
        verdict = "invertible" if regularity.block_verdicts[label] else "singular"
        matrix = "[" + "; ".join(", ".join(row) for row in rows) + "]"
        body.append(f"{INDENT}{label} = {matrix} {verdict}")
    body.append(
        f"{INDENT}Omega_L body rank {regularity.omega_body_rank}/{regularity.omega_dimension}"
    )
    body += [f"{INDENT}reason: {reason}" for reason in regularity.reasons]
    lines += _section(f"Regularity: {regularity.verdict}", body)

    if report.equations:
        lines += _section(
            "Euler-Lagrange equations",
            [f"{INDENT}{eq.lhs} = {eq.rhs}" for eq in report.equations],
        )

    if report.legendre is not None:
        legendre = report.legendre
        body = _assignment_lines(legendre.momenta, arrow="<-")
        if legendre.table_agrees:
            body.append(f"{INDENT}printed table agrees")
        else:
            body.append(f"{INDENT}printed table differs:")
            body += [INDENT + line for line in _assignment_lines(legendre.printed_table, arrow="<-")]
        if legendre.inverse is not None:
            body.append(f"{INDENT}inverse:")
            body += [INDENT + line for line in _assignment_lines(legendre.inverse, arrow="<-")]
        if legendre.inverse_error is not None:
            body.append(f"{INDENT}no inverse: {legendre.inverse_error}")
        lines += _section(f"Legendre map to {legendre.target_chart}", body)

    if report.hamiltonian is not None:
        ham = report.hamiltonian
        body = [f"{INDENT}H = {ham.hamiltonian}", f"{INDENT}V:"]
        body += [INDENT + line for line in _assignment_lines(ham.field)]
        body.append(f"{INDENT}Theta_0(V) = {ham.theta_of_field}")
        lines += _section("Hamiltonian", body)

    lines += _section("Checks", [check_line(check) for check in report.checks])
    if report.timing_seconds is not None:
        lines += ["", f"elapsed {report.timing_seconds:.3f}s"]
    return "\n".join(lines) + "\n"


def render_atlas_report(report: AtlasReport) -> str:
    header = HEADER_SEP.join(
        [
            f"atlas {report.name}",
            f"{len(report.charts)} charts",
            f"{len(report.transitions)} transitions",
            *(["Batchelor"] if report.batchelor else []),
        ]
    )
    lines = [header]
    for transition in report.transitions:
        lines.append("")
        lines.append(f"transition {transition.source} -> {transition.target}")
        lines += _assignment_lines(transition.assignments, arrow=":=")
    lines += _section("Checks", [check_line(check) for check in report.checks])
    return "\n".join(lines) + "\n"


def render_checklist(checklist: Checklist) -> str:
    seed = f"{HEADER_SEP}seed {checklist.seed}" if checklist.seed is not None else ""
    passed = sum(check.passed for check in checklist.checks)
    lines = [f"suite {checklist.suite}{seed}{HEADER_SEP}{passed}/{len(checklist.checks)} passed"]
    lines += [check_line(check) for check in checklist.checks]
    return "\n".join(lines) + "\n"
