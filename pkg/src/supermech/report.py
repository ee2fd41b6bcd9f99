"""The analysis pipeline: model in, report out.

`analyze` never raises on degenerate or non-invertible models; it records the
reasons and leaves the sections it cannot compute empty.
"""

from __future__ import annotations

import time

from . import __version__
from .coordinates import Parity
from .errors import DegenerateLagrangianError, NotAffineError, NotHyperregularError
from .legendre import hamiltonian, invert_legendre, legendre, verify_theta_pullback
from .logging import bind_context, clear_context, get_logger, log_stage
from .mechanics import LagrangianSystem, RegularityReport
from .modelfile import ModelSpec
from .schemas import (
    Assignment,
    Check,
    CoordinateEcho,
    Equation,
    HamiltonianSection,
    LegendreSection,
    ModelEcho,
    RegularitySection,
    Report,
)
from .superfunction import SuperFunction, format_superfunction

logger = get_logger(__name__)


def _parity_name(parity: Parity) -> str:
    return parity.name.lower()


def _assignments(pairs: list[tuple[str, SuperFunction]]) -> list[Assignment]:
    return [Assignment(name, format_superfunction(value)) for name, value in pairs]


def model_echo(spec: ModelSpec) -> ModelEcho:
    return ModelEcho(
        name=spec.name,
        m=spec.m,
        n=spec.n,
        chart=spec.chart.label,
        coordinates=[
            CoordinateEcho(c.name, _parity_name(c.parity), str(c.role))
            for c in spec.chart.coordinates
        ],
        lagrangian=format_superfunction(spec.lagrangian),
        parity=_parity_name(spec.parity),
        flags=list(spec.flags),
    )


def regularity_section(report: RegularityReport) -> RegularitySection:
    return RegularitySection(
        parity=_parity_name(report.parity),
        operator_order=report.operator_order,
        blocks={label: block.format_rows() for label, block in report.blocks.items()},
        block_verdicts=dict(report.block_verdicts),
        omega_body_rank=report.omega_body_rank,
        omega_dimension=report.omega_dimension,
        verdict=report.verdict,
        reasons=list(report.all_reasons),
        criteria_agree=report.criteria_agree,
    )


def _structure_checks(system: LagrangianSystem) -> list[Check]:
    checks = [Check("Theta_L is tau-semibasic", system.theta_is_semibasic())]
    m, n = system.base.base_dimension
    if m + n:
        rank, dimension = system.stm_omega_rank()
        checks.append(
            Check(
                "Omega_L is degenerate on STM",
                rank < dimension,
                f"body rank {rank}/{dimension}",
            )
        )
    return checks


def analyze(spec: ModelSpec, *, timing: bool = False) -> Report:
    """Run the full pipeline on a parsed model."""
    started = time.perf_counter()
    clear_context()
    bind_context(model=spec.name)
    system = spec.system()
    regularity = system.regularity
    checks = _structure_checks(system)
    equations: list[Equation] = []

    if system.is_regular:
        try:
            with log_stage(logger, "analysis.dynamics"):
                for equation in system.euler_lagrange():
                    equations.append(Equation(equation.lhs, format_superfunction(equation.rhs)))
                checks.extend(Check(name, passed) for name, passed in system.identities().items())
        except DegenerateLagrangianError as exc:
            checks.append(Check("dynamics solved", False, "; ".join(exc.reasons)))

    fl = legendre(system)
    checks.append(Check("FL*(Theta_0) = Theta_L", verify_theta_pullback(fl)))
    legendre_section = LegendreSection(
        target_chart=fl.target.label,
        momenta=_assignments(fl.momenta()),
        printed_table=_assignments(fl.printed_momenta()),
        table_agrees=fl.table_agrees,
    )

    hamiltonian_section: HamiltonianSection | None = None
    if system.is_regular and equations:
        try:
            inverse = invert_legendre(fl)
        except (NotAffineError, NotHyperregularError, DegenerateLagrangianError) as exc:
            legendre_section.inverse_error = str(exc)
            logger.info("analysis.no_inverse", model=spec.name, error=str(exc))
        else:
            legendre_section.inverse = _assignments(list(inverse.assignment.items()))
            ham = hamiltonian(fl, inverse)
            hamiltonian_section = HamiltonianSection(
                hamiltonian=format_superfunction(ham.hamiltonian),
                field=_assignments(
                    [(name, ham.field.components[name]) for name in ham.field.cs.names]
                ),
                theta_of_field=format_superfunction(ham.theta_of_field),
            )
            checks.extend(ham.checks)

    report = Report(
        version=__version__,
        model=model_echo(spec),
        cartan_one_form=str(system.theta),
        energy=format_superfunction(system.energy),
        regularity=regularity_section(regularity),
        equations=equations,
        legendre=legendre_section,
        hamiltonian=hamiltonian_section,
        checks=checks,
        timing_seconds=round(time.perf_counter() - started, 3) if timing else None,
    )
    logger.info(
        "analysis.completed",
        model=spec.name,
        verdict=regularity.verdict,
        failed=sum(not check.passed for check in checks),
    )
    return report

