"""Msgspec models for analysis reports, atlas reports and verification checklists."""

from __future__ import annotations

from typing import Literal, TypeAlias

import msgspec

Verdict: TypeAlias = Literal["regular", "degenerate"]


class Check(msgspec.Struct, frozen=True):
    name: str
    passed: bool
    detail: str = ""


class Checklist(msgspec.Struct):
    suite: str
    checks: list[Check] = msgspec.field(default_factory=list)
    seed: int | None = None

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [check for check in self.checks if not check.passed]


class CoordinateEcho(msgspec.Struct, frozen=True):
    name: str
    parity: Literal["even", "odd"]
    role: str


class ModelEcho(msgspec.Struct):
    name: str
    m: int
    n: int
    chart: str
    coordinates: list[CoordinateEcho]
    lagrangian: str
    parity: Literal["even", "odd"]
    flags: list[str] = msgspec.field(default_factory=list)


class Assignment(msgspec.Struct, frozen=True):
    coordinate: str
    value: str


class Equation(msgspec.Struct, frozen=True):
    lhs: str
    rhs: str


class RegularitySection(msgspec.Struct):
    parity: Literal["even", "odd"]
    operator_order: str
    blocks: dict[str, list[list[str]]]
    block_verdicts: dict[str, bool]
    omega_body_rank: int
    omega_dimension: int
    verdict: Verdict
    reasons: list[str]
    criteria_agree: bool


class LegendreSection(msgspec.Struct):
    target_chart: str
    momenta: list[Assignment]
    printed_table: list[Assignment]
    table_agrees: bool
    inverse: list[Assignment] | None = None
    inverse_error: str | None = None


class HamiltonianSection(msgspec.Struct):
    hamiltonian: str
    field: list[Assignment]
    theta_of_field: str


class Report(msgspec.Struct):
    version: str
    model: ModelEcho
    cartan_one_form: str
    energy: str
    regularity: RegularitySection
    equations: list[Equation]
    legendre: LegendreSection | None
    hamiltonian: HamiltonianSection | None
    checks: list[Check]
    timing_seconds: float | None = None

    @property
    def regular(self) -> bool:
        return self.regularity.verdict == "regular"


class TransitionEcho(msgspec.Struct, frozen=True):
    source: str
    target: str
    assignments: list[Assignment]


class AtlasReport(msgspec.Struct):
    name: str
    charts: list[str]
    transitions: list[TransitionEcho]
    batchelor: bool
    checks: list[Check]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)


_ENCODER = msgspec.json.Encoder(order="sorted")
_REPORT_DECODER = msgspec.json.Decoder(Report)
_ATLAS_DECODER = msgspec.json.Decoder(AtlasReport)


def encode_kv(value: msgspec.Struct) -> bytes:
    """Stable key-value tree: sorted keys, two-space indentation, trailing newline."""
    return msgspec.json.format(_ENCODER.encode(value), indent=2) + b"\n"


def decode_report(payload: bytes | str) -> Report:
    return _REPORT_DECODER.decode(payload)


def decode_atlas_report(payload: bytes | str) -> AtlasReport:
    return _ATLAS_DECODER.decode(payload)
