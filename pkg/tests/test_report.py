"""Tests for the analysis pipeline, its renderers and the key-value encoding."""

from __future__ import annotations

import json

import pytest

from supermech.modelfile import bundled_models, load_bundled_model
from supermech.render import check_line, format_header, render_checklist, render_report
from supermech.report import analyze
from supermech.schemas import Check, Checklist, decode_report, encode_kv
from supermech.verify import REGULAR_MODELS


@pytest.fixture(scope="module")
def free_report():
    return analyze(load_bundled_model("free-superparticle"))


class TestAnalyze:
    def test_regular_model(self, free_report) -> None:
        assert free_report.regular
        assert free_report.model.m == 1
        assert free_report.model.chart == "TM"
        assert [eq.lhs for eq in free_report.equations][:2] == ["d/dt q1", "d/dt v1"]
        assert free_report.hamiltonian is not None
        assert free_report.legendre.target_chart == "T*M"
        assert free_report.legendre.table_agrees
        assert all(check.passed for check in free_report.checks)

    def test_structure_checks_come_first(self, free_report) -> None:
        names = [check.name for check in free_report.checks]
        assert names[:2] == ["Theta_L is tau-semibasic", "Omega_L is degenerate on STM"]
        assert "FL*(Theta_0) = Theta_L" in names

    @pytest.mark.parametrize("name", ["free-superparticle", "quartic"])
    def test_check_names_are_unique(self, name: str) -> None:
        names = [check.name for check in analyze(load_bundled_model(name)).checks]
        assert len(names) == len(set(names))

    def test_degenerate_model(self) -> None:
        report = analyze(load_bundled_model("degenerate-zeta"))
        assert not report.regular
        assert report.regularity.verdict == "degenerate"
        assert report.regularity.reasons
        assert report.equations == []
        assert report.hamiltonian is None

    def test_odd_model_records_printed_table(self) -> None:
        report = analyze(load_bundled_model("odd-vz"))
        assert report.regular
        assert report.model.parity == "odd"
        assert report.legendre.target_chart == "PiT*M"
        assert not report.legendre.table_agrees
        assert [a.coordinate for a in report.legendre.printed_table] == ["peta1", "pp1"]

    def test_quartic_has_no_inverse(self) -> None:
        report = analyze(load_bundled_model("quartic"))
        assert report.regular
        assert report.hamiltonian is None
        assert report.legendre.inverse is None
        assert "not affine" in report.legendre.inverse_error

    def test_timing_is_optional(self) -> None:
        spec = load_bundled_model("harmonic")
        assert analyze(spec).timing_seconds is None
        assert analyze(spec, timing=True).timing_seconds is not None

    @pytest.mark.parametrize("name", REGULAR_MODELS)
    def test_bundled_regular_models_pass(self, name: str) -> None:
        report = analyze(load_bundled_model(name))
        assert [c.name for c in report.checks if not c.passed] == []


class TestKeyValue:
    def test_deterministic(self) -> None:
        spec = load_bundled_model("superoscillator")
        assert encode_kv(analyze(spec)) == encode_kv(analyze(spec))

    def test_sorted_and_indented(self, free_report) -> None:
        payload = encode_kv(free_report)
        assert payload.endswith(b"\n")
        tree = json.loads(payload)
        assert list(tree) == sorted(tree)
        assert payload.startswith(b'{\n  "')

    @pytest.mark.parametrize("name", list(bundled_models()))
    def test_decode(self, name: str) -> None:
        report = analyze(load_bundled_model(name))
        assert decode_report(encode_kv(report)) == report


class TestRender:
    def test_header(self, free_report) -> None:
        assert format_header(free_report) == (
            "model free-superparticle · (m, n) = (1, 2) · even Lagrangian · regular"
        )

    def test_sections(self, free_report) -> None:
        text = render_report(free_report)
        assert text.endswith("\n")
        for title in ("Cartan forms", "Energy", "Regularity: regular", "Legendre map to T*M", "Hamiltonian", "Checks"):
            assert f"\n{title}\n" in text
        assert "chart TM: [q1(e), v1(e), th1(o), th2(o), z1(o), z2(o)]" in text

    def test_degenerate_reasons_rendered(self) -> None:
        text = render_report(analyze(load_bundled_model("degenerate-zeta")))
        assert "Regularity: degenerate" in text
        assert "  reason: d2L/dz dz is not invertible" in text
        assert "Euler-Lagrange equations" not in text

    def test_check_line(self) -> None:
        assert check_line(Check("a", True)) == "  ✓ a"
        assert check_line(Check("b", False, "1/3 cases")) == "  ✗ b (1/3 cases)"

    def test_checklist(self) -> None:
        checklist = Checklist("forms", [Check("a", True), Check("b", False)], seed=7)
        assert render_checklist(checklist) == "suite forms · seed 7 · 1/2 passed\n  ✓ a\n  ✗ b\n"
