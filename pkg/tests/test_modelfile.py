"""Tests for supermech.modelfile module."""

from __future__ import annotations

from pathlib import Path

import pytest

from supermech.coordinates import ChartKind, Parity
from supermech.errors import (
    ModelError,
    ModelSyntaxError,
    NonHomogeneousLagrangianError,
    UnknownIdentifierError,
)
from supermech.modelfile import (
    bundled_models,
    format_model,
    load_bundled_model,
    parse_model,
    parse_model_text,
)
from tests.factories import coords

FREE = """\
# a free particle with two odd partners
model "free"
even q1
odd th1 th2
lagrangian 1/2*v1^2 + 1/2*z1*z2
"""


class TestParseModel:
    def test_free_superparticle(self) -> None:
        spec = parse_model_text(FREE)
        assert spec.name == "free"
        assert spec.chart.kind is ChartKind.TANGENT
        assert (spec.m, spec.n) == (1, 2)
        assert spec.parity is Parity.EVEN
        v, z1, z2 = coords(spec.chart, "v1", "z1", "z2")
        assert spec.lagrangian == v * v / 2 + z1 * z2 / 2

    def test_custom_names_and_options(self) -> None:
        spec = parse_model_text("model rotor\neven x y\nodd\noption demo\nlagrangian v1*v2\n")
        assert spec.chart.names[:4] == ("x", "y", "v1", "v2")
        assert spec.flags == ("demo",)
        assert spec.n == 0

    def test_odd_lagrangian(self) -> None:
        spec = parse_model_text('model "odd"\neven q1\nodd th1\nlagrangian v1*z1 + q1*th1\n')
        assert spec.parity is Parity.ODD

    def test_comments_and_blank_lines(self) -> None:
        text = FREE.replace("even q1", "\neven q1   # position")
        assert parse_model_text(text) == parse_model_text(FREE)

    def test_parse_model_reads_file(self, tmp_path: Path) -> None:
        path = tmp_path / "free.model"
        path.write_text(FREE, encoding="utf-8")
        assert parse_model(path) == parse_model_text(FREE)

    def test_missing_file(self, tmp_path: Path) -> None:
        with pytest.raises(ModelError, match="cannot read"):
            parse_model(tmp_path / "missing.model")


class TestModelErrors:
    def test_empty_file(self) -> None:
        with pytest.raises(ModelSyntaxError, match="empty model file"):
            parse_model_text("# nothing here\n")

    def test_header_must_come_first(self) -> None:
        with pytest.raises(ModelSyntaxError) as exc_info:
            parse_model_text("even q1\n")
        assert exc_info.value.line == 1

    def test_missing_lagrangian(self) -> None:
        with pytest.raises(ModelSyntaxError) as exc_info:
            parse_model_text('model "m"\neven q1\nodd th1\n')
        assert exc_info.value.line == 3
        assert "missing `lagrangian` line" in str(exc_info.value)

    def test_unknown_keyword(self) -> None:
        with pytest.raises(ModelSyntaxError) as exc_info:
            parse_model_text('model "m"\n  potential q1\n')
        assert (exc_info.value.line, exc_info.value.column) == (2, 3)

    def test_invalid_coordinate_name(self) -> None:
        with pytest.raises(ModelSyntaxError) as exc_info:
            parse_model_text('model "m"\neven q1 sin\nlagrangian v1\n')
        assert (exc_info.value.line, exc_info.value.column) == (2, 9)

    def test_syntax_error_position(self) -> None:
        with pytest.raises(ModelSyntaxError) as exc_info:
            parse_model_text('model "m"\neven q1\nodd th1\nlagrangian v1 +\n')
        assert (exc_info.value.line, exc_info.value.column) == (4, 16)

    def test_unknown_identifier_position(self) -> None:
        with pytest.raises(UnknownIdentifierError) as exc_info:
            parse_model_text('model "m"\neven q1\nodd th1\nlagrangian v1*w1\n')
        assert (exc_info.value.line, exc_info.value.column) == (4, 15)

    def test_parity_changed_velocity_rejected(self) -> None:
        with pytest.raises(ModelError, match="Lagrangian must live on TM"):
            parse_model_text('model "m"\neven q1\nodd th1\nlagrangian v1*pv1\n')

    def test_mixed_parity_rejected(self) -> None:
        with pytest.raises(NonHomogeneousLagrangianError):
            parse_model_text('model "m"\neven q1\nodd th1\nlagrangian v1 + z1\n')

    def test_duplicate_names(self) -> None:
        with pytest.raises(ModelError):
            parse_model_text('model "m"\neven q1 q1\nlagrangian v1\n')


class TestBundledModels:
    def test_listing(self) -> None:
        models = bundled_models()
        assert list(models) == sorted(models)
        assert {"free-superparticle", "harmonic", "odd-vz", "quartic"} <= set(models)

    def test_unknown(self) -> None:
        with pytest.raises(ModelError, match="no bundled model"):
            load_bundled_model("nope")

    @pytest.mark.parametrize("name", list(bundled_models()))
    def test_format_round_trip(self, name: str) -> None:
        spec = load_bundled_model(name)
        assert parse_model_text(format_model(spec)) == spec
