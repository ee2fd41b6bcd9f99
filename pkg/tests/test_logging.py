"""Tests for supermech.logging module."""

from __future__ import annotations

import io
import json

import pytest
import structlog
import sympy as sp

from supermech.logging import (
    SafeWriter,
    _level_value,
    _stringify_symbolic,
    _truthy,
    bind_context,
    clear_context,
    get_logger,
    log_pipeline,
    log_stage,
    setup_logging,
    suppress_logs,
)
from supermech.superfunction import SuperFunction
from tests.factories import base


class TestTruthy:
    """Tests for _truthy function."""

    def test_none_is_false(self) -> None:
        assert _truthy(None) is False

    def test_empty_string_is_false(self) -> None:
        assert _truthy("") is False

    @pytest.mark.parametrize("value", ["1", "true", "True", "TRUE", "yes", "Yes", "on"])
    def test_truthy_values(self, value: str) -> None:
        assert _truthy(value) is True

    @pytest.mark.parametrize("value", ["0", "false", "no", "off", "invalid"])
    def test_falsy_values(self, value: str) -> None:
        assert _truthy(value) is False

    def test_whitespace_is_trimmed(self) -> None:
        assert _truthy("  true  ") is True


class TestLevelValue:
    """Tests for _level_value function."""

    def test_default_for_none(self) -> None:
        assert _level_value(None) == 30  # warning

    def test_custom_default(self) -> None:
        assert _level_value("", default="debug") == 10

    def test_valid_levels(self) -> None:
        assert _level_value("debug") == 10
        assert _level_value("info") == 20
        assert _level_value("error") == 40
        assert _level_value("critical") == 50

    def test_case_insensitive(self) -> None:
        assert _level_value("DEBUG") == 10
        assert _level_value("Warning") == 30

    def test_invalid_level_uses_default(self) -> None:
        assert _level_value("invalid") == 30
        assert _level_value("invalid", default="info") == 20


class TestStringifySymbolic:
    """Tests for the processor that renders algebra objects."""

    def test_expressions_become_strings(self) -> None:
        q = sp.Symbol("q1")
        f = SuperFunction.coordinate(base(1, 2), "th1")
        event = _stringify_symbolic(None, "info", {"expr": q**2, "f": f, "count": 3})
        assert event == {"expr": "q1**2", "f": "th1", "count": 3}


class TestSafeWriter:
    """Tests for SafeWriter class."""

    def test_write_to_stream(self) -> None:
        stream = io.StringIO()
        writer = SafeWriter(stream)
        assert writer.write("hello") == 5
        assert stream.getvalue() == "hello"

    def test_isatty_returns_false_for_stringio(self) -> None:
        assert SafeWriter(io.StringIO()).isatty() is False

    def test_handles_closed_stream(self) -> None:
        writer = SafeWriter(io.StringIO())
        writer._closed = True
        assert writer.write("hello") == 0
        writer.flush()

    def test_broken_pipe_goes_quiet(self) -> None:
        class Broken(io.StringIO):
            def write(self, message: str) -> int:
                raise BrokenPipeError

        writer = SafeWriter(Broken())
        assert writer.write("x") == 0
        assert writer.write("y") == 0


class TestSetupLogging:
    """Tests for setup_logging and the level filter."""

    @pytest.fixture
    def log_file(self, tmp_path, monkeypatch: pytest.MonkeyPatch):
        path = tmp_path / "supermech.log"
        monkeypatch.setenv("SUPERMECH_LOG_FILE", str(path))
        monkeypatch.setenv("SUPERMECH_LOG_FORMAT", "json")
        yield path
        for key in ("SUPERMECH_LOG_FILE", "SUPERMECH_LOG_LEVEL", "SUPERMECH_TRACE_PIPELINE"):
            monkeypatch.delenv(key, raising=False)
        setup_logging()

    def _events(self, path) -> list[dict]:
        structlog.reset_defaults()
        return [json.loads(line) for line in path.read_text().splitlines()]

    def test_warning_is_default_threshold(self, log_file) -> None:
        setup_logging()
        logger = get_logger("supermech.test")
        logger.info("quiet")
        logger.warning("loud", value=1)
        events = self._events(log_file)
        assert [e["event"] for e in events] == ["loud"]
        assert events[0]["logger"] == "supermech.test"
        assert events[0]["level"] == "warning"

    def test_debug_flag(self, log_file) -> None:
        setup_logging(debug=True)
        log_pipeline(get_logger("supermech.test"), "step", n=1)
        assert [e["event"] for e in self._events(log_file)] == ["step"]

    def test_trace_pipeline_promotes_steps(self, log_file, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("SUPERMECH_LOG_LEVEL", "info")
        monkeypatch.setenv("SUPERMECH_TRACE_PIPELINE", "1")
        setup_logging()
        log_pipeline(get_logger(), "step")
        assert [e["level"] for e in self._events(log_file)] == ["info"]

    def test_suppress_logs(self, log_file) -> None:
        setup_logging(debug=True)
        logger = get_logger()
        with suppress_logs("error"):
            logger.warning("hidden")
            logger.error("shown")
        logger.info("after")
        assert [e["event"] for e in self._events(log_file)] == ["shown", "after"]

    def test_context_is_merged(self, log_file) -> None:
        setup_logging()
        bind_context(suite="forms")
        get_logger().warning("tagged")
        clear_context()
        get_logger().warning("plain")
        events = self._events(log_file)
        assert events[0]["suite"] == "forms"
        assert "suite" not in events[1]

    def test_log_stage(self, log_file) -> None:
        setup_logging(debug=True)
        logger = get_logger()
        with log_stage(logger, "work", item="a"):
            pass
        with pytest.raises(ValueError), log_stage(logger, "boom"):
            raise ValueError("bad")
        events = self._events(log_file)
        assert [e["event"] for e in events] == [
            "work.started",
            "work.finished",
            "boom.started",
            "boom.failed",
        ]
        assert "elapsed_ms" in events[1]
        assert events[3]["error_type"] == "ValueError"
