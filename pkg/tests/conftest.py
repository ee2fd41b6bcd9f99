import os
import sys
from pathlib import Path

import pytest
import structlog
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

# Symbolic normalization is slow on the first calls while sympy warms its caches.
settings.register_profile("supermech", deadline=None, max_examples=40)
settings.load_profile("supermech")


@pytest.fixture(autouse=True)
def reset_structlog():
    """Reset structlog configuration before each test to avoid caching issues."""
    structlog.reset_defaults()
    yield
    structlog.reset_defaults()


@pytest.fixture(autouse=True)
def isolated_env(monkeypatch: pytest.MonkeyPatch) -> None:
    """Keep SUPERMECH__* and SUPERMECH_LOG_* variables of the host out of tests."""
    for key in list(os.environ):
        if key.startswith("SUPERMECH"):
            monkeypatch.delenv(key, raising=False)
