"""Raw TOML configuration I/O utilities.

Separates file I/O from validation, so `supermech init` can write a commented
file and settings loading can report the offending path.
"""

from __future__ import annotations

import tomllib
from pathlib import Path
from typing import Any

import tomlkit

CONFIG_FILE = "supermech.toml"


def get_config_path(root: Path) -> Path:
    """Get the path to the project config file."""
    return root / CONFIG_FILE


def read_raw_toml(path: Path) -> dict[str, Any]:
    """Read raw TOML data from a file.

    Raises:
        FileNotFoundError: If the file does not exist
        tomllib.TOMLDecodeError: If the file is not valid TOML
    """
    with open(path, "rb") as f:
        return tomllib.load(f)


def write_raw_toml(data: dict[str, Any] | tomlkit.TOMLDocument, path: Path) -> None:
    """Write raw TOML data to a file, keeping tomlkit comments and layout."""
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(tomlkit.dumps(data))


def default_document(*, seed: int = 0) -> tomlkit.TOMLDocument:
    """The commented file written by `supermech init`."""
    doc = tomlkit.document()
    doc.add(tomlkit.comment("supermech project settings"))
    doc.add(tomlkit.comment("environment variables SUPERMECH__<SECTION>__<KEY> override these"))
    doc.add("seed", seed)

    verify = tomlkit.table()
    verify.add("algebra_cases", 200)
    verify.add("calculus_cases", 100)
    verify.add("theorem_forms", 20)
    verify.add("sample_points", 10)
    verify.add("tolerance", 1e-9)
    verify.add("jobs", 1)
    verify["jobs"].comment("worker threads for independent cases")
    doc.add("verify", verify)

    report = tomlkit.table()
    report.add("format", "text")
    report["format"].comment("text or kv")
    report.add("timing", False)
    doc.add("report", report)
    return doc
