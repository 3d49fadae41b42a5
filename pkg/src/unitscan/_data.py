"""Location and parsing of the bundled field-data and reference-table files."""

from __future__ import annotations

import json
import os
from importlib import resources
from pathlib import Path

DATA_DIR_ENV = "UNITSCAN_DATA_DIR"


class DataFileError(Exception):
    """A bundled or user-supplied data file failed validation."""


def data_path(name: str, data_dir: str | None = None) -> Path:
    """Resolve a data file: explicit directory, then $UNITSCAN_DATA_DIR, then bundled."""
    for d in (data_dir, os.environ.get(DATA_DIR_ENV)):
        if d:
            p = Path(d) / name
            if not p.exists():
                raise DataFileError(f"data file {p} not found")
            return p
    p = resources.files("unitscan").joinpath("data", name)
    with resources.as_file(p) as concrete:
        return Path(concrete)


def read_table_rows(path: Path) -> list[list[str]]:
    """Whitespace-separated rows, '#' comments and blank lines stripped."""
    rows = []
    try:
        text = path.read_text()
    except OSError as exc:
        raise DataFileError(f"cannot read {path}: {exc}") from exc
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            rows.append(line.split())
    return rows


def read_json(path: Path) -> dict:
    try:
        return json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise DataFileError(f"cannot parse {path}: {exc}") from exc
