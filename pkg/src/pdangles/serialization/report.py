# this_file: src/pdangles/serialization/report.py
"""Report saver: atomic JSON and CSV files with a provenance sidecar."""

import csv
import io
import json
import os
import subprocess
import tempfile
from collections.abc import Iterable, Sequence
from datetime import UTC, datetime
from enum import Enum
from pathlib import Path
from typing import Any

from loguru import logger

from .json_encoder import ReportJSONEncoder

PROVENANCE_SUFFIX = ".provenance.json"


def format_value(value: Any) -> str:
    """CSV cell text; floats use ``%.17g`` so they read back bit for bit."""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return "%.17g" % value
    if isinstance(value, Enum):
        return str(value.value)
    return str(value)


def atomic_write_text(path: str | Path, text: str) -> Path:
    """Write text to a temporary file next to ``path`` and rename it into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise
    return path


def git_describe(cwd: str | Path | None = None) -> str:
    """``git describe --always --dirty`` of the working tree, or "unknown"."""
    try:
        result = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            capture_output=True,
            text=True,
            timeout=10,
            cwd=cwd,
            check=False,
        )
    except (OSError, subprocess.SubprocessError):
        return "unknown"
    return result.stdout.strip() if result.returncode == 0 and result.stdout.strip() else "unknown"


class ReportSaver:
    """Saves reports as JSON or CSV, each with its provenance sidecar."""

    def __init__(self, indent: int = 2, ensure_ascii: bool = False):
        """Initialize saver.

        Args:
            indent: JSON indentation level
            ensure_ascii: If True, escape non-ASCII characters
        """
        self.indent = indent
        self.ensure_ascii = ensure_ascii

    def to_json_string(self, data: Any) -> str:
        return (
            json.dumps(
                data,
                indent=self.indent,
                ensure_ascii=self.ensure_ascii,
                separators=(",", ": "),
                cls=ReportJSONEncoder,
            )
            + "\n"
        )

    def to_csv_string(self, rows: Iterable[dict], columns: Sequence[str]) -> str:
        """Render rows in the given column order; unknown keys are an error."""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            extra = set(row) - set(columns)
            if extra:
                raise KeyError(f"row has columns outside the schema: {sorted(extra)}")
            writer.writerow([format_value(row.get(column, "")) for column in columns])
        return buffer.getvalue()

    def save_json(self, data: Any, file_path: str | Path) -> Path:
        path = atomic_write_text(file_path, self.to_json_string(data))
        logger.info(f"Saved report to: {path}")
        return path

    def save_csv(self, rows: Iterable[dict], columns: Sequence[str], file_path: str | Path) -> Path:
        path = atomic_write_text(file_path, self.to_csv_string(rows, columns))
        logger.info(f"Saved table to: {path}")
        return path

    def save_provenance(
        self,
        report_path: str | Path,
        command: str,
        parameters: dict,
        tolerances: dict,
        version: str,
    ) -> Path:
        """Write ``<report>.provenance.json`` beside a report.

        The sidecar carries a timestamp and the git state, so it is the only
        output that is not byte-identical across reruns.
        """
        report_path = Path(report_path)
        sidecar = report_path.with_name(report_path.name + PROVENANCE_SUFFIX)
        data = {
            "command": command,
            "parameters": parameters,
            "tolerances": tolerances,
            "version": version,
            "git": git_describe(report_path.parent),
            "created": datetime.now(UTC).isoformat(timespec="seconds"),
            "report": report_path.name,
        }
        return atomic_write_text(sidecar, self.to_json_string(data))


def read_csv(file_path: str | Path) -> list[dict[str, str]]:
    """Read a saved table back as string-valued rows."""
    with open(file_path, encoding="utf-8", newline="") as f:
        return list(csv.DictReader(f))
