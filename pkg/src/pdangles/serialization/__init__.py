# this_file: src/pdangles/serialization/__init__.py
"""Report and cochain files."""

from .cochain_csv import cochain_to_csv, read_cochain_csv, write_cochain_csv
from .json_encoder import ReportJSONEncoder
from .report import (
    PROVENANCE_SUFFIX,
    ReportSaver,
    atomic_write_text,
    format_value,
    git_describe,
    read_csv,
)

__all__ = [
    "PROVENANCE_SUFFIX",
    "ReportJSONEncoder",
    "ReportSaver",
    "atomic_write_text",
    "cochain_to_csv",
    "format_value",
    "git_describe",
    "read_cochain_csv",
    "read_csv",
    "write_cochain_csv",
]
