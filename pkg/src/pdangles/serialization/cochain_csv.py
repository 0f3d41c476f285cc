# this_file: src/pdangles/serialization/cochain_csv.py
"""Cochains as two-block CSV: a ``degree,carrier`` header, then ``simplex_index,value`` rows."""

import csv
import io
from pathlib import Path

from ..errors import DegreeError
from ..forms.cochain import Carrier, Cochain
from .report import atomic_write_text, format_value


def cochain_to_csv(cochain: Cochain) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["degree", "carrier"])
    writer.writerow([cochain.degree, cochain.carrier.value])
    writer.writerow(["simplex_index", "value"])
    for index, value in enumerate(cochain.values):
        writer.writerow([index, format_value(float(value))])
    return buffer.getvalue()


def write_cochain_csv(cochain: Cochain, file_path: str | Path) -> Path:
    """Write one cochain atomically."""
    return atomic_write_text(file_path, cochain_to_csv(cochain))


def read_cochain_csv(file_path: str | Path) -> Cochain:
    """Read a cochain written by :func:`write_cochain_csv`.

    Raises:
        DegreeError: When the header blocks are missing or indices are out of order
    """
    with open(file_path, encoding="utf-8", newline="") as f:
        rows = [row for row in csv.reader(f) if row]
    if len(rows) < 3 or rows[0] != ["degree", "carrier"] or rows[2] != ["simplex_index", "value"]:
        raise DegreeError(f"{file_path}: not a cochain CSV")
    degree = int(rows[1][0])
    carrier = Carrier.from_string(rows[1][1])
    values = []
    for expected, row in enumerate(rows[3:]):
        if int(row[0]) != expected:
            raise DegreeError(f"{file_path}: simplex index {row[0]} where {expected} was expected")
        values.append(float(row[1]))
    return Cochain(degree, carrier, values)
