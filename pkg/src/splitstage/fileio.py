"""Plain-text input formats used by the command-line interface.

Matrices: one row per line, comma-separated decimals, '#' lines ignored,
dimensions inferred. Parameter files: one ``key=value`` per line with the
field names of SaiuqrParams.
"""

from __future__ import annotations

import dataclasses
from pathlib import Path

import numpy as np

from .epidemic import SaiuqrParams
from .errors import InvalidParamsError
from .linalg import as_matrix


class ParseError(ValueError):
    """Input file could not be parsed."""


def _data_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def read_matrix(path) -> np.ndarray:
    """Read a comma-separated matrix file."""
    rows = []
    width = None
    for lineno, line in _data_lines(Path(path).read_text()):
        try:
            row = [float(tok) for tok in line.split(",")]
        except ValueError as exc:
            raise ParseError(f"{path}:{lineno}: {exc}") from exc
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(
                f"{path}:{lineno}: expected {width} columns, got {len(row)}")
        rows.append(row)
    if not rows:
        raise ParseError(f"{path}: no data rows")
    try:
        return as_matrix(rows)
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def write_matrix(matrix, path) -> None:
    m = as_matrix(matrix)
    lines = [",".join(format_float(x) for x in row) for row in m]
    Path(path).write_text("\n".join(lines) + "\n")


_PARAM_FIELDS = tuple(f.name for f in dataclasses.fields(SaiuqrParams))


def read_params(path) -> SaiuqrParams:
    """Read a key=value parameter file into SaiuqrParams.

    Every field must be present exactly once; unknown keys are rejected.
    """
    values: dict[str, float] = {}
    for lineno, line in _data_lines(Path(path).read_text()):
        key, sep, raw_value = line.partition("=")
        if not sep:
            raise ParseError(f"{path}:{lineno}: expected key=value")
        key = key.strip()
        if key not in _PARAM_FIELDS:
            raise ParseError(f"{path}:{lineno}: unknown parameter {key!r}")
        if key in values:
            raise ParseError(f"{path}:{lineno}: duplicate parameter {key!r}")
        try:
            values[key] = float(raw_value.strip())
        except ValueError as exc:
            raise ParseError(f"{path}:{lineno}: {exc}") from exc
    missing = [name for name in _PARAM_FIELDS if name not in values]
    if missing:
        raise ParseError(f"{path}: missing parameters: {', '.join(missing)}")
    try:
        return SaiuqrParams(**values)
    except InvalidParamsError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def format_float(x: float) -> str:
    """Round-trip-safe decimal rendering (17 significant digits)."""
    return format(float(x), ".17g")


def parse_float_list(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
