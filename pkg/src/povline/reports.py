"""CSV ingestion and versioned JSON reports."""
from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from pathlib import Path
from typing import Union

import numpy as np

from .errors import ValidationError

__all__ = [
    "SCHEMA",
    "read_incomes",
    "file_digest",
    "make_report",
    "dumps",
    "read_report",
]

SCHEMA = "povline-report/1"


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def read_incomes(path: Union[str, Path], column: Union[int, str, None] = None) -> np.ndarray:
    """Read one income per row from a CSV file.

    A first row whose selected cell is not numeric is treated as a header.
    ``column`` is a 0-based index or, with a header, a column name; it
    defaults to the first column.

    Raises
    ------
    ValidationError
        Naming the 1-based file line of the first bad value.
    """
    text = Path(path).read_text()
    rows = [r for r in csv.reader(io.StringIO(text))]
    lines = [(i + 1, r) for i, r in enumerate(rows) if r and any(c.strip() for c in r)]
    if not lines:
        raise ValidationError(f"{path}: no data rows")
    col = 0
    first_line, first = lines[0]
    header = None
    sel = column if isinstance(column, int) else 0
    if isinstance(column, str) or (sel < len(first) and not _is_number(first[sel].strip())):
        header = [c.strip() for c in first]
        lines = lines[1:]
    if isinstance(column, str):
        if header is None or column not in header:
            raise ValidationError(f"{path}: no column named {column!r}")
        col = header.index(column)
    elif column is not None:
        col = int(column)
    out = []
    for lineno, row in lines:
        if col >= len(row):
            raise ValidationError(f"{path}: line {lineno} has no column {col}")
        cell = row[col].strip()
        try:
            val = float(cell)
        except ValueError:
            raise ValidationError(f"{path}: line {lineno}: not a number: {cell!r}") from None
        if not (math.isfinite(val) and val > 0):
            raise ValidationError(f"{path}: line {lineno}: income must be finite and positive, got {cell!r}")
        out.append(val)
    if not out:
        raise ValidationError(f"{path}: no data rows")
    return np.array(out)


def file_digest(path: Union[str, Path]) -> str:
    return "sha256:" + hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _clean(obj):
    # JSON-safe: numpy scalars/arrays to Python, non-finite floats to null
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    return obj


def make_report(kind: str, result, manifest: dict) -> dict:
    return {"schema": SCHEMA, "kind": kind, "manifest": _clean(manifest), "result": _clean(result)}


def dumps(report: dict, indent: int = 2) -> str:
    return json.dumps(_clean(report), indent=indent, sort_keys=True, allow_nan=False)


def read_report(source: Union[str, Path]) -> dict:
    """Parse and validate a report from a JSON string or file path."""
    text = str(source)
    if not text.lstrip().startswith("{"):
        text = Path(source).read_text()
    try:
        rep = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"not a JSON report: {exc}") from exc
    if not isinstance(rep, dict) or rep.get("schema") != SCHEMA:
        raise ValidationError(f"expected schema {SCHEMA!r}, got {rep.get('schema') if isinstance(rep, dict) else None!r}")
    for key in ("kind", "manifest", "result"):
        if key not in rep:
            raise ValidationError(f"report is missing {key!r}")
    return rep
