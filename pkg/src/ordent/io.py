"""Reading real-valued series from csv, jsonl and plain text files."""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from ._errors import InputParseError

FORMATS = ("csv", "jsonl", "plain")


def _number(token: str, line: int) -> float:
    tok = token.strip()
    try:
        v = float(tok)
    except ValueError:
        raise InputParseError(f"non-numeric token {tok!r}", line) from None
    if not math.isfinite(v):
        raise InputParseError(f"non-finite value {tok!r}", line)
    return v


def _read_lines(path) -> list[str]:
    try:
        return Path(path).read_text(encoding="utf-8").splitlines()
    except (OSError, UnicodeDecodeError) as exc:
        raise InputParseError(f"cannot read {path}: {exc}") from exc


def ingest(path, format: str = "plain") -> list[np.ndarray]:
    """Read one or more series from ``path``.

    Parameters
    ----------
    path : str or Path
    format : {"csv", "jsonl", "plain"}
        ``csv``: one column per series, optional header row.  ``jsonl``: one
        JSON array per line.  ``plain``: one value per line.

    Returns
    -------
    list of numpy.ndarray
        Blank lines are skipped; every series is non-empty and finite.
    """
    if format not in FORMATS:
        raise InputParseError(f"unknown format {format!r}; expected one of {FORMATS}")
    lines = _read_lines(path)
    numbered = [(i + 1, ln) for i, ln in enumerate(lines) if ln.strip()]
    if format == "plain":
        series = [[_number(ln, i) for i, ln in numbered]]
    elif format == "jsonl":
        series = []
        for i, ln in numbered:
            try:
                arr = json.loads(ln)
            except json.JSONDecodeError as exc:
                raise InputParseError(f"invalid JSON: {exc.msg}", i) from None
            if not isinstance(arr, list):
                raise InputParseError("expected a JSON array", i)
            row = []
            for v in arr:
                if isinstance(v, bool) or not isinstance(v, (int, float)):
                    raise InputParseError(f"non-numeric token {v!r}", i)
                row.append(_number(repr(v), i))
            series.append(row)
    else:
        rows = list(csv.reader(ln for _, ln in numbered))
        if not rows:
            raise InputParseError("empty series")
        start = 0
        try:
            [float(c) for c in rows[0]]
        except ValueError:
            start = 1  # header row
        width = len(rows[0])
        cols: list[list[float]] = [[] for _ in range(width)]
        for (lineno, _), row in zip(numbered[start:], rows[start:]):
            if len(row) != width:
                raise InputParseError(f"expected {width} columns, got {len(row)}", lineno)
            for j, tok in enumerate(row):
                cols[j].append(_number(tok, lineno))
        series = cols
    if not series or any(len(s) == 0 for s in series):
        raise InputParseError("empty series")
    return [np.asarray(s, dtype=float) for s in series]


def ingest_symbols(path) -> list[str]:
    """Read one symbol per non-blank line (e.g. pattern ranks or labels)."""
    out = [ln.strip() for ln in _read_lines(path) if ln.strip()]
    if not out:
        raise InputParseError("empty symbol sequence")
    return out
