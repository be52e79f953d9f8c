"""Reading observations and writing results as CSV or JSON."""

import json
import math
import sys

from .errors import EmptyInputError, NonFiniteValueError, ParseError
from .estimator import Sample

__all__ = ["read_values", "ingest", "format_number", "write_table"]


def _is_number(text):
    try:
        float(text)
    except ValueError:
        return False
    return True


def read_values(lines):
    """Parse one number per line; a non-numeric first line is a header.

    Blank lines are ignored. Raises ``ParseError`` or ``NonFiniteValueError``
    with the 1-based line number of the offending line.
    """
    values = []
    seen_first = False
    for lineno, raw in enumerate(lines, start=1):
        text = raw.strip().lstrip("﻿")
        if not text:
            continue
        if not seen_first:
            seen_first = True
            if not _is_number(text):
                continue
        try:
            value = float(text)
        except ValueError:
            raise ParseError(lineno, text) from None
        if not math.isfinite(value):
            raise NonFiniteValueError(lineno, text)
        values.append(value)
    if not values:
        raise EmptyInputError("no numeric values in input")
    return values


def ingest(source="-"):
    """Read a single-column CSV into a ``Sample``.

    ``source`` is a path, ``"-"`` for standard input, or an open text stream.
    """
    if hasattr(source, "read"):
        values = read_values(source.read().splitlines())
    elif str(source) == "-":
        values = read_values(sys.stdin.read().splitlines())
    else:
        with open(source, encoding="utf-8", newline="") as fh:
            values = read_values(fh.read().splitlines())
    return Sample(values)


def format_number(value):
    """Shortest decimal string that round-trips to the same double."""
    if isinstance(value, (bool, str)):
        return str(value)
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def _json_value(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def write_table(stream, meta, columns, rows, fmt="csv"):
    """Write ``rows`` under ``columns`` with a ``meta`` block.

    CSV puts ``meta`` in leading ``# key=value`` comment lines. JSON writes
    ``{"meta": {...}, "rows": [[...], ...]}`` with the column names in
    ``meta["columns"]``; non-finite numbers become ``null``.
    """
    if fmt == "csv":
        for key, value in meta.items():
            stream.write(f"# {key}={format_number(value)}\n")
        stream.write(",".join(columns) + "\n")
        for row in rows:
            stream.write(",".join(format_number(v) for v in row) + "\n")
    elif fmt == "json":
        doc = {
            "meta": {**{k: _json_value(v) for k, v in meta.items()}, "columns": list(columns)},
            "rows": [[_json_value(v) for v in row] for row in rows],
        }
        json.dump(doc, stream, allow_nan=False)
        stream.write("\n")
    else:
        raise ValueError(f"unknown output format {fmt!r}")
