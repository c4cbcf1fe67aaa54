"""Typed tabular data: CSV ingestion, grouping/aggregation, time windowing.

Columns are inferred as temporal (ISO year / year-month / full date),
numerical (reals, tolerating % suffixes and thousands separators), or
categorical. Empty cells are missing. Temporal windows are half-open,
anchored at the data minimum, in the column's own unit (year, month, day).
"""
from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path

AGG_OPS = ("sum", "mean", "count")

_YEAR_RE = re.compile(r"(\d{4})\Z")
_YEAR_MONTH_RE = re.compile(r"(\d{4})-(\d{2})\Z")
_FULL_DATE_RE = re.compile(r"(\d{4})-(\d{2})-(\d{2})\Z")

_GRANULARITY_ORDER = {"year": 0, "month": 1, "day": 2}


class CsvError(ValueError):
    """The CSV input cannot be ingested."""


@dataclass(frozen=True)
class Aggregation:
    op: str
    field_name: str = ""   # ignored for count

    def __post_init__(self):
        if self.op not in AGG_OPS:
            raise ValueError(f"unknown aggregation {self.op!r}; expected one of {AGG_OPS}")


@dataclass
class Field:
    name: str
    kind: str                      # "categorical" | "numerical" | "temporal"
    values: list                   # str | float | date, with None for missing
    granularity: str | None = None  # temporal only: "year" | "month" | "day"


@dataclass
class Dataset:
    fields: list[Field]
    row_count: int

    def __post_init__(self):
        for f in self.fields:
            if len(f.values) != self.row_count:
                raise ValueError(
                    f"field {f.name!r} has {len(f.values)} cells, "
                    f"expected {self.row_count}"
                )

    def field_names(self) -> list[str]:
        return [f.name for f in self.fields]

    def field(self, name: str) -> Field:
        for f in self.fields:
            if f.name == name:
                return f
        raise KeyError(f"unknown field {name!r}")

    def __contains__(self, name: str) -> bool:
        return any(f.name == name for f in self.fields)


def _parse_temporal(cell: str) -> tuple[date, str] | None:
    s = cell.strip()
    if m := _FULL_DATE_RE.match(s):
        y, mo, d = int(m[1]), int(m[2]), int(m[3])
        try:
            return date(y, mo, d), "day"
        except ValueError:
            return None
    if m := _YEAR_MONTH_RE.match(s):
        y, mo = int(m[1]), int(m[2])
        if 1 <= mo <= 12:
            return date(y, mo, 1), "month"
        return None
    if m := _YEAR_RE.match(s):
        return date(int(m[1]), 1, 1), "year"
    return None


def _parse_numeric(cell: str) -> float | None:
    s = cell.strip()
    if s.endswith("%"):
        s = s[:-1].strip()
    s = s.replace(",", "")
    if not s:
        return None
    try:
        value = float(s)
    except ValueError:
        return None
    return value if math.isfinite(value) else None


def _infer_field(name: str, cells: list[str]) -> Field:
    present = [c for c in cells if c != ""]

    temporal = [_parse_temporal(c) for c in present]
    if present and all(t is not None for t in temporal):
        granularity = max((t[1] for t in temporal), key=_GRANULARITY_ORDER.get)
        values = [
            _parse_temporal(c)[0] if c != "" else None
            for c in cells
        ]
        return Field(name, "temporal", values, granularity)

    numeric = [_parse_numeric(c) for c in present]
    if present and all(v is not None for v in numeric):
        values = [_parse_numeric(c) if c != "" else None for c in cells]
        return Field(name, "numerical", values)

    return Field(name, "categorical", [c if c != "" else None for c in cells])


def ingest_csv(source: str | Path) -> Dataset:
    """Build a typed Dataset from CSV text or a CSV file path.

    The first row is the header; the body must be rectangular. Type
    inference runs per column; empty cells become missing.
    """
    if isinstance(source, Path):
        text = source.read_text(encoding="utf-8-sig")
    else:
        text = source.removeprefix("﻿")
    reader = csv.reader(io.StringIO(text))
    rows = [row for row in reader if row]
    if not rows:
        raise CsvError("empty input: no header row")
    header = [h.strip() for h in rows[0]]
    for i, name in enumerate(header, start=1):
        if not name:
            raise CsvError(f"empty header name in column {i}")
    dupes = {h for h in header if header.count(h) > 1}
    if dupes:
        raise CsvError(f"duplicate header: {sorted(dupes)[0]!r}")
    body = rows[1:]
    for row_number, row in enumerate(body, start=2):
        if len(row) != len(header):
            raise CsvError(
                f"row {row_number} has {len(row)} cells, expected {len(header)}"
            )
    columns = [[row[i] for row in body] for i in range(len(header))]
    fields = [_infer_field(name, col) for name, col in zip(header, columns)]
    return Dataset(fields=fields, row_count=len(body))


def _apply(op: str, values: list) -> float | None:
    present = [v for v in values if v is not None]
    if op == "count":
        return float(len(values))
    if op == "sum":
        return float(sum(present))
    if not present:       # mean of an all-missing group is marked missing
        return None
    return float(sum(present) / len(present))


def group_aggregate(
    ds: Dataset, group_by: list[str], agg: Aggregation
) -> list[tuple[tuple, float | None]]:
    """One (key tuple, aggregate) per distinct group, in first-appearance order."""
    group_fields = []
    for name in group_by:
        f = ds.field(name)
        if f.kind != "categorical":
            raise ValueError(f"group-by field {name!r} is {f.kind}, not categorical")
        group_fields.append(f)
    if agg.op != "count":
        target = ds.field(agg.field_name)
        if target.kind != "numerical":
            raise ValueError(
                f"aggregation target {agg.field_name!r} is {target.kind}, not numerical"
            )
        cells = target.values
    else:
        cells = [None] * ds.row_count

    groups: dict[tuple, list] = {}
    for i in range(ds.row_count):
        key = tuple(f.values[i] for f in group_fields)
        groups.setdefault(key, []).append(cells[i])
    return [(key, _apply(agg.op, vals)) for key, vals in groups.items()]


def _to_unit(d: date, granularity: str) -> int:
    if granularity == "year":
        return d.year
    if granularity == "month":
        return d.year * 12 + d.month - 1
    return d.toordinal()


def _unit_label(unit: int, granularity: str) -> str:
    if granularity == "year":
        return str(unit)
    if granularity == "month":
        return f"{unit // 12:04d}-{unit % 12 + 1:02d}"
    return date.fromordinal(unit).isoformat()


def window_series(
    ds: Dataset,
    time_field: str,
    value_field: str,
    window: int,
    agg: Aggregation | None = None,
) -> list[tuple[str, float | None]]:
    """Aggregate a value column over consecutive half-open time windows.

    Windows are [start, start + window) in the time column's unit,
    anchored at the minimum time value and covering the maximum. Empty
    windows appear with a missing aggregate. Output is chronological.
    """
    tf = ds.field(time_field)
    if tf.kind != "temporal":
        raise ValueError(f"time field {time_field!r} is {tf.kind}, not temporal")
    vf = ds.field(value_field)
    if vf.kind != "numerical":
        raise ValueError(f"value field {value_field!r} is {vf.kind}, not numerical")
    if window < 1:
        raise ValueError("window must be >= 1")
    agg = agg or Aggregation("mean", value_field)

    points = [
        (_to_unit(t, tf.granularity), v)
        for t, v in zip(tf.values, vf.values)
        if t is not None
    ]
    if not points:
        return []
    lo = min(u for u, _ in points)
    hi = max(u for u, _ in points)

    buckets: dict[int, list] = {}
    for unit, value in points:
        buckets.setdefault((unit - lo) // window, []).append(value)

    out: list[tuple[str, float | None]] = []
    for w in range((hi - lo) // window + 1):
        start = lo + w * window
        label = _unit_label(start, tf.granularity)
        values = buckets.get(w)
        out.append((label, _apply(agg.op, values) if values else None))
    return out
