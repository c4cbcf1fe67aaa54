"""Encoding plans, chart specs, and text chart rendering.

An EncodingPlan records which emoji stands for each field and category
value; a ChartSpec picks a template (stacked-bar unit chart or windowed
time series) and its parameters. Rendering is pure: the same dataset,
plan, spec, and palettes always produce byte-identical text.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .assets import default_lexicon
from .embedding import EmbeddingTable
from .lexicon import Lexicon
from .recommend import (
    DEFAULT_PLACEHOLDER_ID,
    OrdinalPalette,
    PlaceholderPolicy,
    bin_value,
    recommend_or_placeholder,
)
from .tabular import AGG_OPS, Aggregation, Dataset, group_aggregate, window_series

TEMPLATES = ("unit_chart", "time_series")
MISSING_LABEL = "missing"


@dataclass(frozen=True)
class PaletteChoice:
    """A numerical field's palette, with an optional diverging midpoint."""

    name: str
    midpoint: float | None = None


@dataclass
class EncodingPlan:
    field_emoji: dict[str, str] = field(default_factory=dict)
    value_emoji: dict[str, dict[str, str]] = field(default_factory=dict)
    numeric_palette: dict[str, PaletteChoice] = field(default_factory=dict)
    field_order: list[str] = field(default_factory=list)
    show_labels: bool = True

    def referenced_fields(self) -> set[str]:
        return set(self.field_emoji) | set(self.value_emoji) | set(self.numeric_palette)

    def validate(self, lexicon: Lexicon, ds: Dataset | None = None) -> None:
        for emoji_id in self.field_emoji.values():
            if emoji_id not in lexicon:
                raise ValueError(f"unknown emoji id {emoji_id!r}")
        for field_name, mapping in self.value_emoji.items():
            for value, emoji_id in mapping.items():
                if not isinstance(value, str):
                    raise ValueError(
                        f"category value {value!r} in field {field_name!r} is not text"
                    )
                if emoji_id not in lexicon:
                    raise ValueError(f"unknown emoji id {emoji_id!r}")
        referenced = self.referenced_fields()
        if sorted(self.field_order) != sorted(referenced):
            raise ValueError(
                f"field_order {self.field_order!r} is not a permutation "
                f"of the referenced fields {sorted(referenced)!r}"
            )
        if ds is not None:
            for name in referenced:
                ds.field(name)   # raises KeyError when unknown
            for name in self.value_emoji:
                if ds.field(name).kind != "categorical":
                    raise ValueError(f"value emojis given for non-categorical {name!r}")
            for name in self.numeric_palette:
                if ds.field(name).kind != "numerical":
                    raise ValueError(f"palette given for non-numerical {name!r}")


def reorder_fields(plan: EncodingPlan, new_order: list[str]) -> EncodingPlan:
    """Same plan with field_order replaced; new_order must be a permutation."""
    if sorted(new_order) != sorted(plan.field_order) or len(new_order) != len(
        plan.field_order
    ):
        raise ValueError(
            f"{new_order!r} is not a permutation of {plan.field_order!r}"
        )
    return replace(plan, field_order=list(new_order))


@dataclass(frozen=True)
class SeriesSpec:
    field_name: str
    op: str = "sum"

    def __post_init__(self):
        if self.op not in AGG_OPS:
            raise ValueError(f"unknown aggregation {self.op!r}")


@dataclass
class ChartSpec:
    template: str
    # unit chart
    group_by: str | None = None
    series: list[SeriesSpec] = field(default_factory=list)
    unit_value: float | None = None        # None requests the automatic unit
    max_units_per_row: int = 20
    # time series
    time_field: str | None = None
    value_field: str | None = None
    window: int | None = None
    palette: str | None = None
    aggregation: str = "mean"

    def validate(self, ds: Dataset) -> None:
        if self.template not in TEMPLATES:
            raise ValueError(f"unknown template {self.template!r}")
        if self.template == "unit_chart":
            if not self.group_by:
                raise ValueError("unit chart needs a group_by field")
            if ds.field(self.group_by).kind != "categorical":
                raise ValueError(f"group_by field {self.group_by!r} is not categorical")
            if not self.series:
                raise ValueError("unit chart needs at least one series")
            for s in self.series:
                kind = ds.field(s.field_name).kind
                if s.op != "count" and kind != "numerical":
                    raise ValueError(f"series field {s.field_name!r} is not numerical")
            if self.unit_value is not None and not self.unit_value > 0:
                raise ValueError("unit_value must be positive")
            if self.max_units_per_row < 1:
                raise ValueError("max_units_per_row must be >= 1")
        else:
            if not self.time_field or ds.field(self.time_field).kind != "temporal":
                raise ValueError("time_field must name a temporal field")
            if not self.value_field or ds.field(self.value_field).kind != "numerical":
                raise ValueError("value_field must name a numerical field")
            if self.window is None or self.window < 1:
                raise ValueError("window must be >= 1")
            if not self.palette:
                raise ValueError("time series needs a palette name")
            if self.aggregation not in AGG_OPS:
                raise ValueError(f"unknown aggregation {self.aggregation!r}")


@dataclass(frozen=True)
class RenderedChart:
    text: str                              # always newline-terminated
    legend: tuple[tuple[str, str], ...]    # (emoji id, meaning)


class RenderError(ValueError):
    """The dataset, plan, and spec cannot be rendered together."""


def _fmt(x: float) -> str:
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return f"{x:g}"


def _glyph(lexicon: Lexicon, emoji_id: str) -> str:
    try:
        return lexicon.get(emoji_id).emoji
    except KeyError:
        raise RenderError(f"plan references unknown emoji id {emoji_id!r}") from None


def auto_unit_value(max_aggregate: float, max_units_per_row: int) -> float:
    """Smallest one-significant-digit unit keeping rows at max_units_per_row."""
    if max_aggregate <= 0:
        return 1.0
    raw = max_aggregate / max_units_per_row
    exponent = math.floor(math.log10(raw))
    lead = math.ceil(raw / 10.0 ** exponent - 1e-9)
    if lead == 10:
        lead, exponent = 1, exponent + 1
    if exponent >= 0:
        return lead * 10.0 ** exponent
    return lead / 10.0 ** -exponent


def glyph_count(aggregate: float, unit_value: float) -> int:
    """Round-half-up quantization; positive values never vanish."""
    if aggregate < 0:
        raise RenderError(
            f"negative aggregate {_fmt(aggregate)}: unit charts encode magnitudes only"
        )
    n = math.floor(aggregate / unit_value + 0.5)
    if aggregate > 0 and n == 0:
        return 1
    return n


def render_unit_chart(
    ds: Dataset,
    plan: EncodingPlan,
    spec: ChartSpec,
    lexicon: Lexicon | None = None,
) -> RenderedChart:
    """One emoji row per group; each series contributes its glyph run.

    Row layout: optional category label, that category's emoji when the
    plan maps one, then the series runs concatenated in field_order.
    """
    if spec.template != "unit_chart":
        raise RenderError(f"spec template is {spec.template!r}, not unit_chart")
    if ds.row_count == 0:
        raise RenderError("empty chart: no groups to render")
    lexicon = lexicon or default_lexicon()
    spec.validate(ds)

    order = {name: i for i, name in enumerate(plan.field_order)}
    series = sorted(spec.series, key=lambda s: order.get(s.field_name, len(order)))
    per_series = []
    for s in series:
        emoji_id = plan.field_emoji.get(s.field_name)
        if emoji_id is None:
            raise RenderError(f"plan has no emoji for series field {s.field_name!r}")
        agg = Aggregation(s.op, s.field_name)
        per_series.append((s, _glyph(lexicon, emoji_id), emoji_id,
                           dict(group_aggregate(ds, [spec.group_by], agg))))

    keys = [key for key, _ in group_aggregate(ds, [spec.group_by], Aggregation("count"))]
    if not keys:
        raise RenderError("empty chart: no groups to render")

    aggregates = [v for *_, table in per_series for v in table.values() if v is not None]
    for value in aggregates:
        if value < 0:
            raise RenderError(
                f"negative aggregate {_fmt(value)}: unit charts encode magnitudes only"
            )
    unit = spec.unit_value
    if unit is None:
        unit = auto_unit_value(max(aggregates, default=0.0), spec.max_units_per_row)

    value_map = plan.value_emoji.get(spec.group_by, {})
    lines = []
    for key in keys:
        (value,) = key
        parts = []
        if plan.show_labels:
            parts.append(MISSING_LABEL if value is None else str(value))
        if value is not None and value in value_map:
            parts.append(_glyph(lexicon, value_map[value]))
        runs = "".join(
            _glyph_run(table.get(key), glyph, unit) for _, glyph, _, table in per_series
        )
        parts.append(runs)
        lines.append(" ".join(p for p in parts if p))

    legend = tuple(
        (emoji_id, f"1 glyph = {_fmt(unit)} {s.field_name}")
        for s, _, emoji_id, _ in per_series
    )
    return RenderedChart(text="\n".join(lines) + "\n", legend=legend)


def _glyph_run(aggregate: float | None, glyph: str, unit: float) -> str:
    if aggregate is None:
        return ""
    return glyph * glyph_count(aggregate, unit)


def render_time_series(
    ds: Dataset,
    plan: EncodingPlan,
    spec: ChartSpec,
    palettes: list[OrdinalPalette],
    lexicon: Lexicon | None = None,
    placeholder_id: str = DEFAULT_PLACEHOLDER_ID,
) -> RenderedChart:
    """One glyph per time window, binned into the chosen ordinal palette."""
    if spec.template != "time_series":
        raise RenderError(f"spec template is {spec.template!r}, not time_series")
    lexicon = lexicon or default_lexicon()
    spec.validate(ds)
    by_name = {p.name: p for p in palettes}
    if spec.palette not in by_name:
        raise RenderError(f"unknown palette {spec.palette!r}")
    palette = by_name[spec.palette]

    agg = Aggregation(spec.aggregation, spec.value_field)
    windows = window_series(ds, spec.time_field, spec.value_field, spec.window, agg)
    if not windows:
        raise RenderError("fewer than 1 window: no usable time values")

    choice = plan.numeric_palette.get(spec.value_field)
    midpoint = 0.0
    if choice is not None and choice.midpoint is not None:
        midpoint = choice.midpoint

    present = [v for _, v in windows if v is not None]
    legend: list[tuple[str, str]] = []
    if not present:
        glyphs = [_glyph(lexicon, placeholder_id)] * len(windows)
        legend.append((placeholder_id, "no data in window"))
    else:
        lo, hi = min(present), max(present)
        degenerate = lo >= hi
        if degenerate:
            levels = {v: 0 for v in present}
            legend.append(
                (palette.levels[0],
                 "constant values; entire series rendered at the lowest level")
            )
        else:
            levels = {
                v: bin_value(v, lo, hi, palette, midpoint=midpoint) for v in present
            }
            legend.extend(_palette_legend(palette, lo, hi, midpoint))
        glyphs = [
            _glyph(lexicon, placeholder_id if v is None
                   else palette.levels[levels[v]])
            for _, v in windows
        ]
        if any(v is None for _, v in windows):
            legend.append((placeholder_id, "no data in window"))

    line = "".join(glyphs)
    lines = [line]
    if plan.show_labels:
        first, last = windows[0][0], windows[-1][0]
        pad = max(1, len(line) - len(first) - len(last))
        lines.append(first + " " * pad + last)
    return RenderedChart(text="\n".join(lines) + "\n", legend=tuple(legend))


def _palette_legend(
    palette: OrdinalPalette, lo: float, hi: float, midpoint: float
) -> list[tuple[str, str]]:
    if palette.kind == "diverging":
        radius = max(abs(lo - midpoint), abs(hi - midpoint))
        lo, hi = midpoint - radius, midpoint + radius
    k = len(palette.levels)
    edges = [lo + (hi - lo) * i / k for i in range(k)] + [hi]
    out = []
    for i, emoji_id in enumerate(palette.levels):
        closer = "]" if i == k - 1 else ")"
        out.append((emoji_id, f"[{_fmt(edges[i])}, {_fmt(edges[i + 1])}{closer}"))
    return out


def propose_plan(
    ds: Dataset,
    table: EmbeddingTable,
    lexicon: Lexicon,
    policy: PlaceholderPolicy | None = None,
    default_palette: str = "emoji-10",
) -> EncodingPlan:
    """Fill a complete plan from model recommendations.

    Every field gets its best-match emoji, every distinct category value
    gets one, and every numerical field gets the default palette. Queries
    the model never covers fall back to the placeholder, so the plan is
    complete even for gibberish input.
    """
    policy = policy or PlaceholderPolicy()
    field_emoji = {
        f.name: recommend_or_placeholder(table, lexicon, f.name, policy)
        for f in ds.fields
    }
    value_emoji: dict[str, dict[str, str]] = {}
    numeric_palette: dict[str, PaletteChoice] = {}
    for f in ds.fields:
        if f.kind == "categorical":
            mapping: dict[str, str] = {}
            for cell in f.values:
                if cell is None or cell in mapping:
                    continue
                mapping[cell] = recommend_or_placeholder(table, lexicon, cell, policy)
            value_emoji[f.name] = mapping
        elif f.kind == "numerical":
            numeric_palette[f.name] = PaletteChoice(default_palette)
    return EncodingPlan(
        field_emoji=field_emoji,
        value_emoji=value_emoji,
        numeric_palette=numeric_palette,
        field_order=ds.field_names(),
        show_labels=True,
    )


def plan_to_dict(plan: EncodingPlan) -> dict:
    return {
        "field_emoji": dict(plan.field_emoji),
        "value_emoji": {f: dict(m) for f, m in plan.value_emoji.items()},
        "numeric_palette": {
            f: {"palette": c.name, "midpoint": c.midpoint}
            for f, c in plan.numeric_palette.items()
        },
        "field_order": list(plan.field_order),
        "show_labels": plan.show_labels,
    }


def _expect(mapping: dict, key: str, kind: type, default=None):
    value = mapping.get(key, default)
    if not isinstance(value, kind) or (kind is not bool and isinstance(value, bool)):
        raise ValueError(f"{key!r} must be {kind.__name__}, got {value!r}")
    return value


def plan_from_dict(data: dict) -> EncodingPlan:
    if not isinstance(data, dict):
        raise ValueError("plan must be an object")
    field_emoji = _expect(data, "field_emoji", dict, {})
    value_emoji = _expect(data, "value_emoji", dict, {})
    raw_palettes = _expect(data, "numeric_palette", dict, {})
    field_order = _expect(data, "field_order", list, [])
    show_labels = _expect(data, "show_labels", bool, True)
    for name, emoji_id in field_emoji.items():
        if not isinstance(name, str) or not isinstance(emoji_id, str):
            raise ValueError("field_emoji must map text to emoji ids")
    parsed_values: dict[str, dict[str, str]] = {}
    for name, mapping in value_emoji.items():
        if not isinstance(name, str) or not isinstance(mapping, dict):
            raise ValueError("value_emoji must map field names to value maps")
        for value, emoji_id in mapping.items():
            if not isinstance(value, str) or not isinstance(emoji_id, str):
                raise ValueError("value_emoji entries must map text to emoji ids")
        parsed_values[name] = dict(mapping)
    palettes: dict[str, PaletteChoice] = {}
    for name, raw in raw_palettes.items():
        if not isinstance(name, str) or not isinstance(raw, dict):
            raise ValueError("numeric_palette must map field names to palette choices")
        pal_name = raw.get("palette")
        midpoint = raw.get("midpoint")
        if not isinstance(pal_name, str):
            raise ValueError(f"palette name for {name!r} must be text")
        if midpoint is not None and not isinstance(midpoint, (int, float)):
            raise ValueError(f"midpoint for {name!r} must be a number or null")
        if isinstance(midpoint, bool):
            raise ValueError(f"midpoint for {name!r} must be a number or null")
        palettes[name] = PaletteChoice(
            pal_name, None if midpoint is None else float(midpoint)
        )
    if not all(isinstance(n, str) for n in field_order):
        raise ValueError("field_order must be a list of field names")
    return EncodingPlan(
        field_emoji=dict(field_emoji),
        value_emoji=parsed_values,
        numeric_palette=palettes,
        field_order=list(field_order),
        show_labels=show_labels,
    )


def spec_to_dict(spec: ChartSpec) -> dict:
    if spec.template == "unit_chart":
        return {
            "template": "unit_chart",
            "group_by": spec.group_by,
            "series": [{"field": s.field_name, "op": s.op} for s in spec.series],
            "unit_value": spec.unit_value,
            "max_units_per_row": spec.max_units_per_row,
        }
    return {
        "template": "time_series",
        "time_field": spec.time_field,
        "value_field": spec.value_field,
        "window": spec.window,
        "palette": spec.palette,
        "aggregation": spec.aggregation,
    }


def spec_from_dict(data: dict) -> ChartSpec:
    if not isinstance(data, dict):
        raise ValueError("chart spec must be an object")
    template = data.get("template")
    if template == "unit_chart":
        raw_series = _expect(data, "series", list, [])
        series = []
        for raw in raw_series:
            if not isinstance(raw, dict) or not isinstance(raw.get("field"), str):
                raise ValueError("each series needs a 'field' name")
            op = raw.get("op", "sum")
            if not isinstance(op, str):
                raise ValueError("series 'op' must be text")
            series.append(SeriesSpec(raw["field"], op))
        unit_value = data.get("unit_value")
        if unit_value is not None:
            if isinstance(unit_value, bool) or not isinstance(unit_value, (int, float)):
                raise ValueError("unit_value must be a number or null")
            unit_value = float(unit_value)
        max_units = data.get("max_units_per_row", 20)
        if isinstance(max_units, bool) or not isinstance(max_units, int):
            raise ValueError("max_units_per_row must be an integer")
        return ChartSpec(
            template="unit_chart",
            group_by=_expect(data, "group_by", str),
            series=series,
            unit_value=unit_value,
            max_units_per_row=max_units,
        )
    if template == "time_series":
        window = data.get("window")
        if isinstance(window, bool) or not isinstance(window, int):
            raise ValueError("window must be an integer")
        return ChartSpec(
            template="time_series",
            time_field=_expect(data, "time_field", str),
            value_field=_expect(data, "value_field", str),
            window=window,
            palette=_expect(data, "palette", str),
            aggregation=_expect(data, "aggregation", str, "mean"),
        )
    raise ValueError(f"unknown template {template!r}")
