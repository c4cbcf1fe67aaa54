"""
A century in ten glyphs
========================

Time-series charts bucket a temporal column into fixed windows, average
each window, and map the averages onto an ordinal emoji palette. The
cold-to-hot 10-level palette turns a century of drifting yearly values
into a single readable line.
"""

import math
import random

from emocharts.assets import default_lexicon, default_palettes
from emocharts.chart import ChartSpec, EncodingPlan, PaletteChoice, render_time_series
from emocharts.tabular import ingest_csv

# One hundred years of synthetic yearly measurements with a slow upward
# drift, the sort of series that motivates a cold-to-hot palette.
rng = random.Random(1918)
rows = []
for i in range(100):
    value = 0.015 * i + 0.3 * math.sin(i / 9.0) + rng.uniform(-0.2, 0.2)
    rows.append(f"{1918 + i},{value:.3f}")
ds = ingest_csv("year,delta\n" + "\n".join(rows) + "\n")

plan = EncodingPlan(
    field_emoji={"year": "calendar", "delta": "thermometer"},
    value_emoji={},
    numeric_palette={"delta": PaletteChoice("emoji-10")},
    field_order=["year", "delta"],
    show_labels=True,
)
spec = ChartSpec(
    template="time_series",
    time_field="year",
    value_field="delta",
    window=10,
    palette="emoji-10",
)

lexicon = default_lexicon()
out = render_time_series(ds, plan, spec, default_palettes(), lexicon)
print(out.text, end="")
print()
for emoji_id, meaning in out.legend:
    print(f"{lexicon.get(emoji_id).emoji}  {meaning}")
