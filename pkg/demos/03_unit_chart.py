"""
Stacked-bar unit charts as plain text
======================================

A unit chart draws one glyph per fixed quantity, so magnitudes survive
the trip through chat apps and code reviews. Here each row is a
category and every glyph stands for 5 vehicles.
"""

from emocharts.assets import default_lexicon, default_table
from emocharts.chart import ChartSpec, SeriesSpec, propose_plan, render_unit_chart
from emocharts.tabular import ingest_csv

CSV = """\
mode,commuters
bike,23
bus,41
train,18
walk,7
"""

ds = ingest_csv(CSV)
lexicon = default_lexicon()

# The recommender proposes an emoji for every field and category value.
plan = propose_plan(ds, default_table(), lexicon)

spec = ChartSpec(
    template="unit_chart",
    group_by="mode",
    series=[SeriesSpec("commuters", "sum")],
    unit_value=5.0,
)

out = render_unit_chart(ds, plan, spec, lexicon)
print(out.text, end="")
print()
for emoji_id, meaning in out.legend:
    print(f"{lexicon.get(emoji_id).emoji}  {meaning}")

# Leave unit_value unset and the renderer picks one that keeps rows at
# 20 glyphs or fewer, rounding the unit up to one significant digit.
auto = render_unit_chart(
    ds,
    plan,
    ChartSpec(template="unit_chart", group_by="mode",
              series=[SeriesSpec("commuters", "sum")]),
    lexicon,
)
print()
print(auto.legend[0][1])
