import random
from datetime import date
from pathlib import Path

import pytest

from emocharts.tabular import (
    Aggregation,
    CsvError,
    Dataset,
    Field,
    group_aggregate,
    ingest_csv,
    window_series,
)

BASIC = "city,population,founded\nSpringfield,30000,1821\nShelbyville,21500,1833\n"


def test_ingest_header_and_shape():
    ds = ingest_csv(BASIC)
    assert ds.field_names() == ["city", "population", "founded"]
    assert ds.row_count == 2


def test_ingest_kinds():
    ds = ingest_csv(BASIC)
    assert ds.field("city").kind == "categorical"
    assert ds.field("population").kind == "numerical"
    assert ds.field("founded").kind == "temporal"


def test_temporal_year_granularity():
    f = ingest_csv("y\n1918\n2017\n").field("y")
    assert f.kind == "temporal"
    assert f.granularity == "year"
    assert f.values == [date(1918, 1, 1), date(2017, 1, 1)]


def test_temporal_month_granularity():
    f = ingest_csv("m\n2020-05\n2020-11\n").field("m")
    assert f.granularity == "month"
    assert f.values == [date(2020, 5, 1), date(2020, 11, 1)]


def test_temporal_day_granularity():
    f = ingest_csv("d\n2020-05-17\n2020-06-01\n").field("d")
    assert f.granularity == "day"
    assert f.values == [date(2020, 5, 17), date(2020, 6, 1)]


def test_temporal_mixed_granularity_uses_finest():
    f = ingest_csv("t\n2020\n2020-05-17\n").field("t")
    assert f.granularity == "day"
    assert f.values == [date(2020, 1, 1), date(2020, 5, 17)]


def test_invalid_month_is_not_temporal():
    f = ingest_csv("t\n2020-13\n2020-01\n").field("t")
    assert f.kind == "categorical"


def test_invalid_calendar_day_is_not_temporal():
    assert ingest_csv("t\n2021-02-30\n").field("t").kind == "categorical"


def test_numeric_percent_suffix():
    f = ingest_csv("p\n12%\n7.5 %\n").field("p")
    assert f.kind == "numerical"
    assert f.values == [12.0, 7.5]


def test_numeric_thousands_separators():
    f = ingest_csv("n\n\"1,234\"\n\"12,345,678\"\n").field("n")
    assert f.kind == "numerical"
    assert f.values == [1234.0, 12345678.0]


def test_numeric_negatives_and_exponents():
    f = ingest_csv("n\n-3.5\n1e3\n").field("n")
    assert f.kind == "numerical"
    assert f.values == [-3.5, 1000.0]


def test_one_bad_cell_demotes_to_categorical():
    f = ingest_csv("n\n1\n2\nx\n").field("n")
    assert f.kind == "categorical"
    assert f.values == ["1", "2", "x"]


def test_nan_and_inf_cells_are_not_numeric():
    assert ingest_csv("n\n1\nnan\n").field("n").kind == "categorical"
    assert ingest_csv("n\n1\ninf\n").field("n").kind == "categorical"


def test_empty_cells_are_missing():
    ds = ingest_csv("a,b\n,5\nx,\n")
    assert ds.field("a").values == [None, "x"]
    assert ds.field("b").values == [5.0, None]


def test_all_empty_column_is_categorical():
    f = ingest_csv("a,b\n,1\n,2\n").field("a")
    assert f.kind == "categorical"
    assert f.values == [None, None]


def test_missing_cells_do_not_block_numeric_inference():
    f = ingest_csv('n\n5\n""\n7\n').field("n")
    assert f.kind == "numerical"
    assert f.values == [5.0, None, 7.0]


def test_blank_lines_are_skipped_entirely():
    ds = ingest_csv("a,b\n1,2\n\n3,4\n\n")
    assert ds.row_count == 2


def test_quoted_cells_keep_commas_and_newlines():
    ds = ingest_csv('c\n"a, b"\n"two\nlines"\n')
    assert ds.field("c").values == ["a, b", "two\nlines"]


def test_bom_is_stripped_from_text():
    ds = ingest_csv("﻿name,v\nx,1\n")
    assert ds.field_names() == ["name", "v"]


def test_ingest_from_path(tmp_path: Path):
    p = tmp_path / "data.csv"
    p.write_bytes("﻿name,v\nx,1\n".encode("utf-8"))
    ds = ingest_csv(p)
    assert ds.field_names() == ["name", "v"]
    assert ds.field("v").values == [1.0]


def test_empty_input_rejected():
    with pytest.raises(CsvError, match="no header"):
        ingest_csv("")


def test_empty_header_name_rejected():
    with pytest.raises(CsvError, match="column 2"):
        ingest_csv("a,,c\n1,2,3\n")


def test_duplicate_header_rejected():
    with pytest.raises(CsvError, match="duplicate header"):
        ingest_csv("a,a\n1,2\n")


def test_ragged_row_reports_row_number():
    with pytest.raises(CsvError, match="row 3"):
        ingest_csv("a,b\n1,2\n1,2,3\n")


def test_dataset_rejects_mismatched_column_length():
    with pytest.raises(ValueError, match="expected 2"):
        Dataset(fields=[Field("a", "numerical", [1.0])], row_count=2)


# --- grouping ---

GROUPED = "k,v\nA,10\nA,5\nB,7\n"


def test_group_sum_matches_worked_example():
    ds = ingest_csv(GROUPED)
    out = group_aggregate(ds, ["k"], Aggregation("sum", "v"))
    assert out == [(("A",), 15.0), (("B",), 7.0)]


def test_group_order_is_first_appearance():
    ds = ingest_csv("k,v\nzebra,1\napple,1\nzebra,1\nmango,1\n")
    out = group_aggregate(ds, ["k"], Aggregation("count"))
    assert [key for key, _ in out] == [("zebra",), ("apple",), ("mango",)]


def test_group_mean():
    ds = ingest_csv(GROUPED)
    out = dict(group_aggregate(ds, ["k"], Aggregation("mean", "v")))
    assert out[("A",)] == 7.5
    assert out[("B",)] == 7.0


def test_group_count_counts_rows_not_values():
    ds = ingest_csv("k,v\nA,\nA,3\nB,\n")
    out = dict(group_aggregate(ds, ["k"], Aggregation("count")))
    assert out == {("A",): 2.0, ("B",): 1.0}


def test_group_sum_skips_missing_values():
    ds = ingest_csv("k,v\nA,4\nA,\n")
    out = dict(group_aggregate(ds, ["k"], Aggregation("sum", "v")))
    assert out[("A",)] == 4.0


def test_group_mean_of_all_missing_is_missing():
    ds = ingest_csv("k,v\nA,\nB,3\n")
    out = dict(group_aggregate(ds, ["k"], Aggregation("mean", "v")))
    assert out[("A",)] is None
    assert out[("B",)] == 3.0


def test_group_by_two_fields():
    ds = ingest_csv("a,b,v\nx,p,1\nx,q,2\nx,p,4\n")
    out = group_aggregate(ds, ["a", "b"], Aggregation("sum", "v"))
    assert out == [(("x", "p"), 5.0), (("x", "q"), 2.0)]


def test_missing_group_key_forms_its_own_group():
    ds = ingest_csv("k,v\nA,1\n,2\n,3\n")
    out = dict(group_aggregate(ds, ["k"], Aggregation("sum", "v")))
    assert out[(None,)] == 5.0


def test_group_by_numeric_field_rejected():
    ds = ingest_csv(GROUPED)
    with pytest.raises(ValueError, match="not categorical"):
        group_aggregate(ds, ["v"], Aggregation("count"))


def test_aggregate_over_categorical_field_rejected():
    ds = ingest_csv(GROUPED)
    with pytest.raises(ValueError, match="not numerical"):
        group_aggregate(ds, ["k"], Aggregation("sum", "k"))


def test_unknown_field_rejected():
    ds = ingest_csv(GROUPED)
    with pytest.raises(KeyError):
        group_aggregate(ds, ["nope"], Aggregation("count"))


def test_unknown_aggregation_op_rejected():
    with pytest.raises(ValueError, match="unknown aggregation"):
        Aggregation("median", "v")


# --- windowing ---


def test_window_gap_becomes_missing():
    ds = ingest_csv("y,v\n1918,4\n1940,6\n")
    out = window_series(ds, "y", "v", window=10)
    assert out == [("1918", 4.0), ("1928", None), ("1938", 6.0)]


def test_window_boundary_is_half_open():
    # 1927 lands in [1918, 1928); 1928 starts the next window.
    ds = ingest_csv("y,v\n1918,1\n1927,3\n1928,5\n")
    out = window_series(ds, "y", "v", window=10)
    assert out == [("1918", 2.0), ("1928", 5.0)]


def test_window_default_aggregate_is_mean():
    ds = ingest_csv("y,v\n2000,2\n2001,4\n")
    assert window_series(ds, "y", "v", window=5) == [("2000", 3.0)]


def test_window_sum_and_count():
    ds = ingest_csv("y,v\n2000,2\n2001,4\n2003,\n")
    assert window_series(ds, "y", "v", 5, Aggregation("sum", "v")) == [("2000", 6.0)]
    assert window_series(ds, "y", "v", 5, Aggregation("count")) == [("2000", 3.0)]


def test_window_single_row():
    ds = ingest_csv("y,v\n1999,8\n")
    assert window_series(ds, "y", "v", window=10) == [("1999", 8.0)]


def test_window_month_granularity():
    ds = ingest_csv("m,v\n2020-11,1\n2021-02,3\n")
    out = window_series(ds, "m", "v", window=2)
    assert out == [("2020-11", 1.0), ("2021-01", 3.0)]


def test_window_day_granularity():
    ds = ingest_csv("d,v\n2020-03-01,1\n2020-03-05,2\n")
    out = window_series(ds, "d", "v", window=3)
    assert [label for label, _ in out] == ["2020-03-01", "2020-03-04"]
    assert out[1][1] == 2.0


def test_window_skips_rows_with_missing_time():
    ds = ingest_csv("y,v\n2000,1\n,100\n2001,3\n")
    assert window_series(ds, "y", "v", window=5) == [("2000", 2.0)]


def test_window_all_missing_time_yields_no_windows():
    ds = ingest_csv("y,v\n,1\n,2\n")
    ds.fields[0] = Field("y", "temporal", [None, None], "year")
    assert window_series(ds, "y", "v", window=5) == []


def test_window_requires_temporal_and_numerical():
    ds = ingest_csv("y,v,k\n2000,1,a\n")
    with pytest.raises(ValueError, match="not temporal"):
        window_series(ds, "v", "v", window=5)
    with pytest.raises(ValueError, match="not numerical"):
        window_series(ds, "y", "k", window=5)


def test_window_width_must_be_positive():
    ds = ingest_csv("y,v\n2000,1\n")
    with pytest.raises(ValueError, match=">= 1"):
        window_series(ds, "y", "v", window=0)


def test_window_starts_march_by_window_and_cover_data():
    rng = random.Random(7)
    for _ in range(50):
        years = sorted(rng.sample(range(1900, 2100), k=rng.randint(1, 40)))
        window = rng.randint(1, 25)
        rows = "".join(f"{y},{rng.randint(0, 9)}\n" for y in years)
        out = window_series(ingest_csv("y,v\n" + rows), "y", "v", window)
        starts = [int(label) for label, _ in out]
        assert starts[0] == years[0]
        assert all(b - a == window for a, b in zip(starts, starts[1:]))
        assert starts[-1] <= years[-1] < starts[-1] + window


def test_window_aggregates_match_brute_force():
    rng = random.Random(13)
    for _ in range(30):
        n = rng.randint(1, 60)
        years = [rng.randint(1980, 2020) for _ in range(n)]
        vals = [rng.uniform(-5, 5) for _ in range(n)]
        window = rng.randint(1, 12)
        rows = "".join(f"{y},{v!r}\n" for y, v in zip(years, vals))
        out = window_series(ingest_csv("y,v\n" + rows), "y", "v", window)
        lo = min(years)
        for label, got in out:
            start = int(label)
            inside = [v for y, v in zip(years, vals) if start <= y < start + window]
            assert (start - lo) % window == 0
            if not inside:
                assert got is None
            else:
                assert got == pytest.approx(sum(inside) / len(inside), rel=1e-12)
