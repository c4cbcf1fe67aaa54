import copy

import pytest
from fastapi.testclient import TestClient

from emocharts.chart import plan_from_dict, render_unit_chart, spec_from_dict
from emocharts.recommend import DEFAULT_PLACEHOLDER_ID
from emocharts.service import ModelLoadError, create_app, load_runtime
from emocharts.tabular import ingest_csv

CSV3 = "city,population,founded\nSpringfield,30000,1821\nShelbyville,21500,1833\n"
UNIT_CSV = "kind,count\nhot,10\nhot,5\ncold,7\n"
UNIT_SPEC = {
    "template": "unit_chart",
    "group_by": "kind",
    "series": [{"field": "count", "op": "sum"}],
    "unit_value": 5,
}


@pytest.fixture(scope="module")
def runtime():
    return load_runtime()


@pytest.fixture(scope="module")
def client(runtime):
    return TestClient(create_app(runtime))


def make_session(client, csv_text: str) -> dict:
    resp = client.post("/sessions", content=csv_text.encode("utf-8"))
    assert resp.status_code == 201, resp.text
    return resp.json()


def test_create_session_types_and_assigns(client):
    body = make_session(client, CSV3)
    assert body["id"]
    kinds = {f["name"]: f["kind"] for f in body["fields"]}
    assert kinds == {
        "city": "categorical",
        "population": "numerical",
        "founded": "temporal",
    }
    plan = body["plan"]
    assert set(plan["field_emoji"]) == {"city", "population", "founded"}
    assert set(plan["value_emoji"]["city"]) == {"Springfield", "Shelbyville"}
    assert plan["numeric_palette"]["population"]["palette"] == "emoji-10"
    assert plan["field_order"] == ["city", "population", "founded"]


def test_create_session_plan_is_complete_for_gibberish(client):
    body = make_session(client, "xqzzyk,vrbblk\nqqq,1\nwww,2\n")
    plan = body["plan"]
    assert plan["field_emoji"]["xqzzyk"] == DEFAULT_PLACEHOLDER_ID
    assert set(plan["value_emoji"]["xqzzyk"].values()) == {DEFAULT_PLACEHOLDER_ID}
    assert plan["numeric_palette"]["vrbblk"]["palette"] == "emoji-10"


def test_create_session_vocabulary_field_not_placeholder(client):
    body = make_session(client, "number of remote workers,year\n5,2020\n")
    assert body["plan"]["field_emoji"]["number of remote workers"] != (
        DEFAULT_PLACEHOLDER_ID
    )


def test_ragged_csv_rejected_with_row_number(client):
    resp = client.post("/sessions", content=b"a,b\n1,2\n1,2,3\n")
    assert resp.status_code == 400
    assert "row 3" in resp.json()["detail"]


def test_empty_body_rejected(client):
    resp = client.post("/sessions", content=b"")
    assert resp.status_code == 400


def test_non_utf8_body_rejected(client):
    resp = client.post("/sessions", content=b"\xff\xfe\x00bad")
    assert resp.status_code == 400


def test_recommendations_paginate_stably(client):
    sid = make_session(client, CSV3)["id"]
    url = f"/sessions/{sid}/recommendations"
    p1 = client.get(url, params={"target": "field:city", "page": 1}).json()
    p2 = client.get(url, params={"target": "field:city", "page": 2}).json()
    wide = client.get(
        url, params={"target": "field:city", "page": 1, "page_size": 16}
    ).json()
    assert [i["emoji_id"] for i in p1["items"]] + [
        i["emoji_id"] for i in p2["items"]
    ] == [i["emoji_id"] for i in wide["items"]]
    assert len(p1["items"]) == 8
    assert [i["rank"] for i in p1["items"]] == list(range(1, 9))
    assert [i["rank"] for i in p2["items"]] == list(range(9, 17))
    again = client.get(url, params={"target": "field:city", "page": 1}).json()
    assert again == p1


def test_recommendations_page_past_end_is_empty(client):
    sid = make_session(client, CSV3)["id"]
    resp = client.get(
        f"/sessions/{sid}/recommendations",
        params={"target": "field:city", "page": 500},
    )
    assert resp.status_code == 200
    assert resp.json()["items"] == []


def test_recommendations_value_target(client):
    sid = make_session(client, UNIT_CSV)["id"]
    resp = client.get(
        f"/sessions/{sid}/recommendations", params={"target": "value:kind:hot"}
    )
    assert resp.status_code == 200
    items = resp.json()["items"]
    assert items
    scores = [i["score"] for i in items]
    assert scores == sorted(scores, reverse=True)


def test_recommendations_target_errors(client):
    sid = make_session(client, UNIT_CSV)["id"]
    url = f"/sessions/{sid}/recommendations"
    assert client.get(url, params={"target": "field:nope"}).status_code == 404
    assert client.get(url, params={"target": "value:count:7"}).status_code == 404
    assert client.get(url, params={"target": "value:kind:nope"}).status_code == 404
    assert client.get(url, params={"target": "bogus"}).status_code == 404
    assert client.get(
        "/sessions/doesnotexist/recommendations", params={"target": "field:kind"}
    ).status_code == 404


def test_put_plan_overrides_one_value(client):
    created = make_session(client, UNIT_CSV)
    sid = created["id"]
    before = created["plan"]
    resp = client.put(
        f"/sessions/{sid}/plan",
        json={"value_emoji": {"kind": {"hot": "fire"}}},
    )
    assert resp.status_code == 200
    after = resp.json()["plan"]
    assert after["value_emoji"]["kind"]["hot"] == "fire"
    expected = copy.deepcopy(before)
    expected["value_emoji"]["kind"]["hot"] = "fire"
    assert after == expected


def test_put_plan_unknown_emoji_rejected_atomically(client):
    created = make_session(client, UNIT_CSV)
    sid = created["id"]
    resp = client.put(
        f"/sessions/{sid}/plan",
        json={
            "show_labels": False,
            "value_emoji": {"kind": {"hot": "not_an_emoji"}},
        },
    )
    assert resp.status_code == 422
    assert "not_an_emoji" in resp.json()["detail"]
    echo = client.put(f"/sessions/{sid}/plan", json={})
    assert echo.json()["plan"] == created["plan"]   # nothing was applied


def test_put_plan_rejects_bad_field_order(client):
    sid = make_session(client, UNIT_CSV)["id"]
    resp = client.put(f"/sessions/{sid}/plan", json={"field_order": ["kind"]})
    assert resp.status_code == 422


def test_put_plan_rejects_unknown_key(client):
    sid = make_session(client, UNIT_CSV)["id"]
    resp = client.put(f"/sessions/{sid}/plan", json={"sparkle": True})
    assert resp.status_code == 422


def test_put_plan_rejects_unknown_palette(client):
    sid = make_session(client, UNIT_CSV)["id"]
    resp = client.put(
        f"/sessions/{sid}/plan",
        json={"numeric_palette": {"count": {"palette": "nope", "midpoint": None}}},
    )
    assert resp.status_code == 422


def test_put_spec_and_preview_roundtrip(client, runtime):
    created = make_session(client, UNIT_CSV)
    sid = created["id"]
    resp = client.put(f"/sessions/{sid}/spec", json=UNIT_SPEC)
    assert resp.status_code == 200
    echoed = resp.json()["spec"]
    assert echoed["group_by"] == "kind"

    preview = client.get(f"/sessions/{sid}/preview")
    assert preview.status_code == 200
    body = preview.json()
    rendered = render_unit_chart(
        ingest_csv(UNIT_CSV),
        plan_from_dict(created["plan"]),
        spec_from_dict(echoed),
        runtime.lexicon,
    )
    assert body["text"] == rendered.text
    assert body["legend"] == [list(p) for p in rendered.legend]


def test_preview_before_spec_is_409(client):
    sid = make_session(client, UNIT_CSV)["id"]
    resp = client.get(f"/sessions/{sid}/preview")
    assert resp.status_code == 409


def test_preview_is_idempotent(client):
    sid = make_session(client, UNIT_CSV)["id"]
    client.put(f"/sessions/{sid}/spec", json=UNIT_SPEC)
    a = client.get(f"/sessions/{sid}/preview")
    b = client.get(f"/sessions/{sid}/preview")
    assert a.content == b.content


def test_put_spec_rejects_wrong_kinds(client):
    sid = make_session(client, UNIT_CSV)["id"]
    bad = {
        "template": "time_series",
        "time_field": "kind",
        "value_field": "count",
        "window": 5,
        "palette": "emoji-10",
    }
    assert client.put(f"/sessions/{sid}/spec", json=bad).status_code == 422
    bad_unit = dict(UNIT_SPEC, group_by="count")
    assert client.put(f"/sessions/{sid}/spec", json=bad_unit).status_code == 422


def test_put_spec_rejects_unknown_palette(client):
    csv_text = "y,v\n2000,1\n2001,2\n"
    sid = make_session(client, csv_text)["id"]
    spec = {
        "template": "time_series",
        "time_field": "y",
        "value_field": "v",
        "window": 1,
        "palette": "nope",
    }
    assert client.put(f"/sessions/{sid}/spec", json=spec).status_code == 422


def test_plan_edit_changes_preview(client):
    sid = make_session(client, UNIT_CSV)["id"]
    client.put(f"/sessions/{sid}/spec", json=UNIT_SPEC)
    before = client.get(f"/sessions/{sid}/preview").json()["text"]
    client.put(f"/sessions/{sid}/plan", json={"field_emoji": {"count": "volcano"}})
    after = client.get(f"/sessions/{sid}/preview").json()["text"]
    assert before != after
    assert "🌋" in after


def test_decade_series_previews_ten_glyphs(client, runtime):
    rows = "".join(f"{1918 + i},{i % 9}\n" for i in range(100))
    sid = make_session(client, "year,delta\n" + rows)["id"]
    spec = {
        "template": "time_series",
        "time_field": "year",
        "value_field": "delta",
        "window": 10,
        "palette": "emoji-10",
    }
    assert client.put(f"/sessions/{sid}/spec", json=spec).status_code == 200
    client.put(f"/sessions/{sid}/plan", json={"show_labels": False})
    text = client.get(f"/sessions/{sid}/preview").json()["text"]
    line = text.splitlines()[0]
    emoji10 = next(p for p in runtime.palettes if p.name == "emoji-10")
    glyphs = [runtime.lexicon.get(i).emoji for i in emoji10.levels]
    assert sum(line.count(g) for g in set(glyphs)) == 10


def test_sessions_are_independent(client):
    a = make_session(client, UNIT_CSV)["id"]
    b = make_session(client, UNIT_CSV)["id"]
    client.put(f"/sessions/{a}/plan", json={"show_labels": False})
    plan_b = client.put(f"/sessions/{b}/plan", json={}).json()["plan"]
    assert plan_b["show_labels"] is True


def test_emoji_search_endpoint(client):
    resp = client.get("/emoji/search", params={"q": "water"})
    assert resp.status_code == 200
    items = resp.json()["items"]
    assert items
    assert any(i["id"] == "potable_water" for i in items)
    limited = client.get("/emoji/search", params={"q": "water", "limit": 2}).json()
    assert len(limited["items"]) == 2
    assert limited["items"] == items[:2]


def test_emoji_search_empty_query_is_400(client):
    assert client.get("/emoji/search", params={"q": ""}).status_code == 400
    assert client.get("/emoji/search", params={"q": "   "}).status_code == 400
    assert client.get("/emoji/search").status_code == 400


def test_palettes_endpoint(client, runtime):
    resp = client.get("/palettes")
    assert resp.status_code == 200
    listed = resp.json()["palettes"]
    assert [p["name"] for p in listed] == [p.name for p in runtime.palettes]
    emoji10 = listed[0]
    assert emoji10["kind"] == "sequential"
    assert len(emoji10["levels"]) == len(emoji10["glyphs"]) == 10
    assert emoji10["glyphs"][0] == runtime.lexicon.get(emoji10["levels"][0]).emoji
    assert client.get("/palettes").json()["palettes"] == listed


def test_load_runtime_rejects_missing_files(tmp_path):
    with pytest.raises(ModelLoadError):
        load_runtime(embeddings_path=tmp_path / "absent.txt")
    with pytest.raises(ModelLoadError):
        load_runtime(lexicon_path=tmp_path / "absent.jsonl")
