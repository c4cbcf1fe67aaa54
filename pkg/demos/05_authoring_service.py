"""
Walking through an authoring session
=====================================

The HTTP service wraps the whole pipeline: upload a CSV, get a fully
assigned encoding plan back, page through ranked recommendations,
override an assignment, set a chart spec, and read the live preview.
This demo drives the service in process; `emocharts serve` exposes the
same endpoints on localhost for the browser UI.
"""

from fastapi.testclient import TestClient

from emocharts.service import create_app, load_runtime

client = TestClient(create_app(load_runtime()))

CSV = """\
beverage,cups
coffee,31
tea,12
water,26
"""

# 1. Create a session. The response carries typed fields and an initial
#    plan with an emoji for every field and every category value.
created = client.post("/sessions", content=CSV.encode("utf-8")).json()
sid = created["id"]
print("fields:", [(f["name"], f["kind"]) for f in created["fields"]])
print("initial assignments:", created["plan"]["value_emoji"]["beverage"])

# 2. Page through ranked candidates for one category value.
page = client.get(
    f"/sessions/{sid}/recommendations",
    params={"target": "value:beverage:coffee", "page": 1, "page_size": 5},
).json()
print("\ncandidates for 'coffee':")
for item in page["items"]:
    print(f"  {item['rank']}. {item['emoji']} {item['emoji_id']} {item['score']:.3f}")

# 3. Override one assignment. Edits are atomic: a bad emoji id would
#    reject the whole request and change nothing.
client.put(f"/sessions/{sid}/plan", json={
    "value_emoji": {"beverage": {"water": "potable_water"}},
})

# 4. Choose a chart template and read the preview.
client.put(f"/sessions/{sid}/spec", json={
    "template": "unit_chart",
    "group_by": "beverage",
    "series": [{"field": "cups", "op": "sum"}],
    "unit_value": 4,
})
preview = client.get(f"/sessions/{sid}/preview").json()
print("\npreview:")
print(preview["text"], end="")
print("\nlegend:", preview["legend"])
