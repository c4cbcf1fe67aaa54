"""Local HTTP authoring service.

Holds in-memory authoring sessions: a dataset, an editable encoding plan,
and an optional chart spec. Edits to one session are serialized through a
per-session lock and applied atomically; reads never mutate. The preview
endpoint returns exactly what the renderer produced, so copying its text
is byte-equal to rendering the same session locally.
"""
from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field as dc_field
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.staticfiles import StaticFiles

from .assets import (
    DEFAULT_EMBEDDINGS_PATH,
    DEFAULT_LEXICON_PATH,
    DEFAULT_PALETTES_PATH,
)
from .chart import (
    ChartSpec,
    EncodingPlan,
    RenderError,
    plan_from_dict,
    plan_to_dict,
    propose_plan,
    render_time_series,
    render_unit_chart,
    spec_from_dict,
    spec_to_dict,
)
from .embedding import EmbeddingTable, load_table
from .lexicon import Lexicon, load_lexicon, search
from .recommend import (
    OrdinalPalette,
    PlaceholderPolicy,
    load_palettes,
    recommend,
)
from .tabular import CsvError, Dataset, ingest_csv

DEFAULT_PAGE_SIZE = 8


class ModelLoadError(RuntimeError):
    """A model file (lexicon, embeddings, palettes) failed to load."""


@dataclass
class Runtime:
    lexicon: Lexicon
    table: EmbeddingTable
    palettes: list[OrdinalPalette]
    policy: PlaceholderPolicy = dc_field(default_factory=PlaceholderPolicy)


def load_runtime(
    lexicon_path: str | Path | None = None,
    embeddings_path: str | Path | None = None,
    palettes_path: str | Path | None = None,
) -> Runtime:
    """Load the three model files, mapping any failure to ModelLoadError."""
    try:
        lexicon = load_lexicon(lexicon_path or DEFAULT_LEXICON_PATH)
        table = load_table(embeddings_path or DEFAULT_EMBEDDINGS_PATH)
        palettes = load_palettes(palettes_path or DEFAULT_PALETTES_PATH, lexicon)
    except (OSError, ValueError) as exc:
        raise ModelLoadError(str(exc)) from exc
    return Runtime(lexicon=lexicon, table=table, palettes=palettes)


@dataclass
class Session:
    id: str
    dataset: Dataset
    plan: EncodingPlan
    spec: ChartSpec | None = None
    created_at: str = ""
    updated_at: str = ""
    lock: threading.Lock = dc_field(default_factory=threading.Lock)


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def _field_payload(ds: Dataset) -> list[dict]:
    return [
        {"name": f.name, "kind": f.kind, "granularity": f.granularity}
        for f in ds.fields
    ]


def _render(session: Session, rt: Runtime):
    plan, spec = session.plan, session.spec
    if spec.template == "unit_chart":
        return render_unit_chart(session.dataset, plan, spec, rt.lexicon)
    return render_time_series(
        session.dataset, plan, spec, rt.palettes, rt.lexicon,
        placeholder_id=rt.policy.placeholder_emoji_id,
    )


def _merge_plan(current: EncodingPlan, edits: dict) -> EncodingPlan:
    """Apply a partial edit object on top of a plan; pure, no validation."""
    allowed = {"field_emoji", "value_emoji", "numeric_palette",
               "field_order", "show_labels"}
    unknown = set(edits) - allowed
    if unknown:
        raise ValueError(f"unknown plan key {sorted(unknown)[0]!r}")
    base = plan_to_dict(current)
    if "field_emoji" in edits:
        if not isinstance(edits["field_emoji"], dict):
            raise ValueError("field_emoji must be an object")
        base["field_emoji"] = {**base["field_emoji"], **edits["field_emoji"]}
    if "value_emoji" in edits:
        if not isinstance(edits["value_emoji"], dict):
            raise ValueError("value_emoji must be an object")
        merged = {f: dict(m) for f, m in base["value_emoji"].items()}
        for fname, mapping in edits["value_emoji"].items():
            if not isinstance(mapping, dict):
                raise ValueError("value_emoji entries must be objects")
            merged[fname] = {**merged.get(fname, {}), **mapping}
        base["value_emoji"] = merged
    if "numeric_palette" in edits:
        if not isinstance(edits["numeric_palette"], dict):
            raise ValueError("numeric_palette must be an object")
        base["numeric_palette"] = {
            **base["numeric_palette"], **edits["numeric_palette"]
        }
    if "field_order" in edits:
        base["field_order"] = edits["field_order"]
    if "show_labels" in edits:
        base["show_labels"] = edits["show_labels"]
    return plan_from_dict(base)


def create_app(runtime: Runtime | None = None, ui_dir: str | Path | None = None) -> FastAPI:
    rt = runtime or load_runtime()
    app = FastAPI(title="emocharts authoring service")
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()
    app.state.runtime = rt
    app.state.sessions = sessions

    def get_session(session_id: str) -> Session:
        with registry_lock:
            session = sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")
        return session

    def check_palette_names(plan: EncodingPlan) -> None:
        known = {p.name for p in rt.palettes}
        for fname, choice in plan.numeric_palette.items():
            if choice.name not in known:
                raise ValueError(
                    f"unknown palette {choice.name!r} for field {fname!r}"
                )

    @app.post("/sessions", status_code=201)
    async def create_session(request: Request):
        raw = await request.body()
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise HTTPException(status_code=400, detail=f"body is not UTF-8: {exc}")
        try:
            ds = ingest_csv(text)
        except CsvError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        plan = propose_plan(ds, rt.table, rt.lexicon, rt.policy)
        session = Session(
            id=uuid.uuid4().hex,
            dataset=ds,
            plan=plan,
            created_at=_now(),
            updated_at=_now(),
        )
        with registry_lock:
            sessions[session.id] = session
        return {
            "id": session.id,
            "fields": _field_payload(ds),
            "row_count": ds.row_count,
            "plan": plan_to_dict(plan),
            "created_at": session.created_at,
        }

    @app.get("/sessions/{session_id}/recommendations")
    def get_recommendations(
        session_id: str,
        target: str,
        page: int = Query(default=1, ge=1),
        page_size: int = Query(default=DEFAULT_PAGE_SIZE, ge=1),
    ):
        session = get_session(session_id)
        ds = session.dataset
        kind, _, rest = target.partition(":")
        if kind == "field" and rest:
            if rest not in ds:
                raise HTTPException(status_code=404, detail=f"unknown field {rest!r}")
            text = rest
        elif kind == "value" and rest:
            fname, sep, value = rest.partition(":")
            if not sep:
                raise HTTPException(
                    status_code=404, detail=f"malformed target {target!r}"
                )
            if fname not in ds or ds.field(fname).kind != "categorical":
                raise HTTPException(
                    status_code=404, detail=f"unknown categorical field {fname!r}"
                )
            if value not in {v for v in ds.field(fname).values if v is not None}:
                raise HTTPException(
                    status_code=404,
                    detail=f"unknown value {value!r} for field {fname!r}",
                )
            text = value
        else:
            raise HTTPException(status_code=404, detail=f"malformed target {target!r}")

        full = recommend(rt.table, rt.lexicon, text, k=max(len(rt.lexicon), 1))
        start = (page - 1) * page_size
        items = [
            {
                "rank": r.rank,
                "emoji_id": r.emoji_id,
                "emoji": rt.lexicon.get(r.emoji_id).emoji,
                "score": r.score,
            }
            for r in full[start:start + page_size]
        ]
        return {
            "target": target,
            "page": page,
            "page_size": page_size,
            "total": len(full),
            "items": items,
        }

    @app.put("/sessions/{session_id}/plan")
    async def put_plan(session_id: str, request: Request):
        session = get_session(session_id)
        try:
            edits = await request.json()
        except ValueError:
            raise HTTPException(status_code=422, detail="body is not valid JSON")
        if not isinstance(edits, dict):
            raise HTTPException(status_code=422, detail="plan edits must be an object")
        with session.lock:
            try:
                candidate = _merge_plan(session.plan, edits)
                candidate.validate(rt.lexicon, session.dataset)
                check_palette_names(candidate)
            except (ValueError, KeyError) as exc:
                detail = exc.args[0] if exc.args else str(exc)
                raise HTTPException(status_code=422, detail=str(detail))
            session.plan = candidate
            session.updated_at = _now()
            return {"plan": plan_to_dict(session.plan)}

    @app.put("/sessions/{session_id}/spec")
    async def put_spec(session_id: str, request: Request):
        session = get_session(session_id)
        try:
            body = await request.json()
        except ValueError:
            raise HTTPException(status_code=422, detail="body is not valid JSON")
        with session.lock:
            try:
                spec = spec_from_dict(body)
                spec.validate(session.dataset)
                if spec.template == "time_series" and spec.palette not in {
                    p.name for p in rt.palettes
                }:
                    raise ValueError(f"unknown palette {spec.palette!r}")
            except (ValueError, KeyError) as exc:
                detail = exc.args[0] if exc.args else str(exc)
                raise HTTPException(status_code=422, detail=str(detail))
            session.spec = spec
            session.updated_at = _now()
            return {"spec": spec_to_dict(spec)}

    @app.get("/sessions/{session_id}/preview")
    def get_preview(session_id: str):
        session = get_session(session_id)
        with session.lock:
            if session.spec is None:
                raise HTTPException(
                    status_code=409, detail="no chart spec set for this session"
                )
            try:
                rendered = _render(session, rt)
            except RenderError as exc:
                raise HTTPException(status_code=422, detail=str(exc))
            return {
                "text": rendered.text,
                "legend": [list(pair) for pair in rendered.legend],
                "spec": spec_to_dict(session.spec),
            }

    @app.get("/emoji/search")
    def emoji_search(q: str = Query(default=""), limit: int = Query(default=20, ge=1)):
        try:
            hits = search(rt.lexicon, q, limit=limit)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return {
            "query": q,
            "items": [
                {
                    "id": e.id,
                    "emoji": e.emoji,
                    "name": e.name,
                    "keywords": list(e.keywords),
                }
                for e in hits
            ],
        }

    @app.get("/palettes")
    def get_palettes():
        return {
            "palettes": [
                {
                    "name": p.name,
                    "kind": p.kind,
                    "levels": list(p.levels),
                    "glyphs": [rt.lexicon.get(i).emoji for i in p.levels],
                }
                for p in rt.palettes
            ]
        }

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
