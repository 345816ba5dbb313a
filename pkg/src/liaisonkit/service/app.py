"""HTTP facade: every endpoint is a thin wrapper over one module operation.

Responses are wrapped in an envelope carrying a request id and the snapshot
version the answer was computed from, so analyst citations are reproducible.
Series endpoints accept ``?format=csv`` for raw CSV export.
"""

from __future__ import annotations

import uuid
from pathlib import Path

from fastapi import Depends, FastAPI, Query, Request, Response
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .. import indices
from ..classify import TopicDictionary
from ..embed import suggest_terms
from ..errors import AuthError, LiaisonKitError, StoreError, ValidationError
from ..ingest.parser import document_from_dict
from ..ingest.synth import read_truth_jsonl
from ..classify import StubScoreProvider
from ..numex import period_series_trimmed
from ..periods import GRANULARITIES
from ..pipeline import enrich_documents, liaison_rate_observations
from ..nowcast import Protocol, read_panel_csv, run_backtest, selection_frequency
from ..store import Filter, append_segment, term_frequency_csv
from ..store.engine import Snapshot
from ..text import tokenize_with_spans
from .schemas import (
    DictionaryModel,
    Envelope,
    ErrorBody,
    FilterModel,
    NowcastRunRequest,
    NowcastRunResponse,
    RefreshRequest,
    RefreshResponse,
    SearchRequest,
    SearchResponse,
    SnippetModel,
    SuggestRequest,
    SuggestResponse,
    SuggestionModel,
)
from .state import AppState, ServiceConfig

_HTTP_STATUS = {
    "validation_error": 400,
    "parse_error": 400,
    "bad_filter_expression": 400,
    "missing_score": 404,
    "unknown_topic": 404,
    "store_error": 404,
    "missing_data": 400,
    "empty_series": 404,
    "protocol_error": 400,
    "integrity_error": 409,
    "unauthorized": 401,
    "vocabulary_error": 404,
}


def build_filter(model: FilterModel) -> Filter:
    return Filter.create(
        date_range=model.date_range,
        industries=model.industries,
        regions=model.regions,
        keywords=model.keywords,
        topics=[(t.topic, t.min_probability) for t in model.topics],
        staff_scores=[(s.name, s.min, s.max) for s in model.staff_scores],
    )


def _match_offsets(flt: Filter, text: str) -> list[tuple[int, int]]:
    """Character spans of keyword-clause terms, for highlighting."""
    if flt.keyword_clause is None:
        return []
    from ..store.filters import AllOf, AnyOf, Term

    phrases: set[tuple[str, ...]] = set()

    def collect(clause):
        if isinstance(clause, Term):
            phrases.add(clause.phrase)
        else:
            for item in clause.items:
                collect(item)

    collect(flt.keyword_clause)
    spans = tokenize_with_spans(text)
    tokens = [s.token for s in spans]
    out: list[tuple[int, int]] = []
    for phrase in phrases:
        k = len(phrase)
        for i in range(len(tokens) - k + 1):
            if tuple(tokens[i : i + k]) == phrase:
                out.append((spans[i].start, spans[i + k - 1].end))
    return sorted(set(out))


def create_app(config: ServiceConfig | None = None, state: AppState | None = None) -> FastAPI:
    state = state or AppState(config or ServiceConfig.from_env())
    app = FastAPI(title="liaisonkit", version="0.1.0")
    app.state.kit = state

    def snapshot() -> Snapshot:
        return state.store.snapshot

    def envelope(payload, snap: Snapshot | None = None) -> Envelope:
        return Envelope(
            request_id=uuid.uuid4().hex,
            snapshot=(snap or snapshot()).version,
            payload=payload,
        )

    @app.exception_handler(LiaisonKitError)
    async def _kit_error(request: Request, exc: LiaisonKitError):
        body = Envelope(
            request_id=uuid.uuid4().hex,
            snapshot=snapshot().version,
            error=ErrorBody(code=exc.code, message=str(exc)),
        )
        return JSONResponse(status_code=_HTTP_STATUS.get(exc.code, 500), content=body.model_dump())

    @app.middleware("http")
    async def _auth(request: Request, call_next):
        if state.auth_token is not None and request.url.path != "/health":
            header = request.headers.get("authorization", "")
            if header != f"Bearer {state.auth_token}":
                body = Envelope(
                    request_id=uuid.uuid4().hex,
                    snapshot=snapshot().version,
                    error=ErrorBody(code="unauthorized", message="missing or bad token"),
                )
                return JSONResponse(status_code=401, content=body.model_dump())
        return await call_next(request)

    # -- health ------------------------------------------------------------

    @app.get("/health")
    def health():
        snap = snapshot()
        return envelope(
            {"status": "ok", "snapshot": snap.version,
             "liaisons": snap.n_liaisons, "paragraphs": len(snap)},
            snap,
        )

    # -- search ------------------------------------------------------------

    @app.post("/search")
    def search(req: SearchRequest):
        snap = snapshot()
        flt = build_filter(req.filter)
        page = snap.query_paragraphs(flt, cursor=req.cursor, page_size=req.page_size)
        items = []
        for rec, para in page.items:
            enr = rec.enrichment_for(para.paragraph_id)
            items.append(
                SnippetModel(
                    paragraph_id=para.paragraph_id,
                    liaison_id=rec.liaison_id,
                    meeting_date=rec.meeting_date.isoformat(),
                    firm_id=rec.firm_id,
                    industry_code=rec.industry_code,
                    region=rec.region,
                    headcount_bucket=rec.headcount_bucket,
                    heading_context=para.heading_context,
                    text=para.text,
                    match_offsets=_match_offsets(flt, para.text),
                    topic_scores=enr.topic_scores,
                    tone=enr.tone,
                )
            )
        return envelope(
            SearchResponse(items=items, total=page.total, next_cursor=page.next_cursor).model_dump(),
            snap,
        )

    # -- series ------------------------------------------------------------

    def _granularity(value: str) -> str:
        if value not in GRANULARITIES:
            raise ValidationError(f"granularity must be one of {GRANULARITIES}")
        return value

    def _series_response(series: indices.IndicatorSeries, fmt: str, snap: Snapshot):
        if fmt == "csv":
            return Response(content=series.to_csv(), media_type="text/csv")
        return envelope(series.to_dict(), snap)

    def _method(kind: str, state: AppState, dictionary: str | None, topic: str):
        if kind == "scored":
            return indices.ScoredMethod(threshold=state.config.threshold)
        if kind == "dictionary":
            name = dictionary or topic
            return indices.DictionaryMethod(state.dictionary(name), state.lexicon)
        raise ValidationError("method must be 'scored' or 'dictionary'")

    @app.get("/series/term-frequency")
    def term_frequency(
        terms: str = Query(..., description="comma-separated terms/phrases"),
        granularity: str = "quarter",
        format: str = "json",
    ):
        snap = snapshot()
        term_list = [t.strip() for t in terms.split(",") if t.strip()]
        points = snap.term_frequency_series(term_list, _granularity(granularity))
        if format == "csv":
            return Response(content=term_frequency_csv(points), media_type="text/csv")
        return envelope(
            {
                "terms": term_list,
                "granularity": granularity,
                "points": [
                    {"period": p.period, "matched": p.matched_tokens,
                     "total": p.total_tokens, "share": p.share}
                    for p in points
                ],
            },
            snap,
        )

    @app.get("/series/topic-exposure")
    def topic_exposure(
        topic: str,
        method: str = "scored",
        weighting: str = "per_liaison",
        granularity: str = "quarter",
        standardized: bool = False,
        dictionary: str | None = None,
        format: str = "json",
    ):
        snap = snapshot()
        series = indices.topic_exposure_series(
            snap, topic, _method(method, state, dictionary, topic),
            _granularity(granularity), weighting, standardized,
        )
        return _series_response(series, format, snap)

    @app.get("/series/topic-tone")
    def topic_tone(
        topic: str,
        method: str = "scored",
        weighting: str = "per_liaison",
        granularity: str = "quarter",
        standardized: bool = False,
        dictionary: str | None = None,
        format: str = "json",
    ):
        snap = snapshot()
        series = indices.topic_tone_series(
            snap, topic, _method(method, state, dictionary, topic),
            _granularity(granularity), weighting, standardized,
        )
        return _series_response(series, format, snap)

    @app.get("/series/uncertainty")
    def uncertainty(
        granularity: str = "month",
        henderson: bool = False,
        term: int = 13,
        format: str = "json",
    ):
        snap = snapshot()
        series = indices.uncertainty_index(
            snap, state.dictionary("uncertainty"), _granularity(granularity)
        )
        if henderson:
            series = indices.smooth_series(series, term=term)
        return _series_response(series, format, snap)

    @app.get("/series/extractions/{variable}")
    def extractions(variable: str, granularity: str = "quarter", format: str = "json"):
        snap = snapshot()
        obs = liaison_rate_observations(snap.records.values(), variable)
        series = period_series_trimmed(obs, variable, _granularity(granularity))
        if format == "csv":
            return Response(content=series.to_csv(), media_type="text/csv")
        return envelope(
            {
                "variable": variable,
                "granularity": granularity,
                "trim": list(series.trim),
                "points": series.points,
            },
            snap,
        )

    # -- topic builder -------------------------------------------------------

    @app.post("/topics/suggest")
    def suggest(req: SuggestRequest):
        if state.model is None:
            raise StoreError("no embedding model loaded")
        result = suggest_terms(state.model, req.terms, k=req.k, exclude=req.exclude)
        return envelope(
            SuggestResponse(
                suggestions=[
                    SuggestionModel(token=s.token, similarity=s.similarity)
                    for s in result.suggestions
                ],
                unknown_seeds=result.unknown_seeds,
            ).model_dump()
        )

    # -- dictionaries ----------------------------------------------------------

    @app.get("/dictionaries/{name}")
    def get_dictionary(name: str):
        d = state.dictionary(name)
        return envelope(DictionaryModel(name=d.name, terms=sorted(d.terms)).model_dump())

    @app.put("/dictionaries/{name}")
    def put_dictionary(name: str, body: DictionaryModel):
        d = TopicDictionary.from_terms(name, body.terms)
        state.dictionaries[name] = d
        if state.config.dictionaries_dir:
            path = Path(state.config.dictionaries_dir)
            path.mkdir(parents=True, exist_ok=True)
            (path / f"{name}.txt").write_text(d.to_text(), encoding="utf-8")
        return envelope(DictionaryModel(name=name, terms=sorted(d.terms)).model_dump())

    # -- nowcast ----------------------------------------------------------------

    @app.post("/nowcast/run")
    def nowcast_run(req: NowcastRunRequest):
        if not req.panel_csv or not req.schema_path:
            raise ValidationError("panel_csv and schema_path are required")
        panel = read_panel_csv(req.panel_csv, req.schema_path)
        protocol = Protocol(**req.protocol) if req.protocol else Protocol()
        results = run_backtest(panel, list(req.models), protocol)
        run_id = uuid.uuid4().hex
        state.nowcast_results[run_id] = {
            name: res.to_dict() | (
                {"selection_frequency": selection_frequency(res)}
                if res.model.kind in ("lasso", "elastic") else {}
            )
            for name, res in results.items()
        }
        summary = {
            name: {
                "rmse_full": res.rmse_full,
                "rmse_precovid": res.rmse_precovid,
                "ratio_full": res.ratio_full,
                "ratio_precovid": res.ratio_precovid,
            }
            for name, res in results.items()
        }
        return envelope(NowcastRunResponse(run_id=run_id, summary=summary).model_dump())

    @app.get("/nowcast/results/{run_id}")
    def nowcast_results(run_id: str):
        if run_id not in state.nowcast_results:
            raise StoreError(f"no nowcast run {run_id!r}")
        return envelope(state.nowcast_results[run_id])

    # -- refresh -------------------------------------------------------------

    @app.post("/admin/refresh")
    def refresh(req: RefreshRequest):
        docs = [document_from_dict(obj) for obj in req.documents]
        if req.corpus_path:
            from ..ingest.parser import load_corpus

            docs.extend(load_corpus(req.corpus_path))
        if not docs:
            snap = snapshot()
            return envelope(RefreshResponse(snapshot=snap.version, liaisons_added=0).model_dump(), snap)
        provider = state.provider
        if req.truth_path:
            provider = StubScoreProvider(
                read_truth_jsonl(req.truth_path), labels=state.config.labels,
                seed=state.config.seed,
            )
        records = enrich_documents(docs, provider)
        if state.config.store_path:
            version = append_segment(state.config.store_path, state.store, records)
        else:
            version = state.store.upsert_many(records)
        snap = snapshot()
        return envelope(
            RefreshResponse(snapshot=version, liaisons_added=len(records)).model_dump(), snap
        )

    ui_dir = Path(__file__).resolve().parents[4] / "frontend" / "dist"
    if ui_dir.is_dir():
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def serve(config: ServiceConfig, host: str = "127.0.0.1", port: int = 8701) -> None:
    import uvicorn

    uvicorn.run(create_app(config), host=host, port=port, log_level="warning")
