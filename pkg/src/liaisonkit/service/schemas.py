"""Pydantic request/response models for the HTTP API."""

from __future__ import annotations

from typing import Any, Literal

from pydantic import BaseModel, Field


class ErrorBody(BaseModel):
    code: str
    message: str
    detail: dict[str, Any] = Field(default_factory=dict)


class Envelope(BaseModel):
    request_id: str
    snapshot: int
    payload: Any = None
    error: ErrorBody | None = None


class TopicClauseModel(BaseModel):
    topic: str
    min_probability: float = 0.9


class StaffScoreClauseModel(BaseModel):
    name: str
    min: float
    max: float


class FilterModel(BaseModel):
    """JSON mirror of the store filter; keywords accept the compact string
    form ("ANY(cost, costs)") or the nested {"any": [...]} object form."""

    date_range: tuple[str, str] | None = None
    industries: list[str] = Field(default_factory=list)
    regions: list[str] = Field(default_factory=list)
    keywords: str | dict | None = None
    topics: list[TopicClauseModel] = Field(default_factory=list)
    staff_scores: list[StaffScoreClauseModel] = Field(default_factory=list)


class SearchRequest(BaseModel):
    filter: FilterModel = Field(default_factory=FilterModel)
    cursor: str | None = None
    page_size: int = Field(default=25, ge=1, le=500)


class SnippetModel(BaseModel):
    paragraph_id: str
    liaison_id: str
    meeting_date: str
    firm_id: str
    industry_code: str
    region: str
    headcount_bucket: str
    heading_context: str
    text: str
    match_offsets: list[tuple[int, int]] = Field(default_factory=list)
    topic_scores: dict[str, float] = Field(default_factory=dict)
    tone: float | None = None


class SearchResponse(BaseModel):
    items: list[SnippetModel]
    total: int
    next_cursor: str | None = None


class SuggestRequest(BaseModel):
    terms: list[str]
    k: int = Field(default=10, ge=0, le=200)
    exclude: list[str] = Field(default_factory=list)


class SuggestionModel(BaseModel):
    token: str
    similarity: float


class SuggestResponse(BaseModel):
    suggestions: list[SuggestionModel]
    unknown_seeds: list[str]


class DictionaryModel(BaseModel):
    name: str
    terms: list[str]


class RefreshRequest(BaseModel):
    documents: list[dict] = Field(default_factory=list)
    corpus_path: str | None = None
    truth_path: str | None = None


class RefreshResponse(BaseModel):
    snapshot: int
    liaisons_added: int


class NowcastRunRequest(BaseModel):
    panel_csv: str | None = None
    schema_path: str | None = None
    models: list[Literal["ols", "ridge", "lasso", "elastic"]] = Field(
        default_factory=lambda: ["lasso"]
    )
    protocol: dict = Field(default_factory=dict)


class NowcastRunResponse(BaseModel):
    run_id: str
    summary: dict[str, dict]
