"""Service configuration and shared state."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

from ..classify import (
    ScoreProvider,
    SentimentLexicon,
    SidecarScoreProvider,
    StubScoreProvider,
    TopicDictionary,
    load_dictionary_dir,
)
from ..data import bundled_dictionary, bundled_lexicon
from ..embed import EmbeddingModel, load_model
from ..errors import StoreError, ValidationError
from ..ingest.synth import read_truth_jsonl
from ..store import ParagraphStore, load_store

ENV_BIND = "LIAISONKIT_BIND"
ENV_STORE = "LIAISONKIT_STORE"
ENV_TOKEN_FILE = "LIAISONKIT_AUTH_TOKEN_FILE"


@dataclass
class ServiceConfig:
    store_path: str | None = None
    model_path: str | None = None
    dictionaries_dir: str | None = None
    truth_path: str | None = None     # enables the deterministic stub scorer
    scores_path: str | None = None    # sidecar scores/tone file
    labels: tuple[str, ...] = ("demand", "wages", "prices", "labour", "outlook")
    threshold: float = 0.9
    auth_token_file: str | None = None
    seed: int = 0

    @classmethod
    def from_env(cls, **overrides) -> "ServiceConfig":
        cfg = cls(**overrides)
        if cfg.store_path is None:
            cfg.store_path = os.environ.get(ENV_STORE)
        if cfg.auth_token_file is None:
            cfg.auth_token_file = os.environ.get(ENV_TOKEN_FILE)
        return cfg


class AppState:
    def __init__(self, config: ServiceConfig):
        self.config = config
        self.store: ParagraphStore = (
            load_store(config.store_path) if config.store_path else ParagraphStore()
        )
        self.model: EmbeddingModel | None = (
            load_model(config.model_path) if config.model_path else None
        )
        self.dictionaries: dict[str, TopicDictionary] = {}
        for name in ("wages", "labour", "uncertainty"):
            self.dictionaries[name] = bundled_dictionary(name)
        if config.dictionaries_dir:
            self.dictionaries.update(load_dictionary_dir(config.dictionaries_dir))
        self.lexicon: SentimentLexicon = bundled_lexicon()
        self.provider: ScoreProvider | None = self._build_provider()
        self.nowcast_results: dict[str, dict] = {}
        self.auth_token: str | None = None
        if config.auth_token_file:
            token = Path(config.auth_token_file).read_text(encoding="utf-8").strip()
            if not token:
                raise ValidationError("auth token file is empty")
            self.auth_token = token

    def _build_provider(self) -> ScoreProvider | None:
        if self.config.scores_path:
            return SidecarScoreProvider.from_jsonl(self.config.scores_path, self.config.labels)
        if self.config.truth_path:
            truth = read_truth_jsonl(self.config.truth_path)
            return StubScoreProvider(truth, labels=self.config.labels, seed=self.config.seed)
        return None

    def dictionary(self, name: str) -> TopicDictionary:
        try:
            return self.dictionaries[name]
        except KeyError:
            raise StoreError(f"no dictionary named {name!r}") from None
