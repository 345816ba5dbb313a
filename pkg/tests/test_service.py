import json

import numpy as np
import pytest
from fastapi.testclient import TestClient

from liaisonkit import indices
from liaisonkit.data import bundled_dictionary
from liaisonkit.embed import EmbedConfig, save_model, suggest_terms, train_embeddings
from liaisonkit.ingest import CorpusConfig, generate_synthetic_corpus, write_documents_jsonl, write_truth_jsonl
from liaisonkit.ingest.parser import document_to_dict
from liaisonkit.numex import period_series_trimmed
from liaisonkit.pipeline import liaison_rate_observations
from liaisonkit.service import AppState, ServiceConfig, build_filter, create_app
from liaisonkit.store import init_store


@pytest.fixture(scope="module")
def service_env(tmp_path_factory, small_records, small_corpus):
    base = tmp_path_factory.mktemp("svc")
    store_path = base / "store"
    init_store(store_path, small_records)

    snap_sentences = []
    for rec in small_records:
        for para in rec.paragraphs:
            from liaisonkit.text import tokenize

            snap_sentences.append(tokenize(para.text))
    model = train_embeddings(
        snap_sentences, EmbedConfig(dim=32, window=4, epochs=3, min_count=3, seed=5)
    )
    model_path = base / "model.bin"
    save_model(model, model_path)

    cfg, docs, truths = small_corpus
    truth_path = base / "truth.jsonl"
    write_truth_jsonl(truths, truth_path)

    config = ServiceConfig(
        store_path=str(store_path),
        model_path=str(model_path),
        truth_path=str(truth_path),
        labels=cfg.topics,
        dictionaries_dir=str(base / "dicts"),
    )
    state = AppState(config)
    app = create_app(state=state)
    return TestClient(app), state, model, base


class TestHealthAndEnvelope:
    def test_health(self, service_env):
        client, state, *_ = service_env
        res = client.get("/health")
        assert res.status_code == 200
        body = res.json()
        assert body["payload"]["status"] == "ok"
        assert body["snapshot"] == state.store.snapshot.version
        assert body["request_id"]

    def test_error_envelope_carries_code(self, service_env):
        client, *_ = service_env
        res = client.post("/search", json={"filter": {"keywords": "ANY("}})
        assert res.status_code == 400
        assert res.json()["error"]["code"] == "bad_filter_expression"

    def test_unknown_dictionary_404(self, service_env):
        client, *_ = service_env
        res = client.get("/dictionaries/nope")
        assert res.status_code == 404
        assert res.json()["error"]["code"] == "store_error"


class TestSearchContract:
    def test_matches_direct_query(self, service_env):
        client, state, *_ = service_env
        payload = {"filter": {"keywords": "ANY(wages, wage)", "regions": ["NSW", "VIC"]},
                   "page_size": 500}
        res = client.post("/search", json=payload)
        assert res.status_code == 200
        got = [item["paragraph_id"] for item in res.json()["payload"]["items"]]
        flt = build_filter(
            __import__("liaisonkit.service.schemas", fromlist=["FilterModel"]).FilterModel(
                **payload["filter"]
            )
        )
        snap = state.store.snapshot
        direct = [p.paragraph_id for _, p in snap.query_paragraphs(flt, page_size=500).items]
        assert got == direct

    def test_match_offsets_point_at_terms(self, service_env):
        client, *_ = service_env
        res = client.post("/search", json={"filter": {"keywords": "wages"}, "page_size": 5})
        for item in res.json()["payload"]["items"]:
            assert item["match_offsets"], "keyword search must produce offsets"
            for start, end in item["match_offsets"]:
                assert item["text"][start:end].lower().startswith("wage")

    def test_pagination_round_trip(self, service_env):
        client, *_ = service_env
        seen, cursor = [], None
        while True:
            body = {"filter": {}, "page_size": 40}
            if cursor:
                body["cursor"] = cursor
            page = client.post("/search", json=body).json()["payload"]
            seen.extend(i["paragraph_id"] for i in page["items"])
            cursor = page["next_cursor"]
            if cursor is None:
                break
        assert len(seen) == page["total"]
        assert len(set(seen)) == len(seen)


class TestSeriesContract:
    def test_term_frequency_matches_direct(self, service_env):
        client, state, *_ = service_env
        res = client.get("/series/term-frequency", params={"terms": "wages,prices"})
        payload = res.json()["payload"]
        direct = state.store.snapshot.term_frequency_series(["wages", "prices"], "quarter")
        assert [p["share"] for p in payload["points"]] == [p.share for p in direct]

    def test_term_frequency_csv(self, service_env):
        client, *_ = service_env
        res = client.get("/series/term-frequency", params={"terms": "wages", "format": "csv"})
        assert res.headers["content-type"].startswith("text/csv")
        assert res.text.splitlines()[0] == "period,matched,total,share"

    def test_topic_exposure_matches_direct(self, service_env):
        client, state, *_ = service_env
        res = client.get("/series/topic-exposure",
                         params={"topic": "wages", "method": "scored", "standardized": "true"})
        payload = res.json()["payload"]
        direct = indices.topic_exposure_series(
            state.store.snapshot, "wages", indices.ScoredMethod(threshold=0.9),
            "quarter", "per_liaison", standardized=True,
        )
        assert payload["standardized"] is True
        assert np.allclose([p["value"] for p in payload["points"]], direct.values())

    def test_topic_tone_dictionary_route(self, service_env):
        client, state, *_ = service_env
        res = client.get("/series/topic-tone",
                         params={"topic": "wages", "method": "dictionary"})
        payload = res.json()["payload"]
        direct = indices.topic_tone_series(
            state.store.snapshot, "wages",
            indices.DictionaryMethod(state.dictionary("wages"), state.lexicon),
            "quarter", "per_liaison",
        )
        assert np.allclose([p["value"] for p in payload["points"]], direct.values())

    def test_uncertainty_with_henderson(self, service_env):
        client, state, *_ = service_env
        raw = client.get("/series/uncertainty", params={"granularity": "quarter"}).json()["payload"]
        smooth = client.get("/series/uncertainty",
                            params={"granularity": "quarter", "henderson": "true", "term": "5"})
        direct = indices.uncertainty_index(
            state.store.snapshot, state.dictionary("uncertainty"), "quarter"
        )
        assert np.allclose([p["value"] for p in raw["points"]], direct.values())
        smooth_payload = smooth.json()["payload"]
        assert smooth_payload["standardized"] is False
        direct_smooth = indices.smooth_series(direct, term=5)
        assert np.allclose([p["value"] for p in smooth_payload["points"]], direct_smooth.values())

    def test_extractions_match_direct(self, service_env):
        client, state, *_ = service_env
        res = client.get("/series/extractions/wages")
        payload = res.json()["payload"]
        obs = liaison_rate_observations(state.store.snapshot.records.values(), "wages")
        direct = period_series_trimmed(obs, "wages", "quarter")
        assert payload["points"] == direct.points
        assert payload["trim"] == [10.0, 90.0]


class TestSuggestContract:
    def test_passthrough(self, service_env):
        client, state, model, _ = service_env
        res = client.post("/topics/suggest", json={"terms": ["labour", "workers"], "k": 5})
        payload = res.json()["payload"]
        direct = suggest_terms(model, ["labour", "workers"], k=5)
        assert [s["token"] for s in payload["suggestions"]] == [s.token for s in direct.suggestions]

    def test_unknown_seed_reported_not_fatal(self, service_env):
        client, *_ = service_env
        res = client.post("/topics/suggest", json={"terms": ["labour", "zzzunknown"], "k": 3})
        assert res.status_code == 200
        assert res.json()["payload"]["unknown_seeds"] == ["zzzunknown"]

    def test_all_unknown_is_error(self, service_env):
        client, *_ = service_env
        res = client.post("/topics/suggest", json={"terms": ["zzzunknown"], "k": 3})
        assert res.status_code == 404


class TestDictionaries:
    def test_round_trip(self, service_env):
        client, *_ = service_env
        put = client.put("/dictionaries/custom", json={"name": "custom", "terms": ["alpha", "beta gamma"]})
        assert put.status_code == 200
        got = client.get("/dictionaries/custom").json()["payload"]
        assert got["terms"] == ["alpha", "beta gamma"]


class TestRefresh:
    def test_empty_delta_keeps_version(self, service_env):
        client, state, *_ = service_env
        before = state.store.snapshot.version
        res = client.post("/admin/refresh", json={"documents": []})
        assert res.json()["payload"]["snapshot"] == before

    def test_add_liaison_visible_after_swap(self, service_env, tmp_path):
        client, state, *_ = service_env
        before = state.store.snapshot
        cfg = CorpusConfig(firms=1, quarters=1, start="2031Q1")
        docs, truths = generate_synthetic_corpus(cfg, seed=99)
        doc = docs[0]
        # renumber to avoid a liaison_id clash with the fixture corpus
        payload_doc = document_to_dict(doc) | {"liaison_id": "L990001"}
        truth_path = tmp_path / "t.jsonl"
        renamed = [
            type(t)(t.paragraph_id.replace(doc.liaison_id, "L990001"), t.topics, t.planted_rate, t.planted_tone)
            for t in truths
        ]
        write_truth_jsonl(renamed, truth_path)
        res = client.post("/admin/refresh", json={
            "documents": [payload_doc], "truth_path": str(truth_path),
        })
        assert res.status_code == 200
        after = state.store.snapshot
        assert after.version > before.version
        found = client.post("/search", json={"filter": {"date_range": ["2031-01-01", "2031-12-31"]}})
        assert found.json()["payload"]["total"] > 0
        # the old snapshot object still serves its own version (isolation)
        assert before.version < after.version
        assert len(before) < len(after)

    def test_invalid_staff_score_rejected_store_untouched(self, service_env):
        client, state, *_ = service_env
        before = state.store.snapshot.version
        bad = {
            "liaison_id": "L999999", "meeting_date": "2032-01-01", "firm_id": "F9",
            "industry_code": "4100", "region": "NSW", "headcount_bucket": "small",
            "staff_scores": {"wages": 7}, "body": "text",
        }
        res = client.post("/admin/refresh", json={"documents": [bad]})
        assert res.status_code == 400
        assert state.store.snapshot.version == before


class TestNowcastEndpoint:
    def test_run_and_fetch(self, service_env, tmp_path):
        from liaisonkit.nowcast import planted_sparse_panel, write_panel_csv

        client, *_ = service_env
        panel, _ = planted_sparse_panel(seed=2, n_quarters=46, n_text=6)
        csv_path, schema_path = tmp_path / "p.csv", tmp_path / "s.json"
        write_panel_csv(panel, csv_path, schema_path)
        res = client.post("/nowcast/run", json={
            "panel_csv": str(csv_path), "schema_path": str(schema_path),
            "models": ["lasso"],
            "protocol": {"pure_training": 30, "nowcasts": 16},
        })
        assert res.status_code == 200
        payload = res.json()["payload"]
        assert "lasso-all" in payload["summary"]
        run_id = payload["run_id"]
        full = client.get(f"/nowcast/results/{run_id}").json()["payload"]
        assert len(full["lasso-all"]["records"]) == 16
        assert "selection_frequency" in full["lasso-all"]
        missing = client.get("/nowcast/results/nope")
        assert missing.status_code == 404


class TestAuth:
    def test_token_gate(self, tmp_path, small_records):
        store_path = tmp_path / "store"
        init_store(store_path, small_records[:2])
        token_file = tmp_path / "token"
        token_file.write_text("sesame\n")
        config = ServiceConfig(store_path=str(store_path), auth_token_file=str(token_file))
        client = TestClient(create_app(config))
        assert client.get("/health").status_code == 200  # health stays open
        denied = client.post("/search", json={"filter": {}})
        assert denied.status_code == 401
        assert denied.json()["error"]["code"] == "unauthorized"
        ok = client.post("/search", json={"filter": {}},
                         headers={"Authorization": "Bearer sesame"})
        assert ok.status_code == 200
