"""Command line interface.

Local commands (synth, ingest, embed, panel, nowcast run) operate on files
directly; query commands (health, search, series, suggest, dict, refresh)
are a thin HTTP client for a running service.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .ingest.parser import load_corpus, write_documents_jsonl
from .ingest.synth import CorpusConfig, generate_synthetic_corpus, read_truth_jsonl, write_truth_jsonl


def _fail(exc: Exception) -> None:
    raise click.ClickException(str(exc))


@click.group()
def main():
    """Text analytics and nowcasting toolkit for firm liaison summaries."""


# --- local batch commands -------------------------------------------------------

@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), help="JSON corpus config")
@click.option("--seed", type=int, required=True)
@click.option("--out", "out_path", type=click.Path(), required=True)
@click.option("--truth-out", type=click.Path(), help="defaults to <out>.truth.jsonl")
def synth(config_path, seed, out_path, truth_out):
    """Generate a seeded synthetic corpus plus its truth sidecar."""
    config = CorpusConfig.from_json(config_path) if config_path else CorpusConfig()
    docs, truths = generate_synthetic_corpus(config, seed)
    write_documents_jsonl(docs, out_path)
    truth_path = truth_out or f"{out_path}.truth.jsonl"
    write_truth_jsonl(truths, truth_path)
    click.echo(f"wrote {len(docs)} documents to {out_path}; truth sidecar {truth_path}")


@main.command()
@click.option("--corpus", "corpus_path", type=click.Path(exists=True), required=True)
@click.option("--out", "store_path", type=click.Path(), required=True)
@click.option("--truth", "truth_path", type=click.Path(exists=True),
              help="truth sidecar: enables the deterministic stub scorer")
@click.option("--scores", "scores_path", type=click.Path(exists=True),
              help="sidecar file with externally produced scores/tone")
@click.option("--labels", default="demand,wages,prices,labour,outlook", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def ingest(corpus_path, store_path, truth_path, scores_path, labels, seed):
    """Parse, enrich and index a JSONL corpus into a store directory."""
    from .classify import SidecarScoreProvider, StubScoreProvider
    from .pipeline import enrich_documents
    from .store import init_store

    label_list = tuple(x.strip() for x in labels.split(",") if x.strip())
    provider = None
    if scores_path:
        provider = SidecarScoreProvider.from_jsonl(scores_path, label_list)
    elif truth_path:
        provider = StubScoreProvider(read_truth_jsonl(truth_path), labels=label_list, seed=seed)
    try:
        docs = load_corpus(corpus_path)
        records = enrich_documents(docs, provider)
        store = init_store(store_path, records)
    except Exception as exc:  # surface package errors as exit status 1
        _fail(exc)
    snap = store.snapshot
    click.echo(f"indexed {snap.n_liaisons} liaisons / {len(snap)} paragraphs into {store_path}")


@main.group()
def embed():
    """Train or query word embeddings."""


@embed.command("train")
@click.option("--corpus", "store_path", type=click.Path(exists=True), required=True,
              help="store directory (tokenized paragraphs come from the snapshot)")
@click.option("--out", "model_path", type=click.Path(), required=True)
@click.option("--dim", type=int, default=100, show_default=True)
@click.option("--window", type=int, default=5, show_default=True)
@click.option("--negatives", type=int, default=5, show_default=True)
@click.option("--epochs", type=int, default=5, show_default=True)
@click.option("--min-count", type=int, default=5, show_default=True)
@click.option("--seed", type=int, default=1, show_default=True)
@click.option("--workers", type=int, default=1, show_default=True,
              help=">1 trades determinism for speed")
def embed_train(store_path, model_path, dim, window, negatives, epochs, min_count, seed, workers):
    from .embed import EmbedConfig, save_model, train_embeddings
    from .store import load_store

    snap = load_store(store_path).snapshot
    sentences = [list(snap.tokens(i)) for i in range(len(snap))]
    config = EmbedConfig(dim=dim, window=window, negatives=negatives, epochs=epochs,
                         min_count=min_count, seed=seed, workers=workers)
    try:
        model = train_embeddings(sentences, config)
    except Exception as exc:
        _fail(exc)
    save_model(model, model_path)
    click.echo(f"trained {len(model.vocabulary)}-token model -> {model_path}")


@embed.command("suggest")
@click.option("--model", "model_path", type=click.Path(exists=True), required=True)
@click.option("--terms", required=True, help="comma-separated seed terms")
@click.option("--k", type=int, default=10, show_default=True)
@click.option("--exclude", default="", help="comma-separated tokens to skip")
def embed_suggest(model_path, terms, k, exclude):
    from .embed import load_model, suggest_terms

    model = load_model(model_path)
    seeds = [t.strip() for t in terms.split(",") if t.strip()]
    skip = [t.strip() for t in exclude.split(",") if t.strip()]
    try:
        result = suggest_terms(model, seeds, k=k, exclude=skip)
    except Exception as exc:
        _fail(exc)
    for s in result.suggestions:
        click.echo(f"{s.token}\t{s.similarity:.4f}")
    if result.unknown_seeds:
        click.echo(f"# unknown seeds: {', '.join(result.unknown_seeds)}", err=True)


@main.command("synth-macro")
@click.option("--start", default="2006Q1", show_default=True)
@click.option("--quarters", type=int, required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", type=click.Path(), required=True)
def synth_macro(start, quarters, seed, out_path):
    """Generate a synthetic macro-inputs CSV (target + gap series)."""
    from .nowcast import synthetic_macro
    from .nowcast.panel import write_macro_csv
    from .periods import quarter_range

    macro = synthetic_macro(quarter_range(start, quarters), seed=seed)
    write_macro_csv(macro, out_path)
    click.echo(f"wrote macro CSV ({quarters} quarters) to {out_path}")


@main.command()
@click.option("--store", "store_path", type=click.Path(exists=True), required=True)
@click.option("--macro", "macro_path", type=click.Path(exists=True), required=True)
@click.option("--out", "csv_path", type=click.Path(), required=True)
@click.option("--schema-out", "schema_path", type=click.Path(), required=True)
@click.option("--truth", "truth_path", type=click.Path(exists=True),
              help="truth sidecar supplying the hand-collected wages benchmark")
@click.option("--threshold", type=float, default=0.9, show_default=True)
def panel(store_path, macro_path, csv_path, schema_path, truth_path, threshold):
    """Assemble the default nowcast feature panel from a store."""
    import numpy as np

    from .data import bundled_dictionary, bundled_lexicon
    from .nowcast import panel_from_snapshot, write_panel_csv
    from .nowcast.panel import read_macro_csv
    from .numex import LiaisonRateObs
    from .store import load_store

    snap = load_store(store_path).snapshot
    macro = read_macro_csv(macro_path)
    hand = None
    if truth_path:
        truth = read_truth_jsonl(truth_path)
        hand = []
        for rec in snap.records.values():
            planted = [
                truth[p.paragraph_id].planted_rate
                for p in rec.paragraphs
                if p.paragraph_id in truth
                and truth[p.paragraph_id].planted_rate is not None
                and "wages" in truth[p.paragraph_id].topics
            ]
            if planted:
                hand.append(LiaisonRateObs(rec.liaison_id, rec.meeting_date, float(np.mean(planted))))
    try:
        built = panel_from_snapshot(
            snap, macro,
            wages_dict=bundled_dictionary("wages"),
            labour_dict=bundled_dictionary("labour"),
            uncertainty_dict=bundled_dictionary("uncertainty"),
            lexicon=bundled_lexicon(),
            threshold=threshold,
            hand_rates=hand,
        )
        write_panel_csv(built, csv_path, schema_path)
    except Exception as exc:
        _fail(exc)
    click.echo(f"panel: {len(built.quarters)} quarters x {len(built.columns)} columns -> {csv_path}")


@main.group()
def nowcast():
    """Nowcasting backtests."""


@nowcast.command("run")
@click.option("--panel", "panel_path", type=click.Path(exists=True), required=True)
@click.option("--schema", "schema_path", type=click.Path(exists=True), required=True)
@click.option("--models", default="ols,ridge,lasso,elastic", show_default=True)
@click.option("--protocol", "protocol_path", type=click.Path(exists=True))
@click.option("--out", "out_path", type=click.Path(), help="write full JSON results here")
@click.option("--selection-csv", type=click.Path(), help="lasso selection-frequency CSV")
def nowcast_run(panel_path, schema_path, models, protocol_path, out_path, selection_csv):
    from .nowcast import Protocol, read_panel_csv, run_backtest, selection_frequency
    from .nowcast.backtest import selection_frequency_csv

    kinds = [m.strip() for m in models.split(",") if m.strip()]
    protocol = Protocol.from_json(protocol_path) if protocol_path else Protocol()
    try:
        built = read_panel_csv(panel_path, schema_path)
        results = run_backtest(built, kinds, protocol)
    except Exception as exc:
        _fail(exc)
    for name, res in results.items():
        ratio = "" if res.ratio_full is None else f"  ratio {res.ratio_full:.3f}"
        click.echo(f"{name:16s} rmse {res.rmse_full:.4f}  pre-covid {res.rmse_precovid:.4f}{ratio}")
    if out_path:
        payload = {name: res.to_dict() for name, res in results.items()}
        Path(out_path).write_text(json.dumps(payload, indent=2), encoding="utf-8")
        click.echo(f"full results -> {out_path}")
    if selection_csv:
        for name, res in results.items():
            if res.model.kind == "lasso":
                Path(selection_csv).write_text(
                    selection_frequency_csv(selection_frequency(res)), encoding="utf-8"
                )
                click.echo(f"selection frequency ({name}) -> {selection_csv}")
                break


@main.command()
@click.option("--store", "store_path", type=click.Path(exists=True), required=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8701, show_default=True)
@click.option("--model", "model_path", type=click.Path(exists=True))
@click.option("--truth", "truth_path", type=click.Path(exists=True))
@click.option("--scores", "scores_path", type=click.Path(exists=True))
@click.option("--dicts", "dicts_dir", type=click.Path())
@click.option("--token-file", type=click.Path(exists=True))
@click.option("--labels", default="demand,wages,prices,labour,outlook", show_default=True)
def serve(store_path, host, port, model_path, truth_path, scores_path, dicts_dir, token_file, labels):
    """Run the HTTP service."""
    from .service import ServiceConfig
    from .service import serve as run_service

    config = ServiceConfig(
        store_path=store_path,
        model_path=model_path,
        truth_path=truth_path,
        scores_path=scores_path,
        dictionaries_dir=dicts_dir,
        auth_token_file=token_file,
        labels=tuple(x.strip() for x in labels.split(",") if x.strip()),
    )
    click.echo(f"serving {store_path} on http://{host}:{port}")
    run_service(config, host=host, port=port)


# --- thin HTTP client -------------------------------------------------------------

def _client(url: str, token: str | None):
    import httpx

    headers = {"Authorization": f"Bearer {token}"} if token else {}
    return httpx.Client(base_url=url, headers=headers, timeout=60.0)


def _emit(response, fmt: str) -> None:
    if response.status_code >= 400:
        try:
            err = response.json().get("error", {})
            raise click.ClickException(f"{err.get('code')}: {err.get('message')}")
        except (ValueError, AttributeError):
            raise click.ClickException(f"HTTP {response.status_code}")
    if fmt == "csv":
        click.echo(response.text, nl=False)
    else:
        click.echo(json.dumps(response.json(), indent=2))


_url_option = click.option("--url", default="http://127.0.0.1:8701", show_default=True)
_token_option = click.option("--token", default=None, help="bearer token")


@main.command()
@_url_option
@_token_option
def health(url, token):
    with _client(url, token) as client:
        _emit(client.get("/health"), "json")


@main.command()
@_url_option
@_token_option
@click.option("--keywords", default=None, help='e.g. "ANY(cost, costs, expenses)"')
@click.option("--industries", default="", help="comma-separated code prefixes")
@click.option("--regions", default="")
@click.option("--date-range", default=None, help="YYYY-MM-DD:YYYY-MM-DD")
@click.option("--topic", default=None, help="topic:min_probability")
@click.option("--page-size", type=int, default=25, show_default=True)
@click.option("--cursor", default=None)
def search(url, token, keywords, industries, regions, date_range, topic, page_size, cursor):
    body: dict = {"filter": {}, "page_size": page_size}
    if cursor:
        body["cursor"] = cursor
    if keywords:
        body["filter"]["keywords"] = keywords
    if industries:
        body["filter"]["industries"] = [x.strip() for x in industries.split(",") if x.strip()]
    if regions:
        body["filter"]["regions"] = [x.strip() for x in regions.split(",") if x.strip()]
    if date_range:
        start, _, end = date_range.partition(":")
        body["filter"]["date_range"] = [start, end]
    if topic:
        name, _, min_p = topic.partition(":")
        body["filter"]["topics"] = [{"topic": name, "min_probability": float(min_p or 0.9)}]
    with _client(url, token) as client:
        _emit(client.post("/search", json=body), "json")


@main.group()
def series():
    """Aggregate series from the service; --format csv for raw CSV."""


def _series_cmd(path: str, params: dict, url: str, token: str | None, fmt: str) -> None:
    params = {k: v for k, v in params.items() if v is not None}
    params["format"] = fmt
    with _client(url, token) as client:
        _emit(client.get(path, params=params), fmt)


@series.command("term-frequency")
@_url_option
@_token_option
@click.option("--terms", required=True)
@click.option("--granularity", default="quarter", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
def series_tf(url, token, terms, granularity, fmt):
    _series_cmd("/series/term-frequency", {"terms": terms, "granularity": granularity}, url, token, fmt)


@series.command("topic-exposure")
@_url_option
@_token_option
@click.option("--topic", required=True)
@click.option("--method", default="scored", show_default=True)
@click.option("--weighting", default="per_liaison", show_default=True)
@click.option("--granularity", default="quarter", show_default=True)
@click.option("--standardized", is_flag=True)
@click.option("--dictionary", default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
def series_exposure(url, token, topic, method, weighting, granularity, standardized, dictionary, fmt):
    _series_cmd(
        "/series/topic-exposure",
        {"topic": topic, "method": method, "weighting": weighting,
         "granularity": granularity, "standardized": standardized, "dictionary": dictionary},
        url, token, fmt,
    )


@series.command("topic-tone")
@_url_option
@_token_option
@click.option("--topic", required=True)
@click.option("--method", default="scored", show_default=True)
@click.option("--weighting", default="per_liaison", show_default=True)
@click.option("--granularity", default="quarter", show_default=True)
@click.option("--standardized", is_flag=True)
@click.option("--dictionary", default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
def series_tone(url, token, topic, method, weighting, granularity, standardized, dictionary, fmt):
    _series_cmd(
        "/series/topic-tone",
        {"topic": topic, "method": method, "weighting": weighting,
         "granularity": granularity, "standardized": standardized, "dictionary": dictionary},
        url, token, fmt,
    )


@series.command("uncertainty")
@_url_option
@_token_option
@click.option("--granularity", default="month", show_default=True)
@click.option("--henderson", is_flag=True, help="apply the 13-term trend")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
def series_uncertainty(url, token, granularity, henderson, fmt):
    _series_cmd(
        "/series/uncertainty", {"granularity": granularity, "henderson": henderson}, url, token, fmt
    )


@series.command("extractions")
@_url_option
@_token_option
@click.option("--variable", required=True, type=click.Choice(["wages", "prices"]))
@click.option("--granularity", default="quarter", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
def series_extractions(url, token, variable, granularity, fmt):
    _series_cmd(f"/series/extractions/{variable}", {"granularity": granularity}, url, token, fmt)


@main.command()
@_url_option
@_token_option
@click.option("--terms", required=True, help="comma-separated seed terms")
@click.option("--k", type=int, default=10, show_default=True)
@click.option("--exclude", default="")
def suggest(url, token, terms, k, exclude):
    body = {
        "terms": [t.strip() for t in terms.split(",") if t.strip()],
        "k": k,
        "exclude": [t.strip() for t in exclude.split(",") if t.strip()],
    }
    with _client(url, token) as client:
        _emit(client.post("/topics/suggest", json=body), "json")


@main.group("dict")
def dict_group():
    """Read or replace named dictionaries on the service."""


@dict_group.command("get")
@_url_option
@_token_option
@click.option("--name", required=True)
def dict_get(url, token, name):
    with _client(url, token) as client:
        _emit(client.get(f"/dictionaries/{name}"), "json")


@dict_group.command("put")
@_url_option
@_token_option
@click.option("--name", required=True)
@click.option("--file", "file_path", type=click.Path(exists=True), required=True,
              help="dictionary text file, one term per line")
def dict_put(url, token, name, file_path):
    terms = []
    for line in Path(file_path).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            terms.append(line)
    with _client(url, token) as client:
        _emit(client.put(f"/dictionaries/{name}", json={"name": name, "terms": terms}), "json")


@main.command()
@_url_option
@_token_option
@click.option("--corpus", "corpus_path", type=click.Path(exists=True), required=True)
@click.option("--truth", "truth_path", type=click.Path(exists=True))
def refresh(url, token, corpus_path, truth_path):
    """Push a corpus delta to a running service (single atomic snapshot swap)."""
    docs = [obj for obj in _read_jsonl(corpus_path)]
    body = {"documents": docs}
    if truth_path:
        body["truth_path"] = str(Path(truth_path).resolve())
    with _client(url, token) as client:
        _emit(client.post("/admin/refresh", json=body), "json")


def _read_jsonl(path):
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                yield json.loads(line)


if __name__ == "__main__":
    main()
