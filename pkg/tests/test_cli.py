import json
import socket
import threading
import time

import pytest
from click.testing import CliRunner

from liaisonkit.cli import main


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    return tmp_path_factory.mktemp("cli")


@pytest.fixture(scope="module")
def built_store(workdir):
    """synth -> ingest pipeline via the CLI itself."""
    runner = CliRunner()
    config = workdir / "corpus.json"
    config.write_text(json.dumps({"firms": 6, "quarters": 24, "start": "2016Q1"}))
    corpus = workdir / "corpus.jsonl"
    res = runner.invoke(main, ["synth", "--config", str(config), "--seed", "3", "--out", str(corpus)])
    assert res.exit_code == 0, res.output
    store = workdir / "store"
    res = runner.invoke(main, [
        "ingest", "--corpus", str(corpus), "--out", str(store),
        "--truth", str(workdir / "corpus.jsonl.truth.jsonl"),
    ])
    assert res.exit_code == 0, res.output
    return store


class TestBatchCommands:
    def test_synth_deterministic(self, workdir):
        runner = CliRunner()
        a, b = workdir / "a.jsonl", workdir / "b.jsonl"
        for out in (a, b):
            res = runner.invoke(main, ["synth", "--seed", "5", "--out", str(out)])
            assert res.exit_code == 0, res.output
        assert a.read_bytes() == b.read_bytes()

    def test_ingest_output_mentions_counts(self, built_store):
        assert (built_store / "manifest.json").exists()

    def test_embed_train_and_suggest(self, workdir, built_store):
        runner = CliRunner()
        model = workdir / "model.bin"
        res = runner.invoke(main, [
            "embed", "train", "--corpus", str(built_store), "--out", str(model),
            "--dim", "24", "--epochs", "2", "--min-count", "3", "--seed", "2",
        ])
        assert res.exit_code == 0, res.output
        res = runner.invoke(main, [
            "embed", "suggest", "--model", str(model), "--terms", "labour,workers", "--k", "5",
        ])
        assert res.exit_code == 0, res.output
        lines = [l for l in res.output.splitlines() if l.strip()]
        assert len(lines) == 5

    def test_panel_and_nowcast_run(self, workdir, built_store):
        runner = CliRunner()
        macro = workdir / "macro.csv"
        res = runner.invoke(main, [
            "synth-macro", "--start", "2016Q1", "--quarters", "24", "--seed", "1",
            "--out", str(macro),
        ])
        assert res.exit_code == 0, res.output
        panel_csv, schema = workdir / "panel.csv", workdir / "schema.json"
        res = runner.invoke(main, [
            "panel", "--store", str(built_store), "--macro", str(macro),
            "--out", str(panel_csv), "--schema-out", str(schema),
            "--truth", str(workdir / "corpus.jsonl.truth.jsonl"),
        ])
        assert res.exit_code == 0, res.output
        protocol = workdir / "protocol.json"
        protocol.write_text(json.dumps({"pure_training": 12, "nowcasts": 8, "folds": 6}))
        out_json = workdir / "results.json"
        sel_csv = workdir / "selection.csv"
        res = runner.invoke(main, [
            "nowcast", "run", "--panel", str(panel_csv), "--schema", str(schema),
            "--models", "ols,lasso", "--protocol", str(protocol),
            "--out", str(out_json), "--selection-csv", str(sel_csv),
        ])
        assert res.exit_code == 0, res.output
        results = json.loads(out_json.read_text())
        assert len(results["lasso-all"]["records"]) == 8
        assert sel_csv.read_text().splitlines()[0] == "variable,count,percent"

    def test_bad_corpus_fails_cleanly(self, workdir):
        runner = CliRunner()
        bad = workdir / "bad.jsonl"
        bad.write_text('{"liaison_id": "L1"}\n')
        res = runner.invoke(main, ["ingest", "--corpus", str(bad), "--out", str(workdir / "s2")])
        assert res.exit_code != 0
        assert "Error" in res.output


@pytest.fixture(scope="module")
def live_server(built_store, workdir):
    import uvicorn

    from liaisonkit.service import ServiceConfig, create_app

    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        port = sock.getsockname()[1]
    config = ServiceConfig(
        store_path=str(built_store),
        truth_path=str(workdir / "corpus.jsonl.truth.jsonl"),
    )
    server = uvicorn.Server(uvicorn.Config(create_app(config), host="127.0.0.1",
                                           port=port, log_level="error"))
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.time() + 15
    import httpx

    url = f"http://127.0.0.1:{port}"
    while time.time() < deadline:
        try:
            if httpx.get(url + "/health", timeout=1.0).status_code == 200:
                break
        except Exception:
            time.sleep(0.05)
    else:
        raise RuntimeError("service did not start")
    yield url
    server.should_exit = True
    thread.join(timeout=5)


class TestClientCommands:
    def test_health(self, live_server):
        res = CliRunner().invoke(main, ["health", "--url", live_server])
        assert res.exit_code == 0, res.output
        assert json.loads(res.output)["payload"]["status"] == "ok"

    def test_search_with_filters(self, live_server):
        res = CliRunner().invoke(main, [
            "search", "--url", live_server,
            "--keywords", "ANY(wages, wage)", "--regions", "NSW,VIC", "--page-size", "10",
        ])
        assert res.exit_code == 0, res.output
        payload = json.loads(res.output)["payload"]
        assert payload["total"] >= 1

    def test_series_csv_format(self, live_server):
        res = CliRunner().invoke(main, [
            "series", "term-frequency", "--url", live_server,
            "--terms", "wages", "--format", "csv",
        ])
        assert res.exit_code == 0, res.output
        assert res.output.splitlines()[0] == "period,matched,total,share"

    def test_series_uncertainty_henderson(self, live_server):
        res = CliRunner().invoke(main, [
            "series", "uncertainty", "--url", live_server, "--granularity", "quarter",
            "--henderson", "--format", "json",
        ])
        assert res.exit_code == 0, res.output
        payload = json.loads(res.output)["payload"]
        assert payload["standardized"] is False

    def test_refresh_roundtrip(self, live_server, workdir):
        runner = CliRunner()
        delta_cfg = workdir / "delta.json"
        delta_cfg.write_text(json.dumps({"firms": 1, "quarters": 1, "start": "2030Q1"}))
        delta = workdir / "delta.jsonl"
        res = runner.invoke(main, ["synth", "--config", str(delta_cfg), "--seed", "77",
                                   "--out", str(delta)])
        assert res.exit_code == 0
        # renumber liaison ids so the delta cannot clash with the base corpus
        rows = [json.loads(l) for l in delta.read_text().splitlines() if l.strip()]
        truth_rows = [json.loads(l) for l in (workdir / "delta.jsonl.truth.jsonl").read_text().splitlines() if l.strip()]
        for row in rows:
            row["new_id"] = row["liaison_id"].replace("L", "L88")
        mapping = {r["liaison_id"]: r.pop("new_id") for r in rows}
        for row in rows:
            row["liaison_id"] = mapping[row["liaison_id"]]
        for row in truth_rows:
            old = row["paragraph_id"].split(":")[0]
            row["paragraph_id"] = row["paragraph_id"].replace(old, mapping[old])
        delta.write_text("\n".join(json.dumps(r) for r in rows) + "\n")
        (workdir / "delta.jsonl.truth.jsonl").write_text(
            "\n".join(json.dumps(r) for r in truth_rows) + "\n")
        res = runner.invoke(main, [
            "refresh", "--url", live_server, "--corpus", str(delta),
            "--truth", str(workdir / "delta.jsonl.truth.jsonl"),
        ])
        assert res.exit_code == 0, res.output
        payload = json.loads(res.output)["payload"]
        assert payload["liaisons_added"] == 1
        res = runner.invoke(main, [
            "search", "--url", live_server, "--date-range", "2030-01-01:2030-12-31",
        ])
        assert json.loads(res.output)["payload"]["total"] > 0

    def test_dict_get_put(self, live_server, workdir):
        runner = CliRunner()
        file = workdir / "mydict.txt"
        file.write_text("alpha\nbeta gamma\n# comment\n")
        res = runner.invoke(main, ["dict", "put", "--url", live_server,
                                   "--name", "custom", "--file", str(file)])
        assert res.exit_code == 0, res.output
        res = runner.invoke(main, ["dict", "get", "--url", live_server, "--name", "custom"])
        assert json.loads(res.output)["payload"]["terms"] == ["alpha", "beta gamma"]
