import datetime as dt
import json

import pytest

from liaisonkit.errors import ParseError, ValidationError
from liaisonkit.ingest import (
    BODY,
    HEADING,
    TABLE,
    UNKNOWN,
    Block,
    BlockCandidate,
    CorpusConfig,
    blocks_to_body,
    build_paragraphs,
    classify_blocks,
    generate_synthetic_corpus,
    parse_document,
    scan_body,
    write_documents_jsonl,
)
from liaisonkit.ingest.parser import RawDocument, document_from_dict, load_corpus
from liaisonkit.numex import liaison_rate


def doc_with(body: str) -> RawDocument:
    return RawDocument(
        liaison_id="L000001",
        meeting_date=dt.date(2020, 5, 12),
        firm_id="F0001",
        industry_code="4100",
        region="NSW",
        headcount_bucket="medium",
        staff_scores={"wages": 2},
        body=body,
    )


class TestParseDocument:
    def test_empty_body(self):
        assert parse_document(doc_with("")) == []

    def test_heading_then_prose(self):
        blocks = parse_document(doc_with("## Wages\nWages rose strongly.\n"))
        assert [(b.kind, b.text) for b in blocks] == [
            (HEADING, "Wages"),
            (BODY, "Wages rose strongly."),
        ]

    def test_table_rows_form_one_block(self):
        blocks = parse_document(doc_with("| a | b |\n| 1 | 2 |\n"))
        assert len(blocks) == 1
        assert blocks[0].kind == TABLE
        assert blocks[0].text == "| a | b |\n| 1 | 2 |"

    def test_bullets_are_separate_bodies(self):
        blocks = parse_document(doc_with("- first point\n- second point\n"))
        assert [b.kind for b in blocks] == [BODY, BODY]

    def test_blank_line_separates_paragraphs(self):
        blocks = parse_document(doc_with("para one line a\nline b\n\npara two\n"))
        assert [b.text for b in blocks] == ["para one line a line b", "para two"]

    def test_malformed_marker_reports_line(self):
        with pytest.raises(ParseError) as err:
            parse_document(doc_with("fine\n\n##Broken\n"))
        assert err.value.line == 3

    def test_orders_strictly_increasing(self):
        blocks = parse_document(doc_with("## H\nbody\n\n- b1\n\n| t |\n"))
        assert [b.order for b in blocks] == list(range(len(blocks)))

    def test_round_trip_preserves_texts(self):
        body = "## Wages\n\nWages rose strongly.\n\n- bullet point\n\n| a | b |\n"
        blocks = parse_document(doc_with(body))
        again = parse_document(doc_with(blocks_to_body(blocks)))
        assert [b.text for b in again] == [b.text for b in blocks]


class TestClassifyBlocks:
    def test_marker_forces_kind(self):
        cands = [BlockCandidate("Anything At All", "heading", 0), BlockCandidate("| x |", "table", 1)]
        assert [b.kind for b in classify_blocks(cands)] == [HEADING, TABLE]

    def test_short_caps_line_is_heading_unless_period(self):
        no_period = BlockCandidate("WAGES OUTLOOK", "none", 0)
        with_period = BlockCandidate("WAGES OUTLOOK.", "none", 1)
        kinds = [b.kind for b in classify_blocks([no_period, with_period])]
        assert kinds == [HEADING, BODY]

    def test_symbol_only_line_is_unknown(self):
        assert classify_blocks([BlockCandidate("* * *", "none", 0)])[0].kind == UNKNOWN

    def test_deterministic_and_total(self):
        cands = [
            BlockCandidate(text, marker, i)
            for i, (text, marker) in enumerate(
                [("Title Case Line", "none"), ("a long sentence that runs on and on without end", "none"),
                 ("x", "bullet"), ("| t |", "table"), ("H", "heading")]
            )
        ]
        first = [b.kind for b in classify_blocks(cands)]
        second = [b.kind for b in classify_blocks(cands)]
        assert first == second
        assert all(k in {HEADING, BODY, TABLE, UNKNOWN} for k in first)


class TestBuildParagraphs:
    def test_no_body_blocks(self):
        doc = doc_with("## Only A Heading\n")
        assert build_paragraphs(doc, parse_document(doc)) == []

    def test_heading_context_carries_forward(self):
        doc = doc_with("## Wages\nfirst para.\n\nsecond para.\n")
        paras = build_paragraphs(doc, parse_document(doc))
        assert [p.heading_context for p in paras] == ["Wages", "Wages"]

    def test_sentence_spans_count(self):
        doc = doc_with("Wages rose. Prices fell.\n")
        (para,) = build_paragraphs(doc, parse_document(doc))
        assert len(para.sentence_spans) == 2

    def test_paragraph_count_equals_body_count(self, small_corpus):
        _, docs, _ = small_corpus
        for doc in docs:
            blocks = parse_document(doc)
            paras = build_paragraphs(doc, blocks)
            assert len(paras) == sum(1 for b in blocks if b.kind == BODY)

    def test_word_count_matches_tokenizer(self):
        doc = doc_with("Wages rose 4-5 per cent.\n")
        (para,) = build_paragraphs(doc, parse_document(doc))
        assert para.word_count == 4  # wages / rose / 4-5 / percent


class TestSyntheticCorpus:
    def test_minimal_config(self):
        docs, truths = generate_synthetic_corpus(CorpusConfig(firms=1, quarters=1), seed=0)
        assert len(docs) == 1
        assert truths, "truth sidecar must not be empty"

    def test_equal_seeds_byte_identical(self, tmp_path):
        cfg = CorpusConfig(firms=3, quarters=2)
        out_a = tmp_path / "a.jsonl"
        out_b = tmp_path / "b.jsonl"
        for out in (out_a, out_b):
            docs, _ = generate_synthetic_corpus(cfg, seed=42)
            write_documents_jsonl(docs, out)
        assert out_a.read_bytes() == out_b.read_bytes()

    def test_different_seeds_differ(self):
        cfg = CorpusConfig(firms=3, quarters=2)
        a, _ = generate_synthetic_corpus(cfg, seed=1)
        b, _ = generate_synthetic_corpus(cfg, seed=2)
        assert any(x.body != y.body for x, y in zip(a, b))

    def test_invalid_config_rejected(self):
        with pytest.raises(ValidationError):
            generate_synthetic_corpus(CorpusConfig(firms=0), seed=0)
        with pytest.raises(ValidationError):
            generate_synthetic_corpus(CorpusConfig(quarters=0), seed=0)

    def test_truth_ids_match_parsed_paragraphs(self, small_corpus):
        _, docs, truths = small_corpus
        truth_ids = {t.paragraph_id for t in truths}
        parsed_ids = set()
        for doc in docs:
            for para in build_paragraphs(doc, parse_document(doc)):
                parsed_ids.add(para.paragraph_id)
        assert truth_ids == parsed_ids

    def test_planted_rates_recovered_by_extractor(self):
        cfg = CorpusConfig(firms=12, quarters=4)
        docs, truths = generate_synthetic_corpus(cfg, seed=5)
        truth = {t.paragraph_id: t for t in truths}
        checked = matched = 0
        for doc in docs:
            paras = build_paragraphs(doc, parse_document(doc))
            for para in paras:
                planted = truth[para.paragraph_id].planted_rate
                if planted is None:
                    continue
                topic = truth[para.paragraph_id].topics[0]
                got = liaison_rate([para], topic)
                checked += 1
                if got is not None and abs(got - planted) < 1e-9:
                    matched += 1
        assert checked > 20
        assert matched / checked >= 0.95


class TestCorpusIO:
    def test_staff_score_out_of_range_rejected(self):
        obj = {
            "liaison_id": "L1", "meeting_date": "2020-01-01", "firm_id": "F1",
            "industry_code": "4100", "region": "NSW", "headcount_bucket": "small",
            "staff_scores": {"wages": 7}, "body": "",
        }
        with pytest.raises(ValidationError):
            document_from_dict(obj)

    def test_duplicate_liaison_id_rejected(self, tmp_path):
        docs, _ = generate_synthetic_corpus(CorpusConfig(firms=1, quarters=1), seed=0)
        path = tmp_path / "c.jsonl"
        write_documents_jsonl(docs + docs, path)
        with pytest.raises(ValidationError):
            load_corpus(path)
