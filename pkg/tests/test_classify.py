import datetime as dt
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from liaisonkit.classify import (
    DEFAULT_TOPICS,
    SentimentLexicon,
    SidecarScoreProvider,
    StubScoreProvider,
    TopicDictionary,
    count_topic_snippets,
    dictionary_match_count,
    dictionary_tone,
    score_topics,
    threshold_filter,
)
from liaisonkit.errors import (
    MissingScoreError,
    UndefinedToneError,
    UnknownTopicError,
    ValidationError,
)
from liaisonkit.ingest.parser import Paragraph
from liaisonkit.ingest.synth import TruthRecord
from liaisonkit.text import sentence_spans

# Model output replicated from the worked classification example: a paragraph
# about a shift to individual contracts with unchanged base hourly rates.
EXAMPLE_SCORES = {
    "employment": 0.99,
    "investment or capex": 0.18,
    "demand": 0.51,
    "sales": 0.22,
    "property or housing": 0.36,
    "wages": 0.91,
    "prices": 0.89,
    "margins": 0.25,
    "costs": 0.81,
    "labour costs": 0.97,
    "non-labour costs": 0.68,
    "financing conditions": 0.45,
    "climate change": 0.08,
    "supply chains": 0.25,
}


def para(text: str, pid: str = "L1:p0000") -> Paragraph:
    from liaisonkit.text import tokenize

    return Paragraph(
        paragraph_id=pid,
        liaison_ref="L1",
        heading_context="",
        text=text,
        word_count=len(tokenize(text)),
        sentence_spans=tuple(sentence_spans(text)),
    )


class TestScoreProviders:
    def test_sidecar_replays_example_scores(self, tmp_path):
        path = tmp_path / "scores.jsonl"
        path.write_text(json.dumps({"paragraph_id": "L1:p0000", "scores": EXAMPLE_SCORES, "tone": 0.1}))
        provider = SidecarScoreProvider.from_jsonl(path, labels=DEFAULT_TOPICS)
        vec = score_topics(para("irrelevant"), provider)
        assert vec.scores["employment"] == pytest.approx(0.99)
        assert vec.scores["wages"] == pytest.approx(0.91)
        assert vec.scores["labour costs"] == pytest.approx(0.97)
        assert vec.scores["climate change"] == pytest.approx(0.08)
        assert set(vec.scores) == set(DEFAULT_TOPICS)

    def test_sidecar_missing_paragraph_raises(self, tmp_path):
        path = tmp_path / "scores.jsonl"
        path.write_text("")
        provider = SidecarScoreProvider.from_jsonl(path)
        with pytest.raises(MissingScoreError):
            provider.scores_for("L9:p0000")

    def test_stub_scores_truth_topics_high(self):
        truth = {"L1:p0000": TruthRecord("L1:p0000", ("wages",), None, 0.5)}
        provider = StubScoreProvider(truth, labels=("wages", "prices"), seed=1)
        scores = provider.scores_for("L1:p0000")
        assert abs(scores["wages"] - 0.95) <= 0.04
        assert abs(scores["prices"] - 0.05) <= 0.04

    def test_stub_deterministic(self):
        truth = {"L1:p0000": TruthRecord("L1:p0000", ("wages",), None, None)}
        a = StubScoreProvider(truth, labels=("wages", "prices"), seed=9).scores_for("L1:p0000")
        b = StubScoreProvider(truth, labels=("wages", "prices"), seed=9).scores_for("L1:p0000")
        assert a == b

    def test_stub_recovers_truth_at_half_threshold(self, small_corpus, small_records):
        _, _, truths = small_corpus
        truth = {t.paragraph_id: t for t in truths}
        for rec in small_records:
            for p in rec.paragraphs:
                scores = rec.enrichment_for(p.paragraph_id).topic_scores
                predicted = {label for label, s in scores.items() if s > 0.5}
                assert predicted == set(truth[p.paragraph_id].topics)


class TestThreshold:
    def test_above_threshold(self):
        vec = score_topics(para("x"), _fixed_provider())
        assert threshold_filter(vec, "wages", 0.9) is True

    def test_below_threshold(self):
        vec = score_topics(para("x"), _fixed_provider())
        assert threshold_filter(vec, "climate change", 0.9) is False

    def test_exact_threshold_is_false(self):
        vec = score_topics(para("x"), _fixed_provider())
        assert threshold_filter(vec, "wages", 0.91) is False

    def test_unknown_topic(self):
        vec = score_topics(para("x"), _fixed_provider())
        with pytest.raises(UnknownTopicError):
            threshold_filter(vec, "weather", 0.5)

    def test_degenerate_threshold_rejected(self):
        vec = score_topics(para("x"), _fixed_provider())
        with pytest.raises(ValidationError):
            threshold_filter(vec, "wages", 0.0)

    @given(st.floats(0.01, 0.98))
    def test_threshold_monotonicity(self, t1):
        vec = score_topics(para("x"), _fixed_provider())
        t2 = min(0.99, t1 + 0.01)
        passing = lambda t: {k for k in vec.scores if threshold_filter(vec, k, t)}
        assert passing(t2) <= passing(t1)

    def test_count_topic_snippets(self):
        vecs = [score_topics(para("x", f"L1:p{i:04d}"), _fixed_provider(f"L1:p{i:04d}")) for i in range(3)]
        assert count_topic_snippets(vecs, "wages", 0.9) == 3
        assert count_topic_snippets(vecs, "climate change", 0.9) == 0


def _fixed_provider(pid: str = "L1:p0000"):
    class P:
        labels = tuple(EXAMPLE_SCORES)

        def scores_for(self, paragraph_id):
            return dict(EXAMPLE_SCORES)

        def tone_for(self, paragraph_id):
            return 0.0

    return P()


class TestDictionary:
    def test_from_file_skips_comments(self, tmp_path):
        f = tmp_path / "wages.txt"
        f.write_text("# comment\nwages\nwage growth\n\n")
        d = TopicDictionary.from_file(f)
        assert d.terms == frozenset({"wages", "wage growth"})

    def test_empty_dictionary_rejected(self):
        with pytest.raises(ValidationError):
            TopicDictionary.from_terms("empty", [])

    def test_no_overlap_count(self):
        d = TopicDictionary.from_terms("d", ["margin"])
        assert dictionary_match_count(para("wages rose"), d) == 0

    def test_repetition_counted(self):
        d = TopicDictionary.from_terms("d", ["wages"])
        assert dictionary_match_count(para("wages and wages growth"), d) == 2

    def test_phrase_counted_once_per_occurrence(self):
        d = TopicDictionary.from_terms("d", ["wage growth"])
        assert dictionary_match_count(para("wage growth beats wage growth"), d) == 2

    def test_hand_counted_fixture(self):
        d = TopicDictionary.from_terms(
            "labour", ["labour", "workforce", "staff", "skills", "labour market"]
        )
        text = "The labour market stayed tight; staff turnover rose and skills were scarce."
        # labour market (phrase) + labour (token) + staff + skills = 4
        assert dictionary_match_count(para(text), d) == 4

    def test_additive_over_concatenation(self):
        d = TopicDictionary.from_terms("d", ["wages", "wage growth"])
        a = "Wages rose."
        b = "Strong wage growth continued."
        total = dictionary_match_count(para(a + " " + b), d)
        assert total == dictionary_match_count(para(a), d) + dictionary_match_count(para(b), d)


class TestTone:
    def lexicon(self, pos=("strong",), neg=("low",)):
        return SentimentLexicon(positive=frozenset(pos), negative=frozenset(neg))

    def test_no_sentiment_words(self):
        tone = dictionary_tone([para("nothing to see here")], self.lexicon())
        assert tone.value == 0.0

    def test_low_wage_growth_example(self):
        p = para("Annual wage growth has been very low")
        tone = dictionary_tone([p], self.lexicon())
        assert tone.value == pytest.approx(-1 / 7)

    def test_balanced_is_zero(self):
        p = para("strong demand but low margins")
        assert dictionary_tone([p], self.lexicon()).value == 0.0

    def test_antisymmetry_under_lexicon_swap(self):
        p = para("strong demand and strong orders but low margins")
        lex = self.lexicon()
        swapped = SentimentLexicon(positive=lex.negative, negative=lex.positive)
        assert dictionary_tone([p], lex).value == pytest.approx(-dictionary_tone([p], swapped).value)

    def test_overlapping_lexicon_rejected(self):
        with pytest.raises(ValidationError):
            SentimentLexicon(positive=frozenset({"x"}), negative=frozenset({"x"}))

    def test_zero_words_raises(self):
        p = Paragraph("L1:p0000", "L1", "", "...", 0, ())
        with pytest.raises(UndefinedToneError):
            dictionary_tone([p], self.lexicon())
