"""Tokenizer and sentence splitter shared by the whole pipeline.

Normalisation rules (fixed; exposure denominators and rate parsing depend on
stable counts):

* lowercase
* tokens are maximal runs of Unicode alphanumerics, keeping intra-word
  hyphens ("4-5", "co-ordinated" stay single tokens)
* the bigram "per cent" collapses to the single token "percent"
"""

from __future__ import annotations

import re
from typing import NamedTuple

_TOKEN_RE = re.compile(r"[^\W_]+(?:-[^\W_]+)*")

# Sentence boundary: terminal punctuation, whitespace, then an upper-case
# letter or digit (optionally after an opening quote/bracket).
_BOUNDARY_RE = re.compile(r"[.!?]+(?=\s+[\"'(\[]?[A-Z0-9])")

# Abbreviations that should not end a sentence; dots stripped for lookup.
_ABBREVIATIONS = {
    "mr", "mrs", "ms", "dr", "prof", "st", "no", "vs", "etc",
    "eg", "ie", "approx", "pty", "ltd", "inc", "co", "dept",
}


class TokenSpan(NamedTuple):
    token: str
    start: int
    end: int


def tokenize_with_spans(text: str) -> list[TokenSpan]:
    """Lowercased tokens with character spans, "per cent" merged."""
    raw = [TokenSpan(m.group().lower(), m.start(), m.end()) for m in _TOKEN_RE.finditer(text)]
    out: list[TokenSpan] = []
    i = 0
    while i < len(raw):
        if i + 1 < len(raw) and raw[i].token == "per" and raw[i + 1].token == "cent":
            out.append(TokenSpan("percent", raw[i].start, raw[i + 1].end))
            i += 2
        else:
            out.append(raw[i])
            i += 1
    return out


def tokenize(text: str) -> list[str]:
    return [t.token for t in tokenize_with_spans(text)]


def word_count(text: str) -> int:
    return len(tokenize_with_spans(text))


def _tail_word(text: str, punct_start: int) -> str:
    """Word immediately preceding a candidate boundary, dots removed."""
    j = punct_start
    while j > 0 and not text[j - 1].isspace():
        j -= 1
    return text[j:punct_start].replace(".", "").lower()


def sentence_spans(text: str) -> list[tuple[int, int]]:
    """Non-overlapping ordered spans covering all non-whitespace text.

    Splits after ``. ! ?`` followed by whitespace and a capital/digit unless
    the preceding word is a known abbreviation.  A bullet or fragment with no
    terminal punctuation is a single sentence.
    """
    spans: list[tuple[int, int]] = []
    start = 0
    for m in _BOUNDARY_RE.finditer(text):
        if _tail_word(text, m.start()) in _ABBREVIATIONS:
            continue
        end = m.end()
        span = _trim(text, start, end)
        if span is not None:
            spans.append(span)
        start = end
    last = _trim(text, start, len(text))
    if last is not None:
        spans.append(last)
    return spans


def _trim(text: str, start: int, end: int) -> tuple[int, int] | None:
    while start < end and text[start].isspace():
        start += 1
    while end > start and text[end - 1].isspace():
        end -= 1
    if start >= end:
        return None
    return (start, end)


def sentences(text: str) -> list[str]:
    return [text[a:b] for a, b in sentence_spans(text)]
