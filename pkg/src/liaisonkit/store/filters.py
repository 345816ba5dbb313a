"""Query filters: metadata facets plus a small boolean keyword language.

Keyword clauses compose ANY/ALL over terms; a term may be a multi-word
phrase, matched as a contiguous token sequence after normalization.  Clauses
can be built from JSON (``{"any": [...]}``) or parsed from the compact text
form ``ANY(cost, costs, "input costs")``.
"""

from __future__ import annotations

import datetime as dt
import re
from dataclasses import dataclass, field
from typing import Sequence, Union

from ..errors import FilterExpressionError, ValidationError
from ..text import tokenize

Clause = Union["Term", "AnyOf", "AllOf"]


@dataclass(frozen=True)
class Term:
    phrase: tuple[str, ...]  # normalized tokens, length >= 1

    @classmethod
    def of(cls, text: str) -> "Term":
        tokens = tuple(tokenize(text))
        if not tokens:
            raise FilterExpressionError(f"term {text!r} has no tokens")
        return cls(tokens)


@dataclass(frozen=True)
class AnyOf:
    items: tuple[Clause, ...]


@dataclass(frozen=True)
class AllOf:
    items: tuple[Clause, ...]


def clause_from_json(obj) -> Clause:
    if isinstance(obj, str):
        return Term.of(obj)
    if isinstance(obj, dict):
        if set(obj) == {"any"}:
            items = obj["any"]
        elif set(obj) == {"all"}:
            items = obj["all"]
        else:
            raise FilterExpressionError(f"clause object must have exactly one of 'any'/'all': {obj!r}")
        if not isinstance(items, list) or not items:
            raise FilterExpressionError("clause list must be non-empty")
        parsed = tuple(clause_from_json(x) for x in items)
        return AnyOf(parsed) if "any" in obj else AllOf(parsed)
    raise FilterExpressionError(f"bad clause node: {obj!r}")


def clause_to_json(clause: Clause):
    if isinstance(clause, Term):
        return " ".join(clause.phrase)
    key = "any" if isinstance(clause, AnyOf) else "all"
    return {key: [clause_to_json(c) for c in clause.items]}


_LEX_RE = re.compile(r'\s*(ANY|ALL|\(|\)|,|"[^"]*"|[^\s(),"]+)', re.IGNORECASE)


def parse_keyword_expression(text: str) -> Clause:
    """Parse the compact form, e.g. ``ANY(cost, costs, ALL(input, costs))``."""
    tokens: list[str] = []
    pos = 0
    while pos < len(text):
        m = _LEX_RE.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise FilterExpressionError(f"unexpected character at {pos}: {text[pos:pos+10]!r}")
            break
        tokens.append(m.group(1))
        pos = m.end()
    if not tokens:
        raise FilterExpressionError("empty keyword expression")

    idx = 0

    def peek() -> str | None:
        return tokens[idx] if idx < len(tokens) else None

    def take() -> str:
        nonlocal idx
        if idx >= len(tokens):
            raise FilterExpressionError("unexpected end of expression")
        idx += 1
        return tokens[idx - 1]

    def parse_node() -> Clause:
        tok = take()
        upper = tok.upper()
        if upper in ("ANY", "ALL"):
            if take() != "(":
                raise FilterExpressionError(f"expected '(' after {upper}")
            items = [parse_node()]
            while peek() == ",":
                take()
                items.append(parse_node())
            if take() != ")":
                raise FilterExpressionError(f"expected ')' closing {upper}(...)")
            return AnyOf(tuple(items)) if upper == "ANY" else AllOf(tuple(items))
        if tok in ("(", ")", ","):
            raise FilterExpressionError(f"unexpected {tok!r}")
        if tok.startswith('"') and tok.endswith('"'):
            tok = tok[1:-1]
        return Term.of(tok)

    node = parse_node()
    if idx != len(tokens):
        raise FilterExpressionError(f"trailing tokens after expression: {tokens[idx:]}")
    return node


@dataclass(frozen=True)
class Filter:
    """Conjunction of optional facets; an empty filter matches everything."""

    date_range: tuple[dt.date, dt.date] | None = None
    industries: frozenset[str] = frozenset()  # industry-code prefixes
    regions: frozenset[str] = frozenset()
    keyword_clause: Clause | None = None
    topic_clause: tuple[tuple[str, float], ...] = ()  # (topic, min probability)
    staff_score_clause: tuple[tuple[str, float, float], ...] = ()  # (name, min, max)

    def __post_init__(self):
        if self.date_range is not None and self.date_range[0] > self.date_range[1]:
            raise ValidationError("date_range start after end")

    @classmethod
    def create(
        cls,
        date_range: tuple[dt.date | str, dt.date | str] | None = None,
        industries: Sequence[str] = (),
        regions: Sequence[str] = (),
        keywords: str | dict | Clause | None = None,
        topics: Sequence[tuple[str, float]] = (),
        staff_scores: Sequence[tuple[str, float, float]] = (),
    ) -> "Filter":
        if date_range is not None:
            start, end = date_range
            if isinstance(start, str):
                start = dt.date.fromisoformat(start)
            if isinstance(end, str):
                end = dt.date.fromisoformat(end)
            date_range = (start, end)
        clause: Clause | None
        if keywords is None or isinstance(keywords, (Term, AnyOf, AllOf)):
            clause = keywords
        elif isinstance(keywords, str):
            clause = parse_keyword_expression(keywords)
        else:
            clause = clause_from_json(keywords)
        return cls(
            date_range=date_range,
            industries=frozenset(industries),
            regions=frozenset(regions),
            keyword_clause=clause,
            topic_clause=tuple((t, float(p)) for t, p in topics),
            staff_score_clause=tuple((n, float(a), float(b)) for n, a, b in staff_scores),
        )


def clause_matches_tokens(clause: Clause, tokens: Sequence[str]) -> bool:
    """Reference predicate for a keyword clause over a token list."""
    if isinstance(clause, Term):
        k = len(clause.phrase)
        if k == 1:
            return clause.phrase[0] in tokens
        return any(tuple(tokens[i : i + k]) == clause.phrase for i in range(len(tokens) - k + 1))
    if isinstance(clause, AnyOf):
        return any(clause_matches_tokens(c, tokens) for c in clause.items)
    return all(clause_matches_tokens(c, tokens) for c in clause.items)
