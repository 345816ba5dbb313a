"""Paragraph-level indexed store with snapshot isolation.

One mutable `ParagraphStore` owns the liaison records; every commit builds an
immutable `Snapshot` (inverted index over normalized tokens plus columnar
metadata arrays) and swaps it in atomically.  Readers grab the current
snapshot once per query and never observe partial upserts.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np

from ..errors import IntegrityError, StoreError
from ..ingest.parser import Paragraph
from ..periods import GRANULARITIES, period_key
from ..records import LiaisonRecord
from ..text import tokenize
from .filters import AllOf, AnyOf, Clause, Filter, Term


@dataclass(frozen=True)
class TermFrequencyPoint:
    period: str
    matched_tokens: int
    total_tokens: int

    @property
    def share(self) -> float:
        return self.matched_tokens / self.total_tokens


@dataclass(frozen=True)
class QueryPage:
    items: list[tuple[LiaisonRecord, Paragraph]]
    total: int
    next_cursor: str | None


class Snapshot:
    """Immutable index over one committed state of the corpus."""

    def __init__(self, version: int, records: dict[str, LiaisonRecord]):
        self.version = version
        self.records = records
        entries = []
        for rec in records.values():
            for order, para in enumerate(rec.paragraphs):
                entries.append((rec.meeting_date, rec.liaison_id, order, rec, para))
        entries.sort(key=lambda e: (e[0], e[1], e[2]))
        self._entries = [(rec, para) for _, _, _, rec, para in entries]
        n = len(self._entries)

        self._dates = np.array([rec.meeting_date.toordinal() for rec, _ in self._entries], dtype=np.int64)
        self._industry: dict[str, list[int]] = {}
        self._region: dict[str, list[int]] = {}
        postings: dict[str, dict[int, int]] = {}
        token_totals = np.zeros(n, dtype=np.int64)
        self._tokens_cache: list[tuple[str, ...]] = []
        topic_scores: dict[str, np.ndarray] = {}
        staff: dict[str, np.ndarray] = {}

        for pid_int, (rec, para) in enumerate(self._entries):
            self._industry.setdefault(rec.industry_code, []).append(pid_int)
            self._region.setdefault(rec.region, []).append(pid_int)
            toks = tuple(tokenize(para.text))
            self._tokens_cache.append(toks)
            token_totals[pid_int] = len(toks)
            for tok in toks:
                bucket = postings.setdefault(tok, {})
                bucket[pid_int] = bucket.get(pid_int, 0) + 1
            enr = rec.enrichment_for(para.paragraph_id)
            for label, score in enr.topic_scores.items():
                arr = topic_scores.get(label)
                if arr is None:
                    arr = np.full(n, np.nan, dtype=np.float32)
                    topic_scores[label] = arr
                arr[pid_int] = score
            for name, score in rec.staff_scores.items():
                arr = staff.get(name)
                if arr is None:
                    arr = np.full(n, np.nan, dtype=np.float32)
                    staff[name] = arr
                arr[pid_int] = score

        self._token_totals = token_totals
        self._postings = {
            tok: (
                np.fromiter(bucket.keys(), dtype=np.int64, count=len(bucket)),
                np.fromiter(bucket.values(), dtype=np.int64, count=len(bucket)),
            )
            for tok, bucket in postings.items()
        }
        self._industry_arr = {k: np.array(v, dtype=np.int64) for k, v in self._industry.items()}
        self._region_arr = {k: np.array(v, dtype=np.int64) for k, v in self._region.items()}
        self._topic_scores = topic_scores
        self._staff = staff
        self._pid_by_id = {para.paragraph_id: i for i, (_, para) in enumerate(self._entries)}

    # -- low-level access ------------------------------------------------

    def __len__(self) -> int:
        return len(self._entries)

    @property
    def n_liaisons(self) -> int:
        return len(self.records)

    def entry(self, pid_int: int) -> tuple[LiaisonRecord, Paragraph]:
        return self._entries[pid_int]

    def tokens(self, pid_int: int) -> tuple[str, ...]:
        return self._tokens_cache[pid_int]

    # -- clause evaluation -------------------------------------------------

    def _term_candidates(self, term: Term) -> np.ndarray:
        arrays = []
        for tok in term.phrase:
            posting = self._postings.get(tok)
            if posting is None:
                return np.empty(0, dtype=np.int64)
            arrays.append(posting[0])
        cands = arrays[0]
        for arr in arrays[1:]:
            cands = np.intersect1d(cands, arr, assume_unique=False)
        if len(term.phrase) == 1:
            return cands
        k = len(term.phrase)
        phrase = term.phrase
        keep = [
            pid for pid in cands
            if any(self._tokens_cache[pid][i : i + k] == phrase
                   for i in range(len(self._tokens_cache[pid]) - k + 1))
        ]
        return np.array(keep, dtype=np.int64)

    def _eval_clause(self, clause: Clause) -> np.ndarray:
        if isinstance(clause, Term):
            return self._term_candidates(clause)
        parts = [self._eval_clause(c) for c in clause.items]
        if isinstance(clause, AnyOf):
            out = parts[0]
            for p in parts[1:]:
                out = np.union1d(out, p)
            return out
        out = parts[0]
        for p in parts[1:]:
            out = np.intersect1d(out, p)
        return out

    # -- queries -----------------------------------------------------------

    def query_ids(self, flt: Filter) -> np.ndarray:
        """Sorted paragraph ints satisfying every present clause."""
        n = len(self._entries)
        if flt.keyword_clause is not None:
            cands = np.sort(self._eval_clause(flt.keyword_clause))
        else:
            cands = np.arange(n, dtype=np.int64)
        if cands.size and flt.regions:
            allowed = [self._region_arr[r] for r in flt.regions if r in self._region_arr]
            region_ids = np.sort(np.concatenate(allowed)) if allowed else np.empty(0, dtype=np.int64)
            cands = cands[np.isin(cands, region_ids, assume_unique=False)]
        if cands.size and flt.industries:
            allowed = [
                arr for code, arr in self._industry_arr.items()
                if any(code.startswith(pref) for pref in flt.industries)
            ]
            ind_ids = np.sort(np.concatenate(allowed)) if allowed else np.empty(0, dtype=np.int64)
            cands = cands[np.isin(cands, ind_ids, assume_unique=False)]
        if cands.size and flt.date_range is not None:
            lo, hi = flt.date_range[0].toordinal(), flt.date_range[1].toordinal()
            d = self._dates[cands]
            cands = cands[(d >= lo) & (d <= hi)]
        for topic, min_p in flt.topic_clause:
            if not cands.size:
                break
            arr = self._topic_scores.get(topic)
            if arr is None:
                return np.empty(0, dtype=np.int64)
            scores = arr[cands]
            cands = cands[np.nan_to_num(scores, nan=-1.0) > min_p]
        for name, lo, hi in flt.staff_score_clause:
            if not cands.size:
                break
            arr = self._staff.get(name)
            if arr is None:
                return np.empty(0, dtype=np.int64)
            vals = arr[cands]
            mask = ~np.isnan(vals) & (vals >= lo) & (vals <= hi)
            cands = cands[mask]
        return cands

    def query_paragraphs(
        self, flt: Filter, cursor: str | None = None, page_size: int = 50
    ) -> QueryPage:
        """Page of matches ordered by (meeting_date, liaison_id, order)."""
        ids = self.query_ids(flt)
        offset = 0
        if cursor is not None:
            try:
                ver, off = cursor.split(":")
                offset = int(off)
            except ValueError:
                raise StoreError(f"bad cursor {cursor!r}") from None
            if int(ver) != self.version:
                raise StoreError("stale cursor: snapshot has changed")
        chunk = ids[offset : offset + page_size]
        items = [self._entries[i] for i in chunk]
        next_off = offset + page_size
        next_cursor = f"{self.version}:{next_off}" if next_off < ids.size else None
        return QueryPage(items=items, total=int(ids.size), next_cursor=next_cursor)

    def term_frequency_series(
        self, terms: list[str], granularity: str = "quarter"
    ) -> list[TermFrequencyPoint]:
        """Occurrences of any listed term per period, over total tokens."""
        if not terms:
            raise StoreError("term_frequency_series needs at least one term")
        if granularity not in GRANULARITIES:
            raise StoreError(f"unknown granularity {granularity!r}")
        n = len(self._entries)
        matched = np.zeros(n, dtype=np.int64)
        for raw in terms:
            term = Term.of(raw)
            if len(term.phrase) == 1:
                posting = self._postings.get(term.phrase[0])
                if posting is not None:
                    matched[posting[0]] += posting[1]
            else:
                k = len(term.phrase)
                for pid in self._term_candidates(term):
                    toks = self._tokens_cache[pid]
                    matched[pid] += sum(
                        1 for i in range(len(toks) - k + 1) if toks[i : i + k] == term.phrase
                    )
        by_period: dict[str, list[int]] = {}
        for pid, (rec, _) in enumerate(self._entries):
            by_period.setdefault(period_key(rec.meeting_date, granularity), []).append(pid)
        points = []
        for period in sorted(by_period):
            pids = np.array(by_period[period], dtype=np.int64)
            total = int(self._token_totals[pids].sum())
            if total == 0:
                continue
            points.append(
                TermFrequencyPoint(
                    period=period,
                    matched_tokens=int(matched[pids].sum()),
                    total_tokens=total,
                )
            )
        return points

    def liaisons_by_period(self, granularity: str = "quarter") -> dict[str, list[LiaisonRecord]]:
        out: dict[str, list[LiaisonRecord]] = {}
        for rec in sorted(self.records.values(), key=lambda r: (r.meeting_date, r.liaison_id)):
            out.setdefault(period_key(rec.meeting_date, granularity), []).append(rec)
        return out


class ParagraphStore:
    """Single-writer store; readers use the immutable current snapshot."""

    def __init__(self, records: dict[str, LiaisonRecord] | None = None, version: int = 1):
        self._lock = threading.Lock()
        self._records: dict[str, LiaisonRecord] = dict(records or {})
        self._snapshot = Snapshot(version, dict(self._records))

    @property
    def snapshot(self) -> Snapshot:
        return self._snapshot

    def upsert_liaison(self, record: LiaisonRecord) -> int:
        return self.upsert_many([record])

    def upsert_many(self, records: list[LiaisonRecord]) -> int:
        """Validate and commit a batch atomically; returns the commit token."""
        with self._lock:
            staged = dict(self._records)
            seen_batch: set[str] = set()
            changed = False
            for rec in records:
                rec.validate()
                if rec.liaison_id in seen_batch:
                    raise IntegrityError(f"duplicate liaison {rec.liaison_id} in batch")
                seen_batch.add(rec.liaison_id)
                for para in rec.paragraphs:
                    if not para.paragraph_id.startswith(rec.liaison_id + ":"):
                        raise IntegrityError(
                            f"paragraph {para.paragraph_id} not namespaced by liaison {rec.liaison_id}"
                        )
                if staged.get(rec.liaison_id) != rec:
                    changed = True
                staged[rec.liaison_id] = rec
            if not changed:
                return self._snapshot.version
            new = Snapshot(self._snapshot.version + 1, staged)
            self._records = staged
            self._snapshot = new
            return new.version


def term_frequency_csv(points: list[TermFrequencyPoint]) -> str:
    lines = ["period,matched,total,share"]
    for p in points:
        lines.append(f"{p.period},{p.matched_tokens},{p.total_tokens},{p.share:.8g}")
    return "\n".join(lines) + "\n"
