"""CrossRef-style retrieval: logical AND across subquery fields and a hard
+/- window around the news date.

Ranking among the surviving candidates is the unweighted sum of per-field
BM25 scores with default k1 and b, so only the set semantics and the date
window differ from the main engine.
"""

import datetime as dt
import logging
from dataclasses import dataclass, field as dc_field
from typing import List, Mapping, Optional, Set, Tuple

from .Config import DEFAULT_B, DEFAULT_K1, KIND_FIELDS, KINDS
from .Errors import EmptyQueryError
from .Index import Index, TokenStream
from .Ranking import Query, RankedHit, SearchStats, bm25_score

logger = logging.getLogger(__name__)

DEFAULT_WINDOW_DAYS = 45


@dataclass(frozen=True)
class AndQuery:
    subqueries: Mapping[str, TokenStream] = dc_field(default_factory=dict)
    news_date: Optional[dt.date] = None
    window_days: int = DEFAULT_WINDOW_DAYS

    def __post_init__(self) -> None:
        if self.window_days <= 0:
            raise ValueError("window_days must be positive")

    @classmethod
    def from_query(cls, query: Query, window_days: int = DEFAULT_WINDOW_DAYS) -> "AndQuery":
        return cls(dict(query.subqueries), query.news_date, window_days)

    def tokens(self, kind: str) -> TokenStream:
        return self.subqueries.get(kind) or TokenStream()

    def active_kinds(self) -> List[str]:
        return [kind for kind in KINDS if self.tokens(kind)]


def _in_window(index: Index, paper_id: str, query: AndQuery) -> bool:
    # without a news date there is nothing to window against
    if query.news_date is None:
        return True
    return abs((index.earliest_date(paper_id) - query.news_date).days) <= query.window_days


def and_candidates(index: Index, query: AndQuery, stats: Optional[SearchStats] = None) -> Set[str]:
    """Documents matching every nonempty subquery (token granularity) inside the window."""
    kinds = query.active_kinds()
    if not kinds:
        raise EmptyQueryError("all subqueries are empty")
    candidates: Optional[Set[str]] = None
    for kind in kinds:
        field = KIND_FIELDS[kind]
        matched: Set[str] = set()
        for token in query.tokens(kind):
            plist = index.term_postings(field, token)
            if stats is not None:
                stats.postings_scanned += len(plist)
            matched.update(plist)
        candidates = matched if candidates is None else candidates & matched
        if not candidates:
            return set()
    return {pid for pid in candidates if _in_window(index, pid, query)}


def and_search_with_stats(index: Index, query: AndQuery, k: int) -> Tuple[List[RankedHit], SearchStats]:
    if k < 1:
        raise ValueError("k must be positive")
    stats = SearchStats()
    candidates = and_candidates(index, query, stats)
    stats.candidates = len(candidates)
    rows = []
    for pid in candidates:
        scores = {kind: 0.0 for kind in KINDS}
        for kind in query.active_kinds():
            scores[kind] = bm25_score(index, KIND_FIELDS[kind], query.tokens(kind), pid, DEFAULT_K1, DEFAULT_B)
        total = 0.0
        for kind in KINDS:
            total += scores[kind]
        rows.append((total, pid, scores))
    rows.sort(key=lambda row: (-row[0], row[1]))
    hits = [
        RankedHit(paper_id=pid, field_scores=scores, weighted_score=total, date_score=1.0,
                  final_score=total, rank=rank)
        for rank, (total, pid, scores) in enumerate(rows[:k], start=1)
    ]
    return hits, stats


def and_search(index: Index, query: AndQuery, k: int) -> List[RankedHit]:
    """Top k AND candidates by the unweighted sum of field scores."""
    return and_search_with_stats(index, query, k)[0]
