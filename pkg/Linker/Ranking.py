"""BM25 field scoring, weighted subquery combination and date decay.

final_score = date_score * weighted_score, where weighted_score is the
weighted sum of per-field BM25 scores of the five subqueries.
"""

import datetime as dt
import logging
import math
import sys
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Mapping, Optional, Sequence, Set, Tuple

from pydantic import BaseModel, ConfigDict

from .Config import KIND_FIELDS, KINDS, DecayConfig, SearchConfig
from .Corpus import PaperRecord
from .Errors import EmptyQueryError, PaperLookupError
from .Index import Field, Index, TokenStream, field_text, term_counts, tokenize

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Query:
    """Tokenised subqueries keyed by kind (au, jo, af, ti, co) plus the news date."""

    subqueries: Mapping[str, TokenStream] = dc_field(default_factory=dict)
    news_date: Optional[dt.date] = None

    def __post_init__(self) -> None:
        unknown = set(self.subqueries) - set(KINDS)
        if unknown:
            raise ValueError(f"unknown subquery kinds: {sorted(unknown)}")

    @classmethod
    def from_text(cls, news_date: Optional[dt.date] = None, **texts: str) -> "Query":
        return cls({kind: tokenize(text) for kind, text in texts.items()}, news_date)

    def tokens(self, kind: str) -> TokenStream:
        return self.subqueries.get(kind) or TokenStream()

    def active_kinds(self) -> List[str]:
        return [kind for kind in KINDS if self.tokens(kind)]

    def is_empty(self) -> bool:
        return not self.active_kinds()


class RankedHit(BaseModel):
    model_config = ConfigDict(frozen=True)

    paper_id: str
    field_scores: Dict[str, float]
    weighted_score: float
    date_score: float
    final_score: float
    rank: int


@dataclass
class SearchStats:
    candidates: int = 0
    postings_scanned: int = 0


def idf_value(n_docs: int, df: int) -> float:
    """ln(1 + (N - n + 0.5) / (n + 0.5)); positive for every 0 <= n <= N."""
    return math.log(1.0 + (n_docs - df + 0.5) / (df + 0.5))


def term_score(idf: float, tf: int, dl: int, avgdl: float, k1: float, b: float) -> float:
    """One query token's BM25 summand."""
    return idf * (tf * (k1 + 1)) / (tf + k1 * (1 - b + b * dl / avgdl))


def idf(index: Index, field: Field, term: str) -> float:
    n_docs, _ = index.stats(field)
    return idf_value(n_docs, index.doc_frequency(field, term))


def bm25_score(
    index: Index, field: Field, query: Sequence[str], paper_id: str, k1: float, b: float
) -> float:
    """BM25 of one document for one field; every query token is its own summand."""
    if paper_id not in index:
        raise PaperLookupError(paper_id)
    dl = index.doc_length(field, paper_id)
    if dl == 0:
        return 0.0
    n_docs, avgdl = index.stats(field)
    score = 0.0
    for token in query:
        tf = index.term_frequency(field, token, paper_id)
        if tf:
            score += term_score(idf_value(n_docs, index.doc_frequency(field, token)), tf, dl, avgdl, k1, b)
    return score


def date_score(paper_date: Optional[dt.date], news_date: Optional[dt.date], cfg: DecayConfig) -> float:
    """1 within +/- offset_days, then exponential decay reaching
    ``decay_at_half_life`` after another ``half_life_days``."""
    if not cfg.enabled or paper_date is None or news_date is None:
        return 1.0
    excess = max(0, abs((paper_date - news_date).days) - cfg.offset_days)
    if excess == 0:
        return 1.0
    # floored at the smallest normal float so the score stays positive
    return max(math.exp(math.log(cfg.decay_at_half_life) / cfg.half_life_days * excess), sys.float_info.min)


def weighted_score(field_scores: Mapping[str, float], weights: Mapping[str, float]) -> float:
    total = 0.0
    for kind in KINDS:
        total += weights.get(kind, 0.0) * field_scores.get(kind, 0.0)
    return total


def _field_accumulators(
    index: Index, query: Query, cfg: SearchConfig, stats: SearchStats
) -> Dict[str, Dict[str, float]]:
    per_kind: Dict[str, Dict[str, float]] = {}
    for kind in query.active_kinds():
        field = KIND_FIELDS[kind]
        n_docs, avgdl = index.stats(field)
        b = cfg.b_for(field)
        lengths = index.doc_lengths(field)
        acc: Dict[str, float] = {}
        for token in query.tokens(kind):
            plist = index.term_postings(field, token)
            if not plist:
                continue
            stats.postings_scanned += len(plist)
            token_idf = idf_value(n_docs, len(plist))
            for pid, tf in plist.items():
                acc[pid] = acc.get(pid, 0.0) + term_score(token_idf, tf, lengths[pid], avgdl, cfg.k1, b)
        per_kind[kind] = acc
    return per_kind


def _assemble(
    scored: List[Tuple[str, Dict[str, float], dt.date]],
    news_date: Optional[dt.date],
    cfg: SearchConfig,
) -> List[RankedHit]:
    rows = []
    for pid, scores, paper_date in scored:
        weighted = weighted_score(scores, cfg.weights)
        decay = date_score(paper_date, news_date, cfg.decay)
        final = decay * weighted
        if final < cfg.min_score_threshold:
            continue
        rows.append((final, pid, scores, weighted, decay))
    rows.sort(key=lambda row: (-row[0], row[1]))
    return [
        RankedHit(
            paper_id=pid,
            field_scores=scores,
            weighted_score=weighted,
            date_score=decay,
            final_score=final,
            rank=rank,
        )
        for rank, (final, pid, scores, weighted, decay) in enumerate(rows[: cfg.top_k], start=1)
    ]


def search_with_stats(index: Index, query: Query, cfg: SearchConfig) -> Tuple[List[RankedHit], SearchStats]:
    if query.is_empty():
        raise EmptyQueryError("all subqueries are empty")
    stats = SearchStats()
    per_kind = _field_accumulators(index, query, cfg, stats)
    candidates: Set[str] = set()
    for acc in per_kind.values():
        candidates.update(acc)
    stats.candidates = len(candidates)
    scored = [
        (pid, {kind: per_kind[kind].get(pid, 0.0) if kind in per_kind else 0.0 for kind in KINDS},
         index.earliest_date(pid))
        for pid in candidates
    ]
    hits = _assemble(scored, query.news_date, cfg)
    logger.debug(f"search: {stats.candidates} candidates, {stats.postings_scanned} postings, {len(hits)} hits")
    return hits, stats


def search(index: Index, query: Query, cfg: SearchConfig) -> List[RankedHit]:
    """Rank candidates (OR over all subquery fields) by date_score * weighted_score."""
    return search_with_stats(index, query, cfg)[0]


def search_candidates(index: Index, query: Query) -> Set[str]:
    """Documents sharing at least one token with some subquery in its field."""
    candidates: Set[str] = set()
    for kind in query.active_kinds():
        field = KIND_FIELDS[kind]
        for token in query.tokens(kind):
            candidates.update(index.term_postings(field, token))
    return candidates


def brute_force_search(records: Sequence[PaperRecord], query: Query, cfg: SearchConfig) -> List[RankedHit]:
    """Reference ranking that scores every record directly, without an index."""
    if query.is_empty():
        raise EmptyQueryError("all subqueries are empty")
    records = list(records)
    n_docs = len(records)
    per_kind: Dict[str, Dict[str, float]] = {}
    for kind in query.active_kinds():
        field = KIND_FIELDS[kind]
        counts = [term_counts(field_text(r, field)) for r in records]
        lengths = [sum(c.values()) for c in counts]
        nonzero = [n for n in lengths if n > 0]
        avgdl = sum(nonzero) / len(nonzero) if nonzero else 0.0
        tokens = query.tokens(kind)
        df = {t: sum(1 for c in counts if c.get(t)) for t in set(tokens)}
        b = cfg.b_for(field)
        scores: Dict[str, float] = {}
        for record, c, dl in zip(records, counts, lengths):
            score = 0.0
            matched = False
            for token in tokens:
                tf = c.get(token, 0)
                if tf:
                    matched = True
                    score += term_score(idf_value(n_docs, df[token]), tf, dl, avgdl, cfg.k1, b)
            if matched:
                scores[record.paper_id] = score
        per_kind[kind] = scores
    by_id = {r.paper_id: r for r in records}
    candidates = set().union(*per_kind.values())
    scored = [
        (pid, {kind: per_kind[kind].get(pid, 0.0) if kind in per_kind else 0.0 for kind in KINDS},
         by_id[pid].earliest_date)
        for pid in candidates
    ]
    return _assemble(scored, query.news_date, cfg)
