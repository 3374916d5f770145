"""Single-article linking facade shared by the CLI, the HTTP service and the
evaluation harness."""

import datetime as dt
import logging
from pathlib import Path
from typing import Dict, List, Literal, Optional, Sequence, Tuple, Union

import pydantic
from pydantic import BaseModel, ConfigDict

from .Baseline import DEFAULT_WINDOW_DAYS, AndQuery, and_search_with_stats
from .Config import KINDS, Kind, SearchConfig, load_search_config
from .Corpus import NewsArticle, RequiredText, Text
from .Extraction import ExtractorPlugin, JournalGazetteer, build_query
from .Index import Index, load_snapshot
from .Ranking import RankedHit, SearchStats, search_with_stats

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
DEFAULT_LINK_TOP_K = 3

Backend = Literal["main", "crossref-like"]
BACKENDS: Tuple[str, ...] = ("main", "crossref-like")


class LinkRequest(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    title: Text = ""
    body: RequiredText
    release_date: dt.date
    enabled_kinds: Optional[List[Kind]] = None
    top_k: int = pydantic.Field(DEFAULT_LINK_TOP_K, ge=1)

    @pydantic.field_validator("enabled_kinds")
    @classmethod
    def _canonical_kinds(cls, value: Optional[List[str]]) -> Optional[List[str]]:
        if value is None:
            return None
        if not value:
            raise ValueError("at least one subquery kind must be enabled")
        return [kind for kind in KINDS if kind in value]

    @property
    def kinds(self) -> Tuple[str, ...]:
        return tuple(self.enabled_kinds) if self.enabled_kinds is not None else KINDS

    def to_article(self, news_id: str = "request") -> NewsArticle:
        return NewsArticle(news_id=news_id, title=self.title, body=self.body, release_date=self.release_date)


class LinkHit(BaseModel):
    model_config = ConfigDict(frozen=True)

    rank: int
    paper_id: str
    doi: Optional[str] = None
    title: str
    journal: str
    final_score: float
    date_score: float
    weighted_score: float
    field_scores: Dict[str, float]


class LinkResponse(BaseModel):
    """Machine-readable link result. Bump SCHEMA_VERSION on any field change."""

    model_config = ConfigDict(frozen=True)

    schema_version: int = SCHEMA_VERSION
    hits: List[LinkHit] = pydantic.Field(default_factory=list)


class LinkEngine:
    """Immutable after construction; safe to share across request handlers."""

    def __init__(
        self,
        index: Index,
        config: Optional[SearchConfig] = None,
        gazetteer: Optional[JournalGazetteer] = None,
        plugin: Optional[ExtractorPlugin] = None,
        backend: str = "main",
        window_days: int = DEFAULT_WINDOW_DAYS,
    ):
        if backend not in BACKENDS:
            raise ValueError(f"unknown backend '{backend}', expected one of {', '.join(BACKENDS)}")
        self.index = index
        self.config = config or SearchConfig()
        self.gazetteer = gazetteer if gazetteer is not None else JournalGazetteer.from_records(index.records())
        self.plugin = plugin
        self.backend = backend
        self.window_days = window_days

    @classmethod
    def from_files(
        cls,
        snapshot: Union[str, Path],
        config_path: Union[str, Path, None] = None,
        gazetteer_path: Union[str, Path, None] = None,
        backend: str = "main",
    ) -> "LinkEngine":
        index = load_snapshot(snapshot)
        config = load_search_config(config_path)
        extra = JournalGazetteer.load_supplement(gazetteer_path) if gazetteer_path else ()
        gazetteer = JournalGazetteer.from_records(index.records(), extra=extra)
        logger.info(f"Loaded snapshot {snapshot}: {len(index)} papers, backend={backend}")
        return cls(index, config, gazetteer, backend=backend)

    def with_config(self, **changes) -> "LinkEngine":
        config = self.config.model_copy(update=changes)
        return LinkEngine(self.index, config, self.gazetteer, self.plugin, self.backend, self.window_days)

    def rank(
        self, article: NewsArticle, kinds: Sequence[str] = KINDS, top_k: Optional[int] = None
    ) -> Tuple[List[RankedHit], SearchStats]:
        """Extract, query and rank one article. Raises EmptyQueryError when
        nothing usable was extracted for the enabled kinds."""
        query = build_query(article, self.gazetteer, self.plugin, frozenset(kinds))
        k = top_k if top_k is not None else self.config.top_k
        if self.backend == "crossref-like":
            hits, stats = and_search_with_stats(self.index, AndQuery.from_query(query, self.window_days), k)
            hits = [h for h in hits if h.final_score >= self.config.min_score_threshold]
            return hits, stats
        cfg = self.config if k == self.config.top_k else self.config.model_copy(update={"top_k": k})
        return search_with_stats(self.index, query, cfg)

    def link(self, request: LinkRequest) -> LinkResponse:
        hits, _ = self.rank(request.to_article(), request.kinds, request.top_k)
        return LinkResponse(hits=[self._to_link_hit(hit) for hit in hits])

    def _to_link_hit(self, hit: RankedHit) -> LinkHit:
        record = self.index.record(hit.paper_id)
        return LinkHit(
            rank=hit.rank,
            paper_id=hit.paper_id,
            doi=record.doi,
            title=record.title,
            journal=record.journal_name,
            final_score=hit.final_score,
            date_score=hit.date_score,
            weighted_score=hit.weighted_score,
            field_scores=dict(hit.field_scores),
        )
