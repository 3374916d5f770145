"""Evaluation harness: top-k accuracy, ablation tables, weight grid search
and extractor quality.

An article is a top-k hit when its gold paper ranks within the first k
results; an article with no extractable metadata counts as a miss, and an
article whose gold paper is not in the corpus is excluded from n.
"""

import datetime as dt
import itertools
import json
import logging
import multiprocessing
import re
import time
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pydantic
from pydantic import BaseModel, ConfigDict

from .Config import DEFAULT_B, KINDS, UNIT_WEIGHTS, Kind, SearchConfig
from .Corpus import (
    JournalAliasTable,
    NewsArticle,
    PaperRecord,
    expand_journal_aliases,
    load_alias_table,
    load_news,
    load_papers,
    normalize_text,
)
from .Engine import Backend, LinkEngine
from .Errors import ConfigError, DatasetError, EmptyQueryError
from .Extraction import PERSON, ExtractorPlugin, JournalGazetteer, RuleExtractor, Span, split_sentences
from .Index import Field, Index, build_index
from .Output import render_accuracy_table, render_table

logger = logging.getLogger(__name__)

DEFAULT_KS: Tuple[int, ...] = (1, 2, 3, 5)
DEFAULT_GRID_VALUES: Tuple[float, ...] = (0.0, 0.1, 0.2, 0.3, 0.5, 1.0, 1.5, 2.0)
GRID_CHUNK = 2048


# ------------------------------------------------------------------ dataset

@dataclass
class Dataset:
    """Paired corpus and news articles; indexes are built lazily per alias setting."""

    papers: List[PaperRecord]
    news: List[NewsArticle]
    aliases: JournalAliasTable = dc_field(default_factory=JournalAliasTable)
    _indexes: Dict[bool, Index] = dc_field(default_factory=dict, repr=False)
    _gazetteer: Optional[JournalGazetteer] = dc_field(default=None, repr=False)

    @classmethod
    def load(
        cls,
        papers_path: Union[str, Path],
        news_path: Union[str, Path],
        aliases_path: Union[str, Path, None] = None,
    ) -> "Dataset":
        papers = load_papers(papers_path)
        news = load_news(news_path)
        if aliases_path is not None and Path(aliases_path).exists():
            table = load_alias_table(aliases_path)
        else:
            if aliases_path is not None:
                logger.warning(f"Alias file {aliases_path} not found; evaluating without alias table")
            table = JournalAliasTable()
        missing = [a.news_id for a in news if not a.gold_paper_id]
        if missing:
            raise DatasetError(f"{len(missing)} news articles have no gold_paper_id (first: {missing[0]})")
        logger.info(f"Loaded dataset: {len(papers)} papers, {len(news)} news articles, {len(table)} journals")
        return cls(papers, news, table)

    def index(self, alias_expansion: bool = True) -> Index:
        if alias_expansion not in self._indexes:
            records = self.papers
            if alias_expansion:
                records = [expand_journal_aliases(r, self.aliases) for r in records]
            self._indexes[alias_expansion] = build_index(records)
        return self._indexes[alias_expansion]

    def gazetteer(self) -> JournalGazetteer:
        # extraction always knows the aliases; the ablation toggle only changes the index
        if self._gazetteer is None:
            self._gazetteer = JournalGazetteer.from_records(self.papers, self.aliases)
        return self._gazetteer


# ---------------------------------------------------------------- ablations

class AblationRow(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    label: str = pydantic.Field(min_length=1)
    enabled_kinds: List[Kind] = pydantic.Field(default_factory=lambda: list(KINDS))
    alias_expansion: bool = True
    optimal_weights: bool = True
    author_b_zero: bool = True
    decay: bool = True
    backend: Backend = "main"
    weights: Optional[Dict[Kind, float]] = None

    @pydantic.field_validator("enabled_kinds")
    @classmethod
    def _kinds(cls, value: List[str]) -> List[str]:
        if not value:
            raise ValueError("at least one subquery kind must be enabled")
        return [kind for kind in KINDS if kind in value]


class AblationSpec(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    rows: List[AblationRow] = pydantic.Field(min_length=1)

    @pydantic.field_validator("rows")
    @classmethod
    def _unique_labels(cls, rows: List[AblationRow]) -> List[AblationRow]:
        labels = [row.label for row in rows]
        duplicates = sorted({label for label in labels if labels.count(label) > 1})
        if duplicates:
            raise ValueError(f"duplicate row labels: {', '.join(duplicates)}")
        return rows

    @classmethod
    def preset(cls, name: str) -> "AblationSpec":
        try:
            return cls(rows=PRESETS[name]())
        except KeyError:
            raise ConfigError(f"unknown ablation preset '{name}', expected one of {', '.join(PRESETS)}") from None


def _feature_rows() -> List[AblationRow]:
    off = dict(enabled_kinds=["au", "jo"], alias_expansion=False, optimal_weights=False,
               author_b_zero=False, decay=False)
    return [
        AblationRow(label="Baseline (AuJo)", **off),
        AblationRow(label="+ alternative journal names", **{**off, "alias_expansion": True}),
        AblationRow(label="+ optimal subquery weights", **{**off, "optimal_weights": True}),
        AblationRow(label="+ BM25 b=0 for authors", **{**off, "author_b_zero": True}),
        AblationRow(label="+ date decay", **{**off, "decay": True}),
        AblationRow(label="All four features", enabled_kinds=["au", "jo"]),
    ]


def _metadata_rows() -> List[AblationRow]:
    combos = [["au", "jo"], ["au", "jo", "ti"], ["au", "jo", "af"], ["au", "jo", "co"], list(KINDS)]
    return [
        AblationRow(label="".join(k.capitalize() for k in kinds), enabled_kinds=kinds) for kinds in combos
    ]


def _backend_rows() -> List[AblationRow]:
    return [
        AblationRow(label="crossref-like AuJo", enabled_kinds=["au", "jo"], backend="crossref-like"),
        AblationRow(label="crossref-like AuJoAfTi", enabled_kinds=["au", "jo", "af", "ti"], backend="crossref-like"),
        AblationRow(label="main AuJo", enabled_kinds=["au", "jo"]),
        AblationRow(label="main AuJoAfTiCo"),
    ]


PRESETS = {"features": _feature_rows, "metadata": _metadata_rows, "backends": _backend_rows}


def load_ablation_spec(path: Union[str, Path]) -> AblationSpec:
    """Preset name or a JSON file with a ``rows`` list."""
    if str(path) in PRESETS:
        return AblationSpec.preset(str(path))
    if not Path(path).is_file():
        raise ConfigError(f"unknown ablation spec '{path}': not a file or one of {', '.join(PRESETS)}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"invalid JSON in ablation spec '{path}': {e}") from e
    if isinstance(data, list):
        data = {"rows": data}
    try:
        return AblationSpec.model_validate(data)
    except pydantic.ValidationError as e:
        raise ConfigError(f"invalid ablation spec '{path}': {e}") from e


def row_config(row: AblationRow, base: Optional[SearchConfig] = None) -> SearchConfig:
    base = base or SearchConfig()
    if row.weights is not None:
        weights = {**base.weights, **row.weights}
    else:
        weights = dict(base.weights) if row.optimal_weights else dict(UNIT_WEIGHTS)
    b_per_field = dict(base.b_per_field)
    b_per_field[Field.AUTHORS] = 0.0 if row.author_b_zero else DEFAULT_B
    return base.model_copy(update={
        "weights": weights,
        "b_per_field": b_per_field,
        "decay": base.decay.model_copy(update={"enabled": row.decay}),
    })


# ------------------------------------------------------------------ results

class ArticleOutcome(BaseModel):
    model_config = ConfigDict(frozen=True)

    news_id: str
    gold_paper_id: str
    gold_rank: Optional[int] = None
    latency_s: float = 0.0
    postings_scanned: int = 0
    candidates: int = 0
    # gold earliest_date minus news release date
    date_gap_days: Optional[int] = None
    error: Optional[str] = None


class EvalResult(BaseModel):
    label: str
    ks: List[int]
    accuracy: Dict[int, float]
    n: int
    mean_latency_s: float
    mean_postings_scanned: float
    outcomes: List[ArticleOutcome]
    excluded: List[str] = pydantic.Field(default_factory=list)

    @classmethod
    def from_outcomes(
        cls, label: str, outcomes: List[ArticleOutcome], ks: Sequence[int], excluded: Sequence[str] = ()
    ) -> "EvalResult":
        ranks = [o.gold_rank for o in outcomes]
        n = len(outcomes)
        return cls(
            label=label,
            ks=list(ks),
            accuracy={k: top_k_accuracy(ranks, k) if n else 0.0 for k in ks},
            n=n,
            mean_latency_s=sum(o.latency_s for o in outcomes) / n if n else 0.0,
            mean_postings_scanned=sum(o.postings_scanned for o in outcomes) / n if n else 0.0,
            outcomes=outcomes,
            excluded=list(excluded),
        )

    def summary_row(self) -> Dict[str, object]:
        return {
            "label": self.label,
            "accuracy": self.accuracy,
            "mean_latency_ms": self.mean_latency_s * 1000.0,
            "mean_postings_scanned": self.mean_postings_scanned,
            "n_evaluated": self.n,
        }


def top_k_accuracy(gold_ranks: Sequence[Optional[int]], k: int) -> float:
    """m/n where m counts gold ranks <= k; None is a miss."""
    if k < 1:
        raise ValueError("k must be positive")
    if not gold_ranks:
        raise ValueError("top-k accuracy needs at least one article")
    hits = sum(1 for rank in gold_ranks if rank is not None and rank <= k)
    return hits / len(gold_ranks)


# --------------------------------------------------------------- evaluation

_worker: Optional[Tuple[LinkEngine, Tuple[str, ...], int]] = None


def _init_worker(engine: LinkEngine, kinds: Tuple[str, ...], depth: int) -> None:
    global _worker
    _worker = (engine, kinds, depth)


def _evaluate_article(engine: LinkEngine, kinds: Sequence[str], depth: int, article: NewsArticle) -> ArticleOutcome:
    gold = article.gold_paper_id or ""
    gap = (engine.index.earliest_date(gold) - article.release_date).days
    start = time.perf_counter()
    try:
        hits, stats = engine.rank(article, kinds, depth)
    except EmptyQueryError as e:
        logger.warning(f"{article.news_id}: {e}; counted as a miss")
        return ArticleOutcome(news_id=article.news_id, gold_paper_id=gold, date_gap_days=gap, error=str(e))
    latency = time.perf_counter() - start
    rank = next((h.rank for h in hits if h.paper_id == gold), None)
    return ArticleOutcome(
        news_id=article.news_id,
        gold_paper_id=gold,
        gold_rank=rank,
        latency_s=latency,
        postings_scanned=stats.postings_scanned,
        candidates=stats.candidates,
        date_gap_days=gap,
    )


def _evaluate_in_worker(article: NewsArticle) -> ArticleOutcome:
    assert _worker is not None
    engine, kinds, depth = _worker
    return _evaluate_article(engine, kinds, depth, article)


def _split_articles(dataset: Dataset, index: Index) -> Tuple[List[NewsArticle], List[str]]:
    evaluable, excluded = [], []
    for article in dataset.news:
        if article.gold_paper_id in index:
            evaluable.append(article)
        else:
            logger.warning(f"{article.news_id}: gold paper {article.gold_paper_id} not in corpus; excluded")
            excluded.append(article.news_id)
    return evaluable, excluded


def evaluate(
    dataset: Dataset,
    row: AblationRow,
    ks: Sequence[int] = DEFAULT_KS,
    base_config: Optional[SearchConfig] = None,
    processes: int = 1,
) -> EvalResult:
    """Evaluate one configuration over every article of the dataset."""
    ks = sorted(set(ks))
    index = dataset.index(row.alias_expansion)
    depth = max(ks)
    config = row_config(row, base_config).model_copy(update={"top_k": depth})
    engine = LinkEngine(index, config, dataset.gazetteer(), backend=row.backend)
    kinds = tuple(row.enabled_kinds)
    articles, excluded = _split_articles(dataset, index)

    if processes > 1 and len(articles) > 1:
        with multiprocessing.Pool(processes, initializer=_init_worker, initargs=(engine, kinds, depth)) as pool:
            outcomes = pool.map(_evaluate_in_worker, articles, chunksize=max(1, len(articles) // (processes * 4)))
    else:
        outcomes = [_evaluate_article(engine, kinds, depth, article) for article in articles]

    result = EvalResult.from_outcomes(row.label, outcomes, ks, excluded)
    accuracy = ", ".join(f"top-{k}={result.accuracy[k]:.3f}" for k in ks)
    logger.info(f"[{row.label}] n={result.n} {accuracy} latency={result.mean_latency_s * 1000:.2f}ms")
    return result


def run_ablation(
    dataset: Dataset,
    spec: AblationSpec,
    ks: Sequence[int] = DEFAULT_KS,
    base_config: Optional[SearchConfig] = None,
    processes: int = 1,
) -> List[EvalResult]:
    return [evaluate(dataset, row, ks, base_config, processes) for row in spec.rows]


# -------------------------------------------------------------- grid search

class GridPoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    weights: Dict[str, float]
    accuracy: Dict[int, float]


class GridSearchResult(BaseModel):
    best_weights: Dict[str, float]
    best_top1: float
    ks: List[int]
    n: int
    table: List[GridPoint]


def default_grid() -> Dict[str, List[float]]:
    return {kind: list(DEFAULT_GRID_VALUES) for kind in KINDS}


def load_grid(path: Union[str, Path]) -> Dict[str, List[float]]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"invalid JSON in grid file '{path}': {e}") from e
    if not isinstance(data, dict) or set(data) - set(KINDS):
        raise ConfigError(f"grid file '{path}' must map subquery kinds ({', '.join(KINDS)}) to value lists")
    grid = default_grid()
    grid.update({kind: [float(v) for v in values] for kind, values in data.items()})
    return grid


@dataclass
class _ArticleMatrix:
    scores: np.ndarray  # candidates x kinds, unweighted field scores
    decay: np.ndarray
    gold: int  # column of the gold paper, -1 when not retrieved
    wins_ties: np.ndarray  # candidate id sorts before the gold id


def _article_matrix(engine: LinkEngine, kinds: Sequence[str], article: NewsArticle) -> Optional[_ArticleMatrix]:
    try:
        hits, _ = engine.rank(article, kinds, len(engine.index))
    except EmptyQueryError:
        return None
    ids = [h.paper_id for h in hits]
    gold = ids.index(article.gold_paper_id) if article.gold_paper_id in ids else -1
    gold_id = article.gold_paper_id or ""
    return _ArticleMatrix(
        scores=np.array([[h.field_scores[k] for k in KINDS] for h in hits], dtype=np.float64).reshape(-1, len(KINDS)),
        decay=np.array([h.date_score for h in hits], dtype=np.float64),
        gold=gold,
        wins_ties=np.array([pid < gold_id for pid in ids], dtype=bool),
    )


def _gold_ranks(matrix: _ArticleMatrix, weights: np.ndarray, threshold: float) -> np.ndarray:
    """Gold rank for every weight vector in the chunk; 0 means a miss."""
    if matrix.gold < 0:
        return np.zeros(len(weights), dtype=np.int64)
    # same operation order as Ranking.weighted_score so ranks agree exactly
    total = np.zeros((len(weights), len(matrix.decay)), dtype=np.float64)
    for j in range(len(KINDS)):
        total = total + weights[:, j : j + 1] * matrix.scores[None, :, j]
    final = matrix.decay[None, :] * total
    gold_final = final[:, matrix.gold : matrix.gold + 1]
    better = (final > gold_final) | ((final == gold_final) & matrix.wins_ties[None, :])
    ranks = 1 + better.sum(axis=1)
    ranks[gold_final[:, 0] < threshold] = 0
    return ranks


def grid_search_weights(
    dataset: Dataset,
    grid: Optional[Mapping[str, Sequence[float]]] = None,
    row: Optional[AblationRow] = None,
    ks: Sequence[int] = DEFAULT_KS,
    base_config: Optional[SearchConfig] = None,
) -> GridSearchResult:
    """Exhaustive search over the Cartesian weight grid maximising top-1.

    Ties go to the lexicographically smallest weight vector (KINDS order).
    """
    row = row or AblationRow(label="grid search")
    if row.backend != "main":
        raise ConfigError("grid search needs the main backend; the crossref-like backend ignores weights")
    grid = {**default_grid(), **(grid or {})}
    axes = []
    for kind in KINDS:
        values = sorted({float(v) for v in grid[kind]})
        if not values:
            raise ConfigError(f"grid for '{kind}' is empty")
        if values[0] < 0:
            raise ConfigError(f"grid for '{kind}' has a negative weight")
        axes.append(values)
    points = np.array(list(itertools.product(*axes)), dtype=np.float64)
    ks = sorted(set(ks) | {1})

    index = dataset.index(row.alias_expansion)
    config = row_config(row, base_config)
    threshold = config.min_score_threshold
    engine = LinkEngine(index, config.model_copy(update={"min_score_threshold": 0.0}), dataset.gazetteer())
    articles, _ = _split_articles(dataset, index)
    if not articles:
        raise DatasetError("no article has its gold paper in the corpus")
    kinds = tuple(row.enabled_kinds)
    matrices = [_article_matrix(engine, kinds, article) for article in articles]
    logger.info(f"Grid search: {len(points)} weight vectors over {len(articles)} articles")

    hits = np.zeros((len(points), len(ks)), dtype=np.int64)
    for start in range(0, len(points), GRID_CHUNK):
        chunk = points[start : start + GRID_CHUNK]
        for matrix in matrices:
            if matrix is None:
                continue
            ranks = _gold_ranks(matrix, chunk, threshold)
            for col, k in enumerate(ks):
                hits[start : start + len(chunk), col] += (ranks >= 1) & (ranks <= k)

    n = len(articles)
    accuracy = hits / n
    top1 = accuracy[:, ks.index(1)]
    best = int(np.argmax(top1))
    best_weights = dict(zip(KINDS, points[best].tolist()))
    logger.info(f"Best weights {best_weights} top-1={top1[best]:.3f}")
    table = [
        GridPoint(weights=dict(zip(KINDS, p.tolist())), accuracy={k: float(accuracy[i, c]) for c, k in enumerate(ks)})
        for i, p in enumerate(points)
    ]
    return GridSearchResult(best_weights=best_weights, best_top1=float(top1[best]), ks=ks, n=n, table=table)


# --------------------------------------------------------------- extraction

_GOLD_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)


class ExtractionResult(BaseModel):
    """Extractor quality against the gold papers of a paired dataset.

    A sentence is a gold journal sentence when it mentions the gold paper's
    journal by its name or an alias; those mentions are the gold journal
    spans. Gold persons are the gold paper's authors named in the body.
    Journal spans count only from sentences the filter accepted, as in
    extract_metadata.
    """

    n_articles: int
    n_sentences: int
    sentence_accuracy: float
    sentence_precision: float
    sentence_recall: float
    n_journal_mentions: int
    journal_precision: float
    journal_recall: float
    journal_f1: float
    n_persons: int
    person_recall: float
    excluded: List[str] = pydantic.Field(default_factory=list)

    def summary_rows(self) -> List[Tuple[str, str]]:
        return [
            ("Sentence filter accuracy", f"{self.sentence_accuracy:.3f}"),
            ("Sentence filter precision", f"{self.sentence_precision:.3f}"),
            ("Sentence filter recall", f"{self.sentence_recall:.3f}"),
            ("Journal precision", f"{self.journal_precision:.3f}"),
            ("Journal recall", f"{self.journal_recall:.3f}"),
            ("Journal F1", f"{self.journal_f1:.3f}"),
            ("Person recall", f"{self.person_recall:.3f}"),
        ]


def _ratio(num: float, den: float, empty: float) -> float:
    return num / den if den else empty


def gold_spans(text: str, surfaces: Iterable[str]) -> List[Span]:
    """Longest non-overlapping case-insensitive occurrences of any surface form."""
    found = set()
    for surface in surfaces:
        words = _GOLD_WORD_RE.findall(surface)
        if not words:
            continue
        pattern = re.compile(
            r"(?<![^\W_])" + r"[\W_]+".join(map(re.escape, words)) + r"(?![^\W_])", re.IGNORECASE
        )
        found.update(m.span() for m in pattern.finditer(text))
    spans: List[Span] = []
    last_end = -1
    for start, end in sorted(found, key=lambda s: (s[0], -s[1])):
        if start >= last_end:
            spans.append((start, end))
            last_end = end
    return spans


def evaluate_extraction(dataset: Dataset, plugin: Optional[ExtractorPlugin] = None) -> ExtractionResult:
    """Score the sentence filter, journal extraction and person extraction."""
    if plugin is None:
        plugin = RuleExtractor(dataset.gazetteer())
    index = dataset.index(True)
    articles, excluded = _split_articles(dataset, index)
    sentences = correct = tp_sentences = predicted_sentences = gold_sentences = 0
    tp_journals = predicted_journals = gold_journals = 0
    found_persons = gold_persons = 0
    for article in articles:
        gold = index.record(article.gold_paper_id or "")
        surfaces = [gold.journal_name, *gold.journal_aliases]
        for sentence in split_sentences(article.body):
            expected = gold_spans(sentence, surfaces)
            accepted, _ = plugin.classify_sentence(sentence)
            sentences += 1
            correct += accepted == bool(expected)
            tp_sentences += accepted and bool(expected)
            predicted_sentences += accepted
            gold_sentences += bool(expected)
            predicted = {span for _, span in plugin.extract_journals(sentence)} if accepted else set()
            tp_journals += len(predicted & set(expected))
            predicted_journals += len(predicted)
            gold_journals += len(expected)
        named = {
            normalize_text(m.surface).casefold()
            for m in plugin.extract_entities(article.body)
            if m.kind == PERSON
        }
        for author in gold.authors:
            if gold_spans(article.body, [author]):
                gold_persons += 1
                found_persons += normalize_text(author).casefold() in named

    precision = _ratio(tp_journals, predicted_journals, 1.0)
    recall = _ratio(tp_journals, gold_journals, 1.0)
    result = ExtractionResult(
        n_articles=len(articles),
        n_sentences=sentences,
        sentence_accuracy=_ratio(correct, sentences, 0.0),
        sentence_precision=_ratio(tp_sentences, predicted_sentences, 1.0),
        sentence_recall=_ratio(tp_sentences, gold_sentences, 1.0),
        n_journal_mentions=gold_journals,
        journal_precision=precision,
        journal_recall=recall,
        journal_f1=_ratio(2 * precision * recall, precision + recall, 0.0),
        n_persons=gold_persons,
        person_recall=_ratio(found_persons, gold_persons, 1.0),
        excluded=excluded,
    )
    logger.info(
        f"Extraction over {result.n_articles} articles: sentence accuracy {result.sentence_accuracy:.3f}, "
        f"journal F1 {result.journal_f1:.3f}, person recall {result.person_recall:.3f}"
    )
    return result


# ------------------------------------------------------------------ reports

def write_report(results: Sequence[EvalResult], out_dir: Union[str, Path], ks: Sequence[int] = DEFAULT_KS) -> str:
    """Write report.txt (aligned table) and report.json; returns the table text."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    text = render_accuracy_table([r.summary_row() for r in results], sorted(set(ks)))
    (out / "report.txt").write_text(text, encoding="utf-8")
    payload = {
        "generated": dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds"),
        "results": [r.model_dump(mode="json") for r in results],
    }
    with open(out / "report.json", "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2, ensure_ascii=False)
    logger.info(f"Wrote evaluation report to {out}")
    return text


def write_grid_report(result: GridSearchResult, out_dir: Union[str, Path]) -> str:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    ranked = sorted(result.table, key=lambda p: (-p.accuracy.get(1, 0.0), tuple(p.weights[k] for k in KINDS)))
    lines = [
        "Best weights: " + ", ".join(f"{k.capitalize()}/{result.best_weights[k]:g}" for k in KINDS),
        f"Best top-1: {result.best_top1:.3f} (n={result.n})",
        "",
    ]
    header = [k.capitalize() for k in KINDS] + [f"top-{k}" for k in result.ks]
    rows = [[f"{p.weights[k]:g}" for k in KINDS] + [f"{p.accuracy[k]:.3f}" for k in result.ks] for p in ranked[:20]]
    lines.extend(render_table(header, rows, min_width=4))
    text = "\n".join(lines) + "\n"
    (out / "grid_report.txt").write_text(text, encoding="utf-8")
    with open(out / "grid_report.json", "w", encoding="utf-8") as f:
        json.dump(result.model_dump(mode="json"), f, ensure_ascii=False)
    return text


def write_extraction_report(result: ExtractionResult, out_dir: Union[str, Path]) -> str:
    """Write extraction_report.txt and extraction_report.json; returns the table text."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    lines = render_table(["Measure", "Value"], result.summary_rows())
    lines.append("")
    lines.append(
        f"{result.n_articles} articles, {result.n_sentences} sentences, "
        f"{result.n_journal_mentions} journal mentions, {result.n_persons} named authors"
    )
    text = "\n".join(lines) + "\n"
    (out / "extraction_report.txt").write_text(text, encoding="utf-8")
    with open(out / "extraction_report.json", "w", encoding="utf-8") as f:
        json.dump(result.model_dump(mode="json"), f, indent=2, ensure_ascii=False)
    logger.info(f"Wrote extraction report to {out}")
    return text
