"""Per-field inverted index with the statistics BM25 needs."""

import datetime as dt
import json
import logging
import re
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple, Union

from .Corpus import PaperRecord, parse_paper_record, serialize_paper_record
from .Errors import IndexBuildError, PaperLookupError, SnapshotError

logger = logging.getLogger(__name__)

SNAPSHOT_SHEBANG = "#!NEWSLINK-INDEX"
SNAPSHOT_VERSION = 1

# Unicode letters and digits; underscore counts as a boundary.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


class Field(str, Enum):
    AUTHORS = "authors"
    JOURNAL = "journal"
    AFFILIATIONS = "affiliations"
    TITLE = "title"
    ABSTRACT = "abstract"
    CONTENT = "content"


@dataclass(frozen=True)
class TokenStream:
    tokens: Tuple[str, ...] = ()

    def __iter__(self) -> Iterator[str]:
        return iter(self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)

    def __bool__(self) -> bool:
        return bool(self.tokens)

    def __getitem__(self, item):
        return self.tokens[item]


@lru_cache(maxsize=1 << 16)
def _tokens(text: str) -> Tuple[str, ...]:
    # split before lowering: some lowercase mappings add combining marks
    return tuple(token.lower() for token in _TOKEN_RE.findall(text))


def tokenize(text: str) -> TokenStream:
    """Split on non-alphanumeric boundaries, then lowercase. No stemming, no stopwords."""
    if not text:
        return TokenStream()
    return TokenStream(_tokens(text))


@lru_cache(maxsize=1 << 16)
def term_counts(text: str) -> Dict[str, int]:
    """Term frequencies of ``text``; the returned dict is shared, do not mutate."""
    return dict(Counter(_tokens(text)))


def field_text(record: PaperRecord, field: Field) -> str:
    if field is Field.AUTHORS:
        parts: Sequence[str] = record.authors
    elif field is Field.JOURNAL:
        parts = [record.journal_name, *record.journal_aliases]
    elif field is Field.AFFILIATIONS:
        parts = record.affiliations
    elif field is Field.TITLE:
        parts = [record.title]
    elif field is Field.ABSTRACT:
        parts = [record.abstract]
    else:
        parts = [
            record.title,
            *record.authors,
            *record.affiliations,
            record.journal_name,
            *record.journal_aliases,
            record.abstract,
        ]
    return " ".join(p for p in parts if p)


class Index:
    """Immutable after construction; safe for concurrent readers."""

    def __init__(
        self,
        records: Dict[str, PaperRecord],
        postings: Dict[Field, Dict[str, Dict[str, int]]],
        doc_lengths: Dict[Field, Dict[str, int]],
    ):
        self._records = records
        self._postings = postings
        self._doc_lengths = doc_lengths
        self._earliest: Dict[str, dt.date] = {pid: r.earliest_date for pid, r in records.items()}
        self._stats: Dict[Field, Tuple[int, float]] = {}
        for field in Field:
            lengths = [n for n in doc_lengths.get(field, {}).values() if n > 0]
            avgdl = sum(lengths) / len(lengths) if lengths else 0.0
            self._stats[field] = (len(records), avgdl)

    def __len__(self) -> int:
        return len(self._records)

    def __contains__(self, paper_id: object) -> bool:
        return paper_id in self._records

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Index):
            return NotImplemented
        return (
            self._records == other._records
            and self._postings == other._postings
            and self._doc_lengths == other._doc_lengths
        )

    def paper_ids(self) -> List[str]:
        return sorted(self._records)

    def records(self) -> List[PaperRecord]:
        return [self._records[pid] for pid in self.paper_ids()]

    def record(self, paper_id: str) -> PaperRecord:
        try:
            return self._records[paper_id]
        except KeyError:
            raise PaperLookupError(paper_id) from None

    def earliest_date(self, paper_id: str) -> dt.date:
        try:
            return self._earliest[paper_id]
        except KeyError:
            raise PaperLookupError(paper_id) from None

    def doc_length(self, field: Field, paper_id: str) -> int:
        if paper_id not in self._records:
            raise PaperLookupError(paper_id)
        return self._doc_lengths[field].get(paper_id, 0)

    def term_postings(self, field: Field, term: str) -> Dict[str, int]:
        """paper_id -> tf for ``term``; shared dict, do not mutate."""
        return self._postings[field].get(term, {})

    def doc_frequency(self, field: Field, term: str) -> int:
        return len(self._postings[field].get(term, ()))

    def term_frequency(self, field: Field, term: str, paper_id: str) -> int:
        return self._postings[field].get(term, {}).get(paper_id, 0)

    def vocabulary(self, field: Field) -> List[str]:
        return sorted(self._postings[field])

    def stats(self, field: Field) -> Tuple[int, float]:
        return self._stats[field]

    def doc_lengths(self, field: Field) -> Dict[str, int]:
        return dict(self._doc_lengths[field])


def build_index(records: Iterable[PaperRecord]) -> Index:
    """Build the index. Aliases must already be expanded."""
    by_id: Dict[str, PaperRecord] = {}
    postings: Dict[Field, Dict[str, Dict[str, int]]] = {field: {} for field in Field}
    doc_lengths: Dict[Field, Dict[str, int]] = {field: {} for field in Field}
    for record in records:
        if record.paper_id in by_id:
            raise IndexBuildError(f"duplicate paper_id: {record.paper_id}")
        by_id[record.paper_id] = record
        for field in Field:
            counts = term_counts(field_text(record, field))
            doc_lengths[field][record.paper_id] = sum(counts.values())
            field_postings = postings[field]
            for term, tf in counts.items():
                field_postings.setdefault(term, {})[record.paper_id] = tf
    index = Index(by_id, postings, doc_lengths)
    logger.info(
        f"Built index over {len(index)} papers: "
        + ", ".join(f"{f.value} avgdl={index.stats(f)[1]:.1f}" for f in Field)
    )
    return index


def postings(index: Index, field: Field, term: str) -> List[Tuple[str, int]]:
    """Postings for ``term`` in ``field`` sorted by ascending paper_id."""
    return sorted(index.term_postings(field, term).items())


def field_stats(index: Index, field: Field) -> Tuple[int, float]:
    """(N, avgdl). N counts every document; avgdl skips empty ones."""
    return index.stats(field)


def save_snapshot(index: Index, path: Union[str, Path]) -> None:
    payload = {
        "version": SNAPSHOT_VERSION,
        "records": [json.loads(serialize_paper_record(r)) for r in index.records()],
        "postings": {
            field.value: {
                term: sorted(index.term_postings(field, term).items())
                for term in index.vocabulary(field)
            }
            for field in Field
        },
        "doc_lengths": {field.value: dict(sorted(index.doc_lengths(field).items())) for field in Field},
    }
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"{SNAPSHOT_SHEBANG} v{SNAPSHOT_VERSION}\n")
        json.dump(payload, f, ensure_ascii=False)
    logger.info(f"Wrote index snapshot to {path}")


def load_snapshot(path: Union[str, Path]) -> Index:
    with open(path, "r", encoding="utf-8") as f:
        header = f.readline().strip()
        if not header.startswith(SNAPSHOT_SHEBANG):
            raise SnapshotError(f"'{path}' is not an index snapshot")
        try:
            payload = json.load(f)
        except json.JSONDecodeError as e:
            raise SnapshotError(f"corrupt snapshot '{path}': {e}") from e
    if payload.get("version") != SNAPSHOT_VERSION:
        raise SnapshotError(f"unsupported snapshot version: {payload.get('version')}")
    records = {}
    for raw in payload["records"]:
        record = parse_paper_record(json.dumps(raw))
        records[record.paper_id] = record
    postings_ = {
        Field(name): {term: {pid: tf for pid, tf in plist} for term, plist in terms.items()}
        for name, terms in payload["postings"].items()
    }
    doc_lengths = {Field(name): dict(lengths) for name, lengths in payload["doc_lengths"].items()}
    index = Index(records, postings_, doc_lengths)
    logger.info(f"Loaded index snapshot {path}: {len(index)} papers")
    return index
