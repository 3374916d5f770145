"""Paper records, news articles, publication dates and the journal alias table.

Records are stored one JSON object per line. Text fields are NFC-normalised
and whitespace-collapsed on ingestion; case is left alone so acronyms such as
"PNAS" survive for the extractor.
"""

import datetime as dt
import json
import logging
import re
import unicodedata
from pathlib import Path
from typing import Annotated, Dict, Iterable, List, Optional, Tuple, Union

import pydantic
from pydantic import AfterValidator, BaseModel, ConfigDict

from .Errors import AliasTableError, RecordParseError, RecordValidationError

logger = logging.getLogger(__name__)

ISSN_RE = re.compile(r"^(\d{4})-?(\d{3}[\dX])$")
_PUNCT_RE = re.compile(r"[^\w\s]|_", re.UNICODE)
_SPACE_RE = re.compile(r"\s+")


def normalize_text(value: str) -> str:
    """NFC-normalise and collapse whitespace runs to single spaces."""
    return _SPACE_RE.sub(" ", unicodedata.normalize("NFC", value or "")).strip()


def alias_key(name: str) -> str:
    """Comparison key for journal names: case-insensitive, punctuation-stripped."""
    return _SPACE_RE.sub(" ", _PUNCT_RE.sub(" ", normalize_text(name).casefold())).strip()


def normalize_issn(value: Optional[str]) -> Optional[str]:
    """Canonical ``NNNN-NNNC`` form, or None for a blank value. Raises ValueError when malformed."""
    if value is None:
        return None
    value = normalize_text(value).upper()
    if not value:
        return None
    match = ISSN_RE.match(value)
    if not match:
        raise ValueError(f"malformed ISSN: {value!r}")
    return f"{match.group(1)}-{match.group(2)}"


def merge_aliases(canonical: str, *alias_lists: Iterable[str]) -> List[str]:
    """Union of alias lists, first spelling wins, canonical name excluded."""
    seen = {alias_key(canonical)}
    merged: List[str] = []
    for aliases in alias_lists:
        for alias in aliases:
            alias = normalize_text(alias)
            key = alias_key(alias)
            if not key or key in seen:
                continue
            seen.add(key)
            merged.append(alias)
    return merged


def _non_empty(value: str) -> str:
    if not value:
        raise ValueError("must not be empty")
    return value


Text = Annotated[str, AfterValidator(normalize_text)]
RequiredText = Annotated[str, AfterValidator(normalize_text), AfterValidator(_non_empty)]
TextList = List[Text]


class PubDate(BaseModel):
    """One publication date; ``placeholder`` marks a year-only source date."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    date: dt.date
    placeholder: bool = False

    @pydantic.model_validator(mode="before")
    @classmethod
    def _from_bare(cls, data):
        if isinstance(data, (str, dt.date)):
            return {"date": data}
        return data

    @pydantic.model_validator(mode="after")
    def _placeholder_is_january_first(self) -> "PubDate":
        if self.placeholder and (self.date.month, self.date.day) != (1, 1):
            raise ValueError("placeholder dates must fall on January 1")
        return self


class PublicationDates(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    journal_pub: Optional[PubDate] = None
    pubmed_pub: Optional[PubDate] = None
    online_pub: Optional[PubDate] = None
    accepted: Optional[PubDate] = None

    def has_publication_date(self) -> bool:
        return any(d is not None for d in (self.journal_pub, self.pubmed_pub, self.online_pub))


def resolve_earliest_date(dates: PublicationDates) -> dt.date:
    """Earliest date the paper was publicly available.

    Online date if present, otherwise the earlier of the journal and PubMed
    dates. A result earlier than the accepted date (typically a January 1
    placeholder) is replaced by the accepted date.
    """
    if dates.online_pub is not None:
        earliest = dates.online_pub.date
    else:
        candidates = [d.date for d in (dates.journal_pub, dates.pubmed_pub) if d is not None]
        if not candidates:
            raise RecordValidationError("no journal, PubMed or online publication date")
        earliest = min(candidates)
    if dates.accepted is not None and earliest < dates.accepted.date:
        return dates.accepted.date
    return earliest


class PaperRecord(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    paper_id: RequiredText
    doi: Optional[Text] = None
    title: Text
    abstract: Text = ""
    journal_name: RequiredText
    journal_issn: Optional[str] = None
    journal_aliases: TextList = pydantic.Field(default_factory=list)
    authors: TextList = pydantic.Field(default_factory=list)
    affiliations: TextList = pydantic.Field(default_factory=list)
    dates: PublicationDates

    @pydantic.field_validator("journal_issn", mode="before")
    @classmethod
    def _issn(cls, value):
        return normalize_issn(value)

    @pydantic.field_validator("doi")
    @classmethod
    def _doi(cls, value: Optional[str]) -> Optional[str]:
        return value or None

    @pydantic.field_validator("journal_aliases")
    @classmethod
    def _aliases(cls, value: List[str], info: pydantic.ValidationInfo) -> List[str]:
        return merge_aliases(info.data.get("journal_name", ""), value)

    @pydantic.model_validator(mode="after")
    def _dates_resolvable(self) -> "PaperRecord":
        if not self.dates.has_publication_date():
            raise RecordValidationError(
                f"paper {self.paper_id}: no journal, PubMed or online publication date"
            )
        return self

    @pydantic.computed_field  # type: ignore[misc]
    @property
    def earliest_date(self) -> dt.date:
        return resolve_earliest_date(self.dates)


class NewsArticle(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    news_id: RequiredText
    source: Text = ""
    title: Text = ""
    body: RequiredText
    release_date: dt.date
    gold_paper_id: Optional[Text] = None


class JournalEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    canonical_name: str
    aliases: Tuple[str, ...] = ()


class JournalAliasTable:
    """ISSN -> (canonical name, aliases) as loaded from the NLM-style catalog file."""

    def __init__(self, entries: Optional[Dict[str, JournalEntry]] = None):
        self.entries: Dict[str, JournalEntry] = dict(entries or {})

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, issn: object) -> bool:
        return isinstance(issn, str) and self.lookup(issn) is not None

    def lookup(self, issn: Optional[str]) -> Optional[JournalEntry]:
        if not issn:
            return None
        try:
            key = normalize_issn(issn)
        except ValueError:
            return None
        return self.entries.get(key) if key else None

    def add(self, issn: str, canonical_name: str, aliases: Iterable[str]) -> None:
        """Insert or merge an entry; a conflicting canonical name becomes an alias."""
        canonical_name = normalize_text(canonical_name)
        existing = self.entries.get(issn)
        if existing is None:
            self.entries[issn] = JournalEntry(
                canonical_name=canonical_name,
                aliases=tuple(merge_aliases(canonical_name, aliases)),
            )
            return
        merged = merge_aliases(existing.canonical_name, existing.aliases, [canonical_name], aliases)
        self.entries[issn] = JournalEntry(canonical_name=existing.canonical_name, aliases=tuple(merged))

    def iter_names(self) -> Iterable[Tuple[str, str]]:
        """Yield (surface name, canonical name) for every canonical name and alias."""
        for entry in self.entries.values():
            yield entry.canonical_name, entry.canonical_name
            for alias in entry.aliases:
                yield alias, entry.canonical_name


def parse_alias_lines(lines: Iterable[str], require_issn: bool = True) -> List[Tuple[Optional[str], str, List[str]]]:
    """Parse tab-separated ``ISSN, canonical name, aliases...`` lines."""
    rows = []
    for line_no, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) < 2:
            raise AliasTableError(line_no, "expected ISSN and canonical name separated by a tab")
        try:
            issn = normalize_issn(parts[0])
        except ValueError as e:
            raise AliasTableError(line_no, str(e)) from e
        if issn is None and require_issn:
            raise AliasTableError(line_no, "missing ISSN")
        canonical = normalize_text(parts[1])
        if not canonical:
            raise AliasTableError(line_no, "missing canonical name")
        aliases = [normalize_text(a) for a in parts[2:] if normalize_text(a)]
        rows.append((issn, canonical, aliases))
    return rows


def load_alias_table(path: Union[str, Path]) -> JournalAliasTable:
    table = JournalAliasTable()
    with open(path, "r", encoding="utf-8") as f:
        rows = parse_alias_lines(f)
    for issn, canonical, aliases in rows:
        table.add(issn, canonical, aliases)
    logger.info(f"Loaded alias table {path}: {len(table)} journals")
    return table


def expand_journal_aliases(record: PaperRecord, table: JournalAliasTable) -> PaperRecord:
    """Add the catalog's names for the record's ISSN to its alias list (idempotent)."""
    entry = table.lookup(record.journal_issn)
    if entry is None:
        return record
    merged = merge_aliases(
        record.journal_name, record.journal_aliases, [entry.canonical_name], entry.aliases
    )
    if merged == record.journal_aliases:
        return record
    return record.model_copy(update={"journal_aliases": merged})


def _first_error_field(error: pydantic.ValidationError) -> str:
    for err in error.errors():
        if err.get("loc"):
            return str(err["loc"][0])
    return "record"


def _parse_line(line: str, model, line_no: Optional[int] = None):
    try:
        data = json.loads(line)
    except json.JSONDecodeError as e:
        raise RecordParseError("record", f"invalid JSON ({e.msg})", line_no) from e
    if not isinstance(data, dict):
        raise RecordParseError("record", "expected a JSON object", line_no)
    if model is PaperRecord:
        # derived; recomputed from dates
        data.pop("earliest_date", None)
    try:
        return model.model_validate(data)
    except pydantic.ValidationError as e:
        raise RecordParseError(_first_error_field(e), e.errors()[0].get("msg", ""), line_no) from e


def parse_paper_record(line: str, line_no: Optional[int] = None) -> PaperRecord:
    """One JSON Lines record; a derived ``earliest_date`` key is ignored."""
    return _parse_line(line, PaperRecord, line_no)


def parse_news_article(line: str, line_no: Optional[int] = None) -> NewsArticle:
    """One JSON Lines news article."""
    return _parse_line(line, NewsArticle, line_no)


def serialize_paper_record(record: PaperRecord) -> str:
    return json.dumps(record.model_dump(mode="json"), ensure_ascii=False)


def serialize_news_article(article: NewsArticle) -> str:
    return json.dumps(article.model_dump(mode="json"), ensure_ascii=False)


def _load_lines(path: Union[str, Path], parser) -> list:
    items = []
    with open(path, "r", encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                items.append(parser(line, line_no))
            except RecordValidationError as e:
                raise RecordValidationError(f"{path} line {line_no}: {e}") from e
    return items


def load_papers(path: Union[str, Path]) -> List[PaperRecord]:
    """Read a papers.jsonl file, skipping blank lines."""
    records = _load_lines(path, parse_paper_record)
    logger.info(f"Loaded {len(records)} paper records from {path}")
    return records


def load_news(path: Union[str, Path]) -> List[NewsArticle]:
    articles = _load_lines(path, parse_news_article)
    logger.info(f"Loaded {len(articles)} news articles from {path}")
    return articles


def write_lines(path: Union[str, Path], lines: Iterable[str]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for line in lines:
            f.write(line)
            f.write("\n")
