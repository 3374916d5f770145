"""Metadata extraction from news text.

The learned sentence filter and NER models are replaced by rules and a
journal gazetteer behind the ExtractorPlugin interface; any object with the
same three methods can be passed to build_query instead.
"""

import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import AbstractSet, Dict, Iterable, List, Optional, Protocol, Sequence, Tuple, Union, runtime_checkable

import pydantic
from pydantic import BaseModel, ConfigDict

from .Config import KINDS
from .Corpus import JournalAliasTable, NewsArticle, PaperRecord, normalize_text, parse_alias_lines
from .Errors import EmptyQueryError
from .Index import tokenize
from .Ranking import Query

logger = logging.getLogger(__name__)

CONTENT_PREFIX_TOKENS = 300

PERSON = "PERSON"
ORG = "ORG"

Span = Tuple[int, int]

# Journal-sentence cues. journal/published/report/write come from how news
# stories typically cite a venue; the rest widen coverage.
CUE_WORDS = frozenset({"journal", "published", "publish", "report", "reported", "write", "wrote", "study"})
CUE_PHRASES = (("appears", "in"),)

GAZETTEER_MATCH_CONFIDENCE = 1.0
CUE_ONLY_CONFIDENCE = 0.6

_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)


def _name_key(name: str) -> Tuple[str, ...]:
    return tuple(m.group().casefold() for m in _WORD_RE.finditer(normalize_text(name)))


class JournalGazetteer:
    """Normalised journal surface form -> canonical journal name.

    Matching ignores case and punctuation; the longest registered name wins.
    """

    def __init__(self, names: Iterable[Tuple[str, str]] = ()):
        self._entries: Dict[Tuple[str, ...], str] = {}
        self._max_len = 0
        for surface, canonical in names:
            self.add(surface, canonical)

    def __len__(self) -> int:
        return len(self._entries)

    def add(self, surface: str, canonical: str) -> None:
        key = _name_key(surface)
        if not key:
            return
        canonical = normalize_text(canonical)
        existing = self._entries.get(key)
        # order-independent when two journals share a surface form
        if existing is None or canonical < existing:
            self._entries[key] = canonical
        self._max_len = max(self._max_len, len(key))

    def lookup(self, name: str) -> Optional[str]:
        return self._entries.get(_name_key(name))

    def find(self, sentence: str) -> List[Tuple[str, Span]]:
        words = [(m.group().casefold(), m.start(), m.end()) for m in _WORD_RE.finditer(sentence)]
        matches: List[Tuple[str, Span]] = []
        i = 0
        while i < len(words):
            for n in range(min(self._max_len, len(words) - i), 0, -1):
                canonical = self._entries.get(tuple(w[0] for w in words[i : i + n]))
                if canonical is not None:
                    matches.append((canonical, (words[i][1], words[i + n - 1][2])))
                    i += n
                    break
            else:
                i += 1
        return matches

    @classmethod
    def from_records(
        cls,
        records: Iterable[PaperRecord],
        table: Optional[JournalAliasTable] = None,
        extra: Iterable[Tuple[str, str]] = (),
    ) -> "JournalGazetteer":
        gazetteer = cls()
        for record in records:
            gazetteer.add(record.journal_name, record.journal_name)
            for alias in record.journal_aliases:
                gazetteer.add(alias, record.journal_name)
        if table is not None:
            for surface, canonical in table.iter_names():
                gazetteer.add(surface, canonical)
        for surface, canonical in extra:
            gazetteer.add(surface, canonical)
        logger.info(f"Journal gazetteer has {len(gazetteer)} surface forms")
        return gazetteer

    @staticmethod
    def load_supplement(path: Union[str, Path]) -> List[Tuple[str, str]]:
        """Read a supplemental gazetteer file (alias-table format, ISSN optional)."""
        with open(path, "r", encoding="utf-8") as f:
            rows = parse_alias_lines(f, require_issn=False)
        names: List[Tuple[str, str]] = []
        for _, canonical, aliases in rows:
            names.append((canonical, canonical))
            names.extend((alias, canonical) for alias in aliases)
        return names


@dataclass(frozen=True)
class EntityMention:
    surface: str
    kind: str
    span: Span


@runtime_checkable
class ExtractorPlugin(Protocol):
    def classify_sentence(self, sentence: str) -> Tuple[bool, float]: ...

    def extract_journals(self, sentence: str) -> List[Tuple[str, Span]]: ...

    def extract_entities(self, text: str) -> List[EntityMention]: ...


class ExtractedMetadata(BaseModel):
    model_config = ConfigDict(frozen=True)

    authors: List[str] = pydantic.Field(default_factory=list)
    affiliations: List[str] = pydantic.Field(default_factory=list)
    # journal mentions as written in the article; canonical_journals is the
    # gazetteer's mapping of the same mentions
    journals: List[str] = pydantic.Field(default_factory=list)
    canonical_journals: List[str] = pydantic.Field(default_factory=list)
    title: str = ""
    content_prefix: str = ""


# ---------------------------------------------------------------- sentences

_ABBREVIATIONS = frozenset({
    "dr", "prof", "mr", "mrs", "ms", "st", "jr", "sr", "vs", "etc", "al", "e.g", "i.e",
    "inc", "ltd", "co", "corp", "no", "fig", "approx", "dept", "univ",
    "jan", "feb", "mar", "apr", "jun", "jul", "aug", "sep", "sept", "oct", "nov", "dec",
})
_BOUNDARY_RE = re.compile(r"[.!?]+[\"'”’)\]]*(?=\s|$)")
_LAST_WORD_RE = re.compile(r"(\S+)$")
_INITIALS_RE = re.compile(r"(?:[A-Za-z]\.)*[A-Za-z]")


def split_sentences(text: str) -> List[str]:
    """Rule-based splitting on terminal punctuation with abbreviation guards."""
    sentences: List[str] = []
    start = 0
    for m in _BOUNDARY_RE.finditer(text or ""):
        if m.group() == ".":
            last = _LAST_WORD_RE.search(text[start : m.start()])
            if last:
                word = last.group(1).lstrip("(\"'“‘")
                if word.lower() in _ABBREVIATIONS or (_INITIALS_RE.fullmatch(word) and word[:1].isupper()):
                    continue
        rest = text[m.end() :].lstrip()
        if rest and rest[0].islower():
            continue
        sentence = text[start : m.end()].strip()
        if sentence:
            sentences.append(sentence)
        start = m.end()
    tail = (text or "")[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


# ----------------------------------------------------------- journal filter

def is_journal_sentence(sentence: str, gazetteer: JournalGazetteer) -> Tuple[bool, float]:
    if gazetteer.find(sentence):
        return True, GAZETTEER_MATCH_CONFIDENCE
    tokens = tokenize(sentence).tokens
    if any(t in CUE_WORDS for t in tokens):
        return True, CUE_ONLY_CONFIDENCE
    for phrase in CUE_PHRASES:
        n = len(phrase)
        if any(tokens[i : i + n] == phrase for i in range(len(tokens) - n + 1)):
            return True, CUE_ONLY_CONFIDENCE
    return False, 0.0


def extract_journal_names(sentence: str, gazetteer: JournalGazetteer) -> List[Tuple[str, Span]]:
    """Longest non-overlapping gazetteer matches, left to right."""
    return gazetteer.find(sentence)


# ------------------------------------------------------------------ entities

_HONORIFICS = frozenset({"dr", "prof", "mr", "mrs", "ms", "mx", "sir", "dame"})
_ROLE_CUES = frozenset({
    "professor", "researcher", "researchers", "scientist", "scientists", "author", "authors",
    "co-author", "coauthor", "co-authors", "investigator", "investigators", "physician",
    "epidemiologist", "director", "lead", "senior", "colleague", "colleagues",
})
_PRE_PERSON_CUES = _HONORIFICS | _ROLE_CUES | {"by", "said", "says", "told"}
_POST_PERSON_CUES = frozenset({
    "said", "says", "told", "explained", "added", "noted", "wrote", "who", "commented",
    "cautioned", "agreed", "stressed", "warned",
})
ORG_CUES = frozenset({
    "university", "universities", "universitat", "universite", "institute", "institutes",
    "institution", "hospital", "hospitals", "center", "centre", "centers", "centres",
    "college", "school", "laboratory", "laboratories", "foundation", "clinic", "department",
    "agency", "council", "society", "academy", "consortium", "corporation", "ministry",
    "infirmary", "organization", "organisation",
})
_CONNECTORS = frozenset({"of", "for", "the", "de"})
_LEADING_STOP = frozenset({
    "the", "a", "an", "in", "at", "on", "for", "but", "and", "or", "when", "while", "if",
    "this", "that", "these", "those", "it", "its", "their", "they", "we", "our", "he", "she",
    "his", "her", "after", "before", "during", "although", "however", "now", "so", "yet",
})
_OPEN_PUNCT = "\"'([{“‘"
_CLOSE_PUNCT = "\"')]},;:!?.”’"


@dataclass
class _Word:
    text: str
    start: int
    end: int
    lower: str
    breaks: bool


def _words(text: str) -> List[_Word]:
    words = []
    for m in re.finditer(r"\S+", text):
        raw, start, end = m.group(), m.start(), m.end()
        lead = len(raw) - len(raw.lstrip(_OPEN_PUNCT))
        core = raw[lead:]
        stripped = core.rstrip(_CLOSE_PUNCT)
        trailing = core[len(stripped):]
        breaks = bool(trailing)
        if trailing.startswith(".") and len(trailing) == 1 and (
            stripped.lower() in _HONORIFICS or (len(stripped) == 1 and stripped.isupper())
        ):
            # "Dr." and initials keep their period and do not end a name
            stripped += "."
            breaks = False
        for suffix in ("'s", "’s"):
            if stripped.endswith(suffix):
                stripped = stripped[: -len(suffix)]
                breaks = True
        if not stripped:
            continue
        s = start + lead
        words.append(_Word(stripped, s, s + len(stripped), stripped.lower().rstrip("."), breaks))
    return words


def _is_cue(word: _Word) -> bool:
    return word.lower in _PRE_PERSON_CUES or word.lower in _POST_PERSON_CUES


def _is_name_word(word: _Word) -> bool:
    return word.text[:1].isupper() and not _is_cue(word)


def extract_entities(text: str) -> List[EntityMention]:
    """Capitalised runs classified as ORG (suffix cues) or PERSON (adjacent
    honorific/role/speech cues). Recall over precision: any cue-adjacent run
    without an organisation cue is a PERSON."""
    words = _words(text or "")
    n = len(words)
    runs: List[Tuple[int, int, bool]] = []
    i = 0
    while i < n:
        if not _is_name_word(words[i]):
            i += 1
            continue
        j = i
        has_org = words[i].lower in ORG_CUES
        while not words[j].breaks:
            k = j + 1
            if has_org:
                while k < n and words[k].lower in _CONNECTORS and not words[k].text[:1].isupper() and not words[k].breaks:
                    k += 1
            if k < n and _is_name_word(words[k]) and (k == j + 1 or has_org):
                j = k
                has_org = has_org or words[j].lower in ORG_CUES
                continue
            break
        while i < j and words[i].lower in _LEADING_STOP:
            i += 1
        if words[i].lower not in _LEADING_STOP:
            runs.append((i, j, has_org))
        i = j + 1

    mentions: List[EntityMention] = []
    previous_person_end = -10
    for start, end, has_org in runs:
        span = (words[start].start, words[end].end)
        surface = text[span[0] : span[1]]
        if has_org:
            mentions.append(EntityMention(surface, ORG, span))
            continue
        before = words[start - 1] if start > 0 else None
        after = words[end + 1] if end + 1 < n else None
        after2 = words[end + 2] if end + 2 < n else None
        person = (
            (before is not None and before.lower in _PRE_PERSON_CUES)
            or (after is not None and after.lower in _POST_PERSON_CUES)
            or (after is not None and after.lower in {"a", "an", "the"}
                and after2 is not None and after2.lower in _ROLE_CUES)
            or (before is not None and before.lower == "and" and previous_person_end == start - 2)
            or (previous_person_end == start - 1
                and text[words[start - 1].end : words[start].start].strip() == ",")
        )
        if person:
            mentions.append(EntityMention(surface, PERSON, span))
            previous_person_end = end
    return mentions


class RuleExtractor:
    """Default ExtractorPlugin: gazetteer journal matching and cue-based NER."""

    def __init__(self, gazetteer: JournalGazetteer):
        self.gazetteer = gazetteer

    def classify_sentence(self, sentence: str) -> Tuple[bool, float]:
        return is_journal_sentence(sentence, self.gazetteer)

    def extract_journals(self, sentence: str) -> List[Tuple[str, Span]]:
        return extract_journal_names(sentence, self.gazetteer)

    def extract_entities(self, text: str) -> List[EntityMention]:
        return extract_entities(text)


# ------------------------------------------------------------------- queries

def _dedupe(items: Iterable[str]) -> List[str]:
    seen = set()
    out = []
    for item in items:
        key = item.casefold()
        if key not in seen:
            seen.add(key)
            out.append(item)
    return out


def content_prefix(body: str, limit: int = CONTENT_PREFIX_TOKENS) -> str:
    return " ".join(tokenize(body).tokens[:limit])


def extract_metadata(
    news: NewsArticle,
    gazetteer: Optional[JournalGazetteer] = None,
    plugin: Optional[ExtractorPlugin] = None,
) -> ExtractedMetadata:
    if plugin is None:
        plugin = RuleExtractor(gazetteer if gazetteer is not None else JournalGazetteer())
    journals: List[str] = []
    canonical: List[str] = []
    for sentence in split_sentences(news.body):
        is_journal, _ = plugin.classify_sentence(sentence)
        if not is_journal:
            continue
        for name, (start, end) in plugin.extract_journals(sentence):
            journals.append(sentence[start:end])
            canonical.append(name)
    entities = plugin.extract_entities(news.body)
    return ExtractedMetadata(
        authors=_dedupe(m.surface for m in entities if m.kind == PERSON),
        affiliations=_dedupe(m.surface for m in entities if m.kind == ORG),
        journals=_dedupe(journals),
        canonical_journals=_dedupe(canonical),
        title=news.title,
        content_prefix=content_prefix(news.body),
    )


def query_from_metadata(
    meta: ExtractedMetadata, enabled_kinds: AbstractSet[str], news_date=None
) -> Query:
    unknown = set(enabled_kinds) - set(KINDS)
    if unknown:
        raise ValueError(f"unknown subquery kinds: {sorted(unknown)}")
    texts = {
        "au": " ".join(meta.authors),
        "jo": " ".join(meta.journals),
        "af": " ".join(meta.affiliations),
        "ti": meta.title,
        "co": meta.content_prefix,
    }
    query = Query({kind: tokenize(texts[kind]) for kind in KINDS if kind in enabled_kinds}, news_date)
    if query.is_empty():
        raise EmptyQueryError()
    return query


def build_query(
    news: NewsArticle,
    gazetteer: JournalGazetteer,
    plugin: Optional[ExtractorPlugin] = None,
    enabled_kinds: AbstractSet[str] = frozenset(KINDS),
) -> Query:
    meta = extract_metadata(news, gazetteer, plugin)
    return query_from_metadata(meta, enabled_kinds, news.release_date)
