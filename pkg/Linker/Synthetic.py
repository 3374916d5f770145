"""Seeded synthetic benchmark: papers, paired news articles and a journal
alias table.

Every news article names 2-4 authors of its gold paper with speech or
honorific cues, one of their affiliations, the journal (every other article
through its abbreviation), a paraphrased title and content drawn from the
paper's topic terms. Distractors come in three shapes:

* same-lab papers sharing 1-2 of the named authors and a home journal of the
  lab, published 60-400 days away from the gold paper;
* companion papers sharing every named author and the journal, published
  within 20 days of the gold paper, on a different topic;
* single-author editorials by a named author in the gold journal.

The rest of the corpus is filler from random labs.
"""

import datetime as dt
import logging
import random
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from .Corpus import (
    JournalAliasTable,
    NewsArticle,
    PaperRecord,
    PubDate,
    PublicationDates,
    serialize_news_article,
    serialize_paper_record,
    write_lines,
)
from .Errors import ConfigError
from .Extraction import CUE_WORDS, ORG_CUES

logger = logging.getLogger(__name__)

DEFAULT_SEED = 20210607
DEFAULT_N_PAPERS = 500
DEFAULT_N_NEWS = 200

N_JOURNALS = 25
N_SURNAMES = 600
N_TOPIC_TERMS = 3000
TERMS_PER_PAPER = 20
LAB_SIZE = (8, 12)
COMPANION_SHARE = 0.15
EDITORIAL_SHARE = 0.2

GIVEN_NAMES = [
    "Adele", "Amara", "Anders", "Beatriz", "Bruno", "Camila", "Chen", "Dalia", "Dmitri", "Elena",
    "Emeka", "Farah", "Felix", "Greta", "Hana", "Hugo", "Ines", "Ivan", "Jonas", "Julia",
    "Kenji", "Keira", "Lars", "Leila", "Lucia", "Marco", "Maren", "Mateo", "Mina", "Nadia",
    "Nikolai", "Noor", "Olga", "Omar", "Paulo", "Priya", "Rafael", "Rania", "Ruth", "Sami",
    "Sofia", "Stefan", "Talia", "Tariq", "Ulla", "Vera", "Viktor", "Wei", "Yara", "Yusuf",
    "Zofia", "Anika", "Bastian", "Cyrus", "Delphine", "Esther", "Gideon", "Helga", "Imran", "Jorge",
]
_ONSETS = ["b", "br", "c", "ch", "d", "dr", "f", "g", "gr", "h", "j", "k", "kr", "l", "m", "n",
           "p", "pr", "r", "s", "sh", "st", "t", "tr", "v", "w", "z"]
_VOWELS = ["a", "e", "i", "o", "u", "ai", "ea", "ou"]
_CODAS = ["", "n", "r", "l", "s", "th", "nd", "rk", "m", "x", "v"]
_SURNAME_ENDINGS = ["", "", "son", "berg", "ova", "ez", "ski", "ani", "ford"]
_TERM_ENDINGS = ["ase", "in", "ol", "ide", "ine", "osis", "ate", "ium", "ene", "ax"]

# (full word, abbreviation); every abbreviation differs from its word
_JOURNAL_PREFIXES = [("Annals", "Ann"), ("Journal", "J"), ("Archives", "Arch"), ("Bulletin", "Bull")]
_JOURNAL_ADJECTIVES = [("Clinical", "Clin"), ("Experimental", "Exp"), ("Molecular", "Mol"),
                       ("Translational", "Transl"), ("Applied", "Appl"), ("Comparative", "Comp")]
_JOURNAL_SUBJECTS = [("Oncology", "Oncol"), ("Neurology", "Neurol"), ("Cardiology", "Cardiol"),
                     ("Immunology", "Immunol"), ("Genetics", "Genet"), ("Epidemiology", "Epidemiol"),
                     ("Pediatrics", "Pediatr"), ("Endocrinology", "Endocrinol"),
                     ("Microbiology", "Microbiol"), ("Nutrition", "Nutr"), ("Hematology", "Hematol"),
                     ("Virology", "Virol"), ("Dermatology", "Dermatol")]
_INSTITUTION_TEMPLATES = ["University of {}", "{} Institute of Technology", "{} General Hospital",
                          "{} Medical Center", "{} Research Institute", "{} Cancer Center"]

COMMON_WORDS = ["patients", "results", "risk", "increased", "reduced", "levels", "effect",
                "associated", "analysis", "data", "treatment", "model", "cohort", "response",
                "expression", "samples", "significant", "changes", "participants", "outcomes"]
_TITLE_CONNECTORS = ["and", "in", "of", "with", "during", "after"]
_NEWS_TITLE_WORDS = ["new", "study", "finds", "researchers", "link", "shows", "may", "scientists", "research"]
_ROLES = ["professor of medicine", "senior researcher", "associate professor", "research scientist",
          "principal investigator"]
_OUTLETS = ["Daily Herald", "Science Wire", "Health News Today", "The Morning Post", "Metro Tribune"]

_RESERVED = set(COMMON_WORDS) | set(CUE_WORDS) | set(ORG_CUES) | {
    w.lower() for pairs in (_JOURNAL_PREFIXES, _JOURNAL_ADJECTIVES, _JOURNAL_SUBJECTS) for p in pairs for w in p
}


@dataclass(frozen=True)
class SyntheticJournal:
    name: str
    alias: str
    issn: str


@dataclass
class _Lab:
    members: List[str]
    affiliation: str
    journals: List[SyntheticJournal]


@dataclass
class _PaperPlan:
    title: str
    abstract: str
    journal: SyntheticJournal
    authors: List[str]
    affiliations: List[str]
    earliest: dt.date
    topic: List[str]
    gold_for: Optional[int] = None


@dataclass
class Benchmark:
    seed: int
    papers: List[PaperRecord]
    news: List[NewsArticle]
    journals: List[SyntheticJournal]
    aliases: JournalAliasTable = dc_field(default_factory=JournalAliasTable)

    def alias_lines(self) -> List[str]:
        lines = ["# ISSN\tcanonical name\taliases"]
        lines.extend(f"{j.issn}\t{j.name}\t{j.alias}" for j in self.journals)
        return lines

    def write(self, out_dir: Union[str, Path]) -> Dict[str, Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = {"papers": out / "papers.jsonl", "news": out / "news.jsonl", "aliases": out / "journals.tsv"}
        write_lines(paths["papers"], (serialize_paper_record(p) for p in self.papers))
        write_lines(paths["news"], (serialize_news_article(a) for a in self.news))
        write_lines(paths["aliases"], self.alias_lines())
        logger.info(f"Wrote synthetic benchmark (seed {self.seed}) to {out}")
        return paths


def _issn(rng: random.Random) -> str:
    digits = [rng.randint(0, 9) for _ in range(7)]
    check = (11 - sum(d * w for d, w in zip(digits, range(8, 1, -1))) % 11) % 11
    tail = "X" if check == 10 else str(check)
    return "".join(map(str, digits[:4])) + "-" + "".join(map(str, digits[4:])) + tail


def _syllable(rng: random.Random) -> str:
    return rng.choice(_ONSETS) + rng.choice(_VOWELS) + rng.choice(_CODAS)


def _unique_words(rng: random.Random, count: int, make) -> List[str]:
    seen = set()
    words: List[str] = []
    while len(words) < count:
        word = make(rng)
        if len(word) < 4 or word.lower() in _RESERVED or word in seen:
            continue
        seen.add(word)
        words.append(word)
    return words


def _surname(rng: random.Random) -> str:
    return ("".join(_syllable(rng) for _ in range(rng.randint(2, 3))) + rng.choice(_SURNAME_ENDINGS)).capitalize()


def _topic_term(rng: random.Random) -> str:
    return "".join(_syllable(rng) for _ in range(rng.randint(1, 2))) + rng.choice(_TERM_ENDINGS)


def _journals(rng: random.Random) -> List[SyntheticJournal]:
    combos = [(p, a, s) for p in _JOURNAL_PREFIXES for a in _JOURNAL_ADJECTIVES for s in _JOURNAL_SUBJECTS]
    journals = []
    for prefix, adjective, subject in rng.sample(combos, N_JOURNALS):
        journals.append(SyntheticJournal(
            name=f"{prefix[0]} of {adjective[0]} {subject[0]}",
            alias=f"{prefix[1]} {adjective[1]} {subject[1]}",
            issn=_issn(rng),
        ))
    return journals


def _sentence(words: List[str]) -> str:
    text = " ".join(words)
    return text[:1].upper() + text[1:] + "."


def _title(rng: random.Random, topic: List[str]) -> str:
    terms = rng.sample(topic, rng.randint(3, 5))
    parts = [terms[0]]
    for term in terms[1:]:
        if rng.random() < 0.7:
            parts.append(rng.choice(_TITLE_CONNECTORS))
        parts.append(term)
    return _sentence(parts)[:-1]


def _abstract(rng: random.Random, topic: List[str]) -> str:
    sentences = []
    for _ in range(rng.randint(4, 6)):
        words = [rng.choice(topic) if rng.random() < 0.6 else rng.choice(COMMON_WORDS)
                 for _ in range(rng.randint(10, 16))]
        sentences.append(_sentence(words))
    return " ".join(sentences)


def _dates(rng: random.Random, earliest: dt.date) -> PublicationDates:
    """Dates whose resolved earliest date is exactly ``earliest``."""
    accepted = PubDate(date=earliest - dt.timedelta(days=rng.randint(20, 150))) if rng.random() < 0.5 else None
    if rng.random() < 0.75:
        journal = earliest + dt.timedelta(days=rng.randint(10, 120))
        if rng.random() < 0.1:
            journal_pub = PubDate(date=dt.date(journal.year, 1, 1), placeholder=True)
        else:
            journal_pub = PubDate(date=journal)
        return PublicationDates(
            online_pub=PubDate(date=earliest),
            journal_pub=journal_pub,
            pubmed_pub=PubDate(date=journal + dt.timedelta(days=rng.randint(0, 15))),
            accepted=accepted,
        )
    return PublicationDates(
        journal_pub=PubDate(date=earliest),
        pubmed_pub=PubDate(date=earliest + dt.timedelta(days=rng.randint(0, 20))),
        accepted=accepted,
    )


def _random_date(rng: random.Random) -> dt.date:
    return dt.date(2013, 1, 1) + dt.timedelta(days=rng.randint(0, 7 * 365))


def _shifted(rng: random.Random, date: dt.date, low: int, high: int) -> dt.date:
    return date + dt.timedelta(days=rng.choice((-1, 1)) * rng.randint(low, high))


class _Generator:
    def __init__(self, seed: int):
        self.rng = random.Random(seed)
        rng = self.rng
        self.journals = _journals(rng)
        self.surnames = _unique_words(rng, N_SURNAMES, _surname)
        self.terms = _unique_words(rng, N_TOPIC_TERMS, _topic_term)
        places = _unique_words(rng, 80, lambda r: "".join(_syllable(r) for _ in range(2)).capitalize())
        self.institutions = [rng.choice(_INSTITUTION_TEMPLATES).format(place) for place in places]
        self._names_used: set = set()

    def person(self) -> str:
        while True:
            name = f"{self.rng.choice(GIVEN_NAMES)} {self.rng.choice(self.surnames)}"
            if name not in self._names_used:
                self._names_used.add(name)
                return name

    def lab(self) -> _Lab:
        return _Lab(
            members=[self.person() for _ in range(self.rng.randint(*LAB_SIZE))],
            affiliation=self.rng.choice(self.institutions),
            journals=self.rng.sample(self.journals, 2),
        )

    def plan(self, journal: SyntheticJournal, authors: List[str], affiliations: List[str],
             earliest: dt.date, gold_for: Optional[int] = None) -> _PaperPlan:
        topic = self.rng.sample(self.terms, TERMS_PER_PAPER)
        return _PaperPlan(
            title=_title(self.rng, topic),
            abstract=_abstract(self.rng, topic),
            journal=journal,
            authors=authors,
            affiliations=affiliations,
            earliest=earliest,
            topic=topic,
            gold_for=gold_for,
        )


def _news_title(rng: random.Random, plan: _PaperPlan) -> str:
    title_terms = [w for w in plan.title.lower().split() if w in plan.topic]
    kept = [t for t in title_terms if rng.random() < 0.7] or title_terms[:2]
    words = kept + rng.sample(_NEWS_TITLE_WORDS, rng.randint(1, 3))
    rng.shuffle(words)
    return _sentence(words)[:-1]


def _news_body(rng: random.Random, plan: _PaperPlan, mentioned: List[str], journal_surface: str,
               expert: str) -> str:
    t = lambda: rng.choice(plan.topic)  # noqa: E731
    lead, others = mentioned[0], mentioned[1:]
    journal_sentence = rng.choice([
        f"The findings were published in {journal_surface}.",
        f"The study, which appears in {journal_surface}, examined {rng.randint(40, 900)} {t()} samples.",
        f"Writing in {journal_surface}, the team reported that {t()} levels rose after {t()} exposure.",
        f"The results were reported this week in {journal_surface}.",
    ])
    lead_sentence = rng.choice([
        f"\"Our results show that {t()} strongly affects {t()},\" said Dr. {lead} of the {plan.affiliations[0]}.",
        f"Dr. {lead}, a {rng.choice(_ROLES)} at {plan.affiliations[0]}, led the research.",
    ])
    if len(others) == 1:
        coauthors = f"Co-author Dr. {others[0]} added that {t()} and {t()} deserve closer attention."
    else:
        coauthors = f"Co-authors {', '.join(others[:-1])} and {others[-1]} also contributed to the work."
    content = [
        _sentence(["the", "researchers", "examined"] + [t() if rng.random() < 0.7 else rng.choice(COMMON_WORDS)
                                                         for _ in range(rng.randint(8, 14))])
        for _ in range(rng.randint(3, 5))
    ]
    expert_sentence = (
        f"\"This is an important step toward understanding {t()},\" said Dr. {expert}, "
        f"who was not involved in the research."
    )
    opening = f"A new study suggests that {t()} may influence {t()} in {rng.choice(COMMON_WORDS)}."
    body = [opening, journal_sentence, lead_sentence] + content[:2] + [coauthors, expert_sentence] + content[2:]
    return " ".join(body)


def generate_benchmark(
    seed: int = DEFAULT_SEED, n_papers: int = DEFAULT_N_PAPERS, n_news: int = DEFAULT_N_NEWS
) -> Benchmark:
    """Deterministic for a given (seed, n_papers, n_news)."""
    if n_news < 1 or n_papers < n_news:
        raise ConfigError(f"need 1 <= n_news <= n_papers, got n_papers={n_papers}, n_news={n_news}")
    gen = _Generator(seed)
    rng = gen.rng
    labs = [gen.lab() for _ in range(max(1, n_news // 2))]
    experts = [gen.person() for _ in range(60)]

    plans: List[_PaperPlan] = []
    news_plans: List[Tuple[_PaperPlan, List[str], _Lab]] = []
    for i in range(n_news):
        lab = labs[i % len(labs)]
        n_mentioned = rng.randint(2, 4)
        core = rng.sample(lab.members, min(len(lab.members), rng.randint(n_mentioned, 7)))
        external = [gen.person() for _ in range(rng.randint(max(0, 4 - len(core)), 6))]
        authors = core + external
        rng.shuffle(authors)
        affiliations = [lab.affiliation] + rng.sample(gen.institutions, rng.randint(0, 2))
        gold = gen.plan(rng.choice(lab.journals), authors, list(dict.fromkeys(affiliations)),
                        _random_date(rng), gold_for=i)
        plans.append(gold)
        news_plans.append((gold, core[:n_mentioned], lab))

    budget = n_papers - n_news
    n_companions = min(budget, round(COMPANION_SHARE * n_news))
    n_editorials = min(budget - n_companions, round(EDITORIAL_SHARE * n_news))
    n_same_lab = min(budget - n_companions - n_editorials, n_news)
    n_fillers = budget - n_companions - n_editorials - n_same_lab

    for gold, mentioned, lab in news_plans[:n_same_lab]:
        shared = rng.sample(mentioned, min(len(mentioned), rng.randint(1, 2)))
        others = [m for m in lab.members if m not in gold.authors]
        authors = shared + rng.sample(others, min(len(others), rng.randint(0, 2)))
        journal = gold.journal if rng.random() < 0.5 else rng.choice(lab.journals)
        plans.append(gen.plan(journal, authors, [lab.affiliation], _shifted(rng, gold.earliest, 60, 400)))
    for gold, mentioned, lab in rng.sample(news_plans, n_companions):
        others = [m for m in lab.members if m not in mentioned]
        authors = list(mentioned) + rng.sample(others, min(len(others), rng.randint(1, 3)))
        plans.append(gen.plan(gold.journal, authors, [lab.affiliation], _shifted(rng, gold.earliest, 0, 20)))
    for gold, mentioned, lab in rng.sample(news_plans, n_editorials):
        plans.append(gen.plan(gold.journal, [rng.choice(mentioned)], [lab.affiliation],
                              _shifted(rng, gold.earliest, 30, 300)))
    for _ in range(n_fillers):
        lab = rng.choice(labs)
        authors = rng.sample(lab.members, rng.randint(2, min(6, len(lab.members))))
        plans.append(gen.plan(rng.choice(lab.journals), authors, [lab.affiliation], _random_date(rng)))

    rng.shuffle(plans)
    papers: List[PaperRecord] = []
    gold_ids: Dict[int, str] = {}
    for n, plan in enumerate(plans, start=1):
        paper_id = f"P{n:05d}"
        if plan.gold_for is not None:
            gold_ids[plan.gold_for] = paper_id
        papers.append(PaperRecord(
            paper_id=paper_id,
            doi=f"10.{5000 + n % 97}/{plan.journal.alias.lower().replace(' ', '.')}.{plan.earliest.year}.{n}",
            title=plan.title,
            abstract=plan.abstract,
            journal_name=plan.journal.name,
            journal_issn=plan.journal.issn,
            authors=plan.authors,
            affiliations=plan.affiliations,
            dates=_dates(rng, plan.earliest),
        ))

    news: List[NewsArticle] = []
    for i, (gold, mentioned, _) in enumerate(news_plans):
        surface = gold.journal.alias if i % 2 else gold.journal.name
        news.append(NewsArticle(
            news_id=f"N{i + 1:04d}",
            source=rng.choice(_OUTLETS),
            title=_news_title(rng, gold),
            body=_news_body(rng, gold, mentioned, surface, rng.choice(experts)),
            release_date=gold.earliest + dt.timedelta(days=rng.randint(0, 30)),
            gold_paper_id=gold_ids[i],
        ))

    table = JournalAliasTable()
    for journal in gen.journals:
        table.add(journal.issn, journal.name, [journal.alias])
    logger.info(f"Generated {len(papers)} papers and {len(news)} news articles (seed {seed})")
    return Benchmark(seed=seed, papers=papers, news=news, journals=gen.journals, aliases=table)
