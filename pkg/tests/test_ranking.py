"""
Tests for BM25 scoring, date decay, weighted combination and search
"""

import datetime as dt
import math
import random
import sys

import pytest

from tests import make_paper
from Linker.Config import KINDS, DecayConfig, SearchConfig
from Linker.Errors import EmptyQueryError, PaperLookupError
from Linker.Index import Field, build_index
from Linker.Ranking import (
    Query,
    bm25_score,
    brute_force_search,
    date_score,
    idf,
    idf_value,
    search,
    search_candidates,
    search_with_stats,
    term_score,
    weighted_score,
)

NEWS_DATE = dt.date(2020, 3, 10)

FIRST_NAMES = ["Ann", "Bo", "Carl", "Dana", "Eli", "Fay", "Gus", "Hana", "Ivo", "Jun"]
LAST_NAMES = ["Lee", "Kim", "Novak", "Okafor", "Petrov", "Quinn", "Rossi", "Sato", "Tran", "Umar",
              "Vega", "Weiss", "Xu", "Yilmaz", "Zhou", "Berg", "Costa", "Dietz", "Engel", "Fox"]
WORDS = [f"term{i}" for i in range(150)] + ["the", "of", "and", "in", "study", "risk"]
JOURNALS = ["Alpha Letters", "Beta Reviews", "Gamma Journal", "Delta Reports", "Epsilon Medicine"]
PLACES = ["University of Leeds", "Karolinska Institute", "Mayo Clinic", "Tokyo Medical Center", "Oxford College"]


def _day(rng, start=dt.date(2018, 1, 1), span=1000):
    return (start + dt.timedelta(days=rng.randint(0, span))).isoformat()


def random_corpus(rng, n):
    records = []
    for i in range(n):
        authors = [f"{rng.choice(FIRST_NAMES)} {rng.choice(LAST_NAMES)}" for _ in range(rng.randint(0, 13))]
        records.append(make_paper(
            f"R{i:04d}",
            title=" ".join(rng.choice(WORDS) for _ in range(rng.randint(0, 12))),
            abstract=" ".join(rng.choice(WORDS) for _ in range(rng.randint(0, 60))),
            journal_name=rng.choice(JOURNALS),
            journal_issn=None,
            journal_aliases=rng.sample(["Alp Lett", "Bet Rev", "Gam J"], rng.randint(0, 2)),
            authors=authors,
            affiliations=rng.sample(PLACES, rng.randint(0, 3)),
            dates={"online_pub": _day(rng)},
        ))
    return records


def random_query(rng):
    pools = {
        "au": [w.lower() for w in FIRST_NAMES + LAST_NAMES] + ["unseenname"],
        "jo": ["alpha", "letters", "beta", "reviews", "gamma", "journal", "alp", "lett", "gam", "j"],
        "af": ["university", "of", "leeds", "karolinska", "institute", "mayo", "clinic", "tokyo"],
        "ti": WORDS + ["unseenword"],
        "co": WORDS + [w.lower() for w in LAST_NAMES],
    }
    texts = {}
    for kind in rng.sample(KINDS, rng.randint(1, 5)):
        texts[kind] = " ".join(rng.choice(pools[kind]) for _ in range(rng.randint(1, 30 if kind == "co" else 6)))
    news_date = dt.date.fromisoformat(_day(rng)) if rng.random() < 0.9 else None
    return Query.from_text(news_date, **texts)


def random_config(rng):
    return SearchConfig(
        k1=rng.choice([0.0, 0.5, 1.2, 2.0]),
        b_per_field={f.value: rng.choice([0.0, 0.3, 0.75, 1.0]) for f in Field},
        weights={k: rng.choice([0.0, 0.2, 0.3, 1.0, 1.5]) for k in KINDS},
        decay=DecayConfig(enabled=rng.random() < 0.7, offset_days=rng.randint(0, 10)),
        top_k=rng.randint(1, 60),
    )


class TestIdf:
    """Test the IDF formula"""

    def test_single_document(self):
        """Test N=1, n=1"""
        assert idf_value(1, 1) == pytest.approx(0.287682, rel=1e-6)

    def test_unseen_term(self):
        """Test N=1000, n=0 gives the maximal IDF"""
        assert idf_value(1000, 0) == pytest.approx(math.log(2002), rel=1e-12)
        assert idf_value(1000, 0) > idf_value(1000, 1)

    def test_from_index(self, sample_index):
        """Test IDF read from the index statistics"""
        assert idf(sample_index, Field.AUTHORS, "tanaka") == pytest.approx(math.log(1.6), rel=1e-12)
        assert idf(sample_index, Field.AUTHORS, "tanaka") == idf(sample_index, Field.AUTHORS, "lopez")

    def test_always_positive(self):
        """Test IDF stays positive even when every document has the term"""
        assert all(idf_value(n, n) > 0 for n in (1, 10, 1000))


class TestBM25:
    """Test per-field BM25"""

    def test_no_overlap(self, sample_index):
        """Test zero score without overlapping terms"""
        assert bm25_score(sample_index, Field.AUTHORS, ["nobody"], "P1", 1.2, 0.75) == 0.0

    def test_single_document_reduces_to_idf(self):
        """Test that tf=1 and |D|=avgdl gives exactly IDF"""
        index = build_index([make_paper("A", authors=["Ann Lee"])])
        assert bm25_score(index, Field.AUTHORS, ["lee"], "A", 1.2, 0.75) == pytest.approx(0.287682, rel=1e-6)

    def test_duplicate_query_tokens(self, sample_index):
        """Test each query token is its own summand"""
        once = bm25_score(sample_index, Field.TITLE, ["antibiotic"], "P1", 1.2, 0.75)
        assert bm25_score(sample_index, Field.TITLE, ["antibiotic", "antibiotic"], "P1", 1.2, 0.75) == 2 * once

    def test_unknown_paper(self, sample_index):
        """Test an unknown paper id"""
        with pytest.raises(PaperLookupError):
            bm25_score(sample_index, Field.TITLE, ["antibiotic"], "missing", 1.2, 0.75)

    def test_b_zero_ignores_length(self):
        """Test b=0 scores equal the |D|=avgdl score for any length"""
        index = build_index([
            make_paper("A", authors=["Ann Lee"]),
            make_paper("B", authors=["Ann Lee", "Bo Kim", "Carl Novak", "Dana Okafor"]),
        ])
        n_docs, avgdl = index.stats(Field.AUTHORS)
        expected = term_score(idf_value(n_docs, 2), 1, avgdl, avgdl, 1.2, 0.0)
        for pid in ("A", "B"):
            assert bm25_score(index, Field.AUTHORS, ["lee"], pid, 1.2, 0.0) == expected

    def test_b_zero_appending_authors(self):
        """Test that appending non-matching authors leaves the b=0 author score unchanged"""
        base = [make_paper("A", authors=["Ann Lee", "Bo Kim"]), make_paper("B", authors=["Eli Fox"])]
        longer = [make_paper("A", authors=["Ann Lee", "Bo Kim", "Gus Rossi", "Hana Sato"]), base[1]]
        before = bm25_score(build_index(base), Field.AUTHORS, ["lee", "kim"], "A", 1.2, 0.0)
        after = bm25_score(build_index(longer), Field.AUTHORS, ["lee", "kim"], "A", 1.2, 0.0)
        assert before == after

    @pytest.mark.parametrize("seed", range(5))
    def test_term_contribution_bound(self, seed):
        """Test each term contributes at most IDF*(k1+1) and grows with tf"""
        rng = random.Random(seed)
        for _ in range(200):
            value = rng.uniform(0.01, 8.0)
            k1 = rng.uniform(0.0, 3.0)
            b = rng.uniform(0.0, 1.0)
            dl = rng.randint(1, 200)
            avgdl = rng.uniform(1.0, 100.0)
            tf = rng.randint(1, 50)
            score = term_score(value, tf, dl, avgdl, k1, b)
            assert 0 < score <= value * (k1 + 1) * (1 + 1e-12)
            assert term_score(value, tf + 1, dl, avgdl, k1, b) >= score


class TestDateScore:
    """Test the exponential date decay"""

    cfg = DecayConfig()

    def _score(self, delta_days):
        return date_score(NEWS_DATE + dt.timedelta(days=delta_days), NEWS_DATE, self.cfg)

    @pytest.mark.parametrize("delta", [0, 3, -3, 7, -7])
    def test_flat_inside_offset(self, delta):
        """Test score 1 within the offset window"""
        assert self._score(delta) == 1.0

    def test_half_life(self):
        """Test 0.5 at 187 days and 0.25 at 367 days"""
        assert self._score(187) == pytest.approx(0.5, rel=1e-12)
        assert self._score(-187) == pytest.approx(0.5, rel=1e-12)
        assert self._score(367) == pytest.approx(0.25, rel=1e-12)

    @pytest.mark.parametrize("m", [0, 1, 2, 3, 4])
    def test_half_life_law(self, m):
        """Test date_score(offset + m*half_life) = decay^m"""
        cfg = DecayConfig(offset_days=3, half_life_days=90, decay_at_half_life=0.7)
        paper = NEWS_DATE + dt.timedelta(days=3 + 90 * m)
        assert date_score(paper, NEWS_DATE, cfg) == pytest.approx(0.7 ** m, rel=1e-12)

    def test_symmetric(self):
        """Test symmetry in paper and news dates"""
        other = NEWS_DATE + dt.timedelta(days=250)
        assert date_score(other, NEWS_DATE, self.cfg) == date_score(NEWS_DATE, other, self.cfg)

    def test_strictly_decreasing_beyond_offset(self):
        """Test strict decrease outside the offset window"""
        scores = [self._score(d) for d in range(7, 800)]
        assert all(a > b for a, b in zip(scores, scores[1:]))

    @pytest.mark.parametrize("delta", [160, 400, 5000])
    def test_steep_decay_stays_positive(self, delta):
        """Test a steep decay never underflows to zero"""
        cfg = DecayConfig(offset_days=0, half_life_days=1, decay_at_half_life=0.01)
        score = date_score(NEWS_DATE + dt.timedelta(days=delta), NEWS_DATE, cfg)
        assert 0.0 < score <= 1.0
        assert score >= sys.float_info.min

    def test_disabled(self):
        """Test that a disabled decay always scores 1"""
        assert date_score(NEWS_DATE - dt.timedelta(days=900), NEWS_DATE, DecayConfig(enabled=False)) == 1.0

    def test_missing_news_date(self):
        """Test that a missing news date scores 1"""
        assert date_score(NEWS_DATE, None, self.cfg) == 1.0

    @pytest.mark.parametrize("bad", [{"offset_days": -1}, {"half_life_days": 0},
                                     {"decay_at_half_life": 1.0}, {"decay_at_half_life": 0.0}])
    def test_invalid_config(self, bad):
        """Test DecayConfig bounds"""
        with pytest.raises(ValueError):
            DecayConfig(**bad)


class TestWeightedScore:
    """Test the weighted combination"""

    def test_paper_weights(self):
        """Test au=2, jo=4 under default weights"""
        assert weighted_score({"au": 2.0, "jo": 4.0}, SearchConfig().weights) == 8.0

    def test_all_zero_weights(self):
        """Test zero weights give zero"""
        assert weighted_score({"au": 2.0, "co": 9.0}, {k: 0.0 for k in KINDS}) == 0.0

    def test_single_weight(self):
        """Test linearity with one nonzero weight"""
        assert weighted_score({"au": 2.0, "ti": 3.0}, {"ti": 0.3}) == 0.3 * 3.0


class TestSearch:
    """Test search over the inverted index"""

    def test_empty_query(self, sample_index):
        """Test that an all-empty query is an input error"""
        with pytest.raises(EmptyQueryError):
            search(sample_index, Query.from_text(NEWS_DATE, au="", jo="  "), SearchConfig())

    def test_final_score_is_product(self, sample_index):
        """Test final = date * weighted and 1-based ranks"""
        query = Query.from_text(NEWS_DATE, au="Maria Lopez", jo="J Clin Microbiol", ti="antibiotic")
        hits = search(sample_index, query, SearchConfig())
        assert [h.rank for h in hits] == list(range(1, len(hits) + 1))
        for hit in hits:
            assert hit.final_score == pytest.approx(hit.date_score * hit.weighted_score, rel=1e-12)
            assert 0 < hit.date_score <= 1
        assert hits[0].paper_id == "P1"
        assert [h.final_score for h in hits] == sorted((h.final_score for h in hits), reverse=True)

    def test_journal_only_weights(self, sample_index):
        """Test ranking by journal BM25 times date score when only jo is weighted"""
        cfg = SearchConfig(weights={"au": 0, "jo": 1, "af": 0, "ti": 0, "co": 0}, top_k=10)
        query = Query.from_text(NEWS_DATE, au="Kenji Tanaka", jo="Journal of Clinical Microbiology")
        hits = search(sample_index, query, cfg)
        expected = {
            pid: bm25_score(sample_index, Field.JOURNAL, query.tokens("jo"), pid, cfg.k1, cfg.b_for(Field.JOURNAL))
            * date_score(sample_index.earliest_date(pid), NEWS_DATE, cfg.decay)
            for pid in search_candidates(sample_index, query)
        }
        assert [h.paper_id for h in hits] == sorted(expected, key=lambda pid: (-expected[pid], pid))

    def test_nearer_paper_first(self):
        """Test two identical papers 0 and 200 days from the news date"""
        index = build_index([
            make_paper("A", dates={"online_pub": (NEWS_DATE - dt.timedelta(days=200)).isoformat()}),
            make_paper("B", dates={"online_pub": NEWS_DATE.isoformat()}),
        ])
        hits = search(index, Query.from_text(NEWS_DATE, au="Maria Lopez"), SearchConfig())
        assert [h.paper_id for h in hits] == ["B", "A"]

    def test_ties_by_paper_id(self):
        """Test identical scores rank by ascending paper id"""
        index = build_index([make_paper(pid) for pid in ("C", "A", "B")])
        hits = search(index, Query.from_text(NEWS_DATE, au="Maria Lopez"), SearchConfig())
        assert [h.paper_id for h in hits] == ["A", "B", "C"]

    def test_threshold_above_max(self, sample_index):
        """Test that a threshold above every score returns nothing"""
        query = Query.from_text(NEWS_DATE, au="Maria Lopez")
        top = search(sample_index, query, SearchConfig())[0].final_score
        assert search(sample_index, query, SearchConfig(min_score_threshold=top * 2)) == []

    def test_top_k(self, sample_index):
        """Test that at most top_k hits are returned"""
        query = Query.from_text(NEWS_DATE, co="antibiotic microbiome sleep")
        assert len(search(sample_index, query, SearchConfig(top_k=1))) == 1

    def test_editorial_b_zero(self):
        """Test a one-author editorial against a 13-author paper sharing one name"""
        coauthors = [f"{FIRST_NAMES[i % 9 + 1]} {LAST_NAMES[i + 1]}" for i in range(12)]
        index = build_index([
            make_paper("EDITORIAL", authors=["Ann Lee"]),
            make_paper("RESEARCH", authors=["Ann Lee"] + coauthors),
            make_paper("OTHER", authors=["Eli Fox", "Fay Fox"]),
        ])
        query = Query.from_text(NEWS_DATE, au="Ann Lee")
        scores = {}
        for b in (0.0, 0.75):
            cfg = SearchConfig(b_per_field={"authors": b}, weights={"au": 1.0})
            scores[b] = {h.paper_id: h.field_scores["au"] for h in search(index, query, cfg)}
        assert scores[0.0]["EDITORIAL"] == scores[0.0]["RESEARCH"]
        assert scores[0.75]["EDITORIAL"] > scores[0.75]["RESEARCH"]

    def test_alias_equivalence(self):
        """Test a jo query through an alias ranks like the canonical name"""
        index = build_index([
            make_paper("A", journal_name="Alpha Letters", journal_aliases=["Alp Lett"], journal_issn=None),
            make_paper("B", journal_name="Beta Reviews", journal_aliases=["Bet Rev"], journal_issn=None,
                       authors=["Priya Sharma"]),
        ])
        cfg = SearchConfig()
        by_alias = search(index, Query.from_text(NEWS_DATE, au="Maria Lopez", jo="Alp Lett"), cfg)
        by_name = search(index, Query.from_text(NEWS_DATE, au="Maria Lopez", jo="Alpha Letters"), cfg)
        assert [h.paper_id for h in by_alias] == [h.paper_id for h in by_name]
        assert by_alias[0].final_score == pytest.approx(by_name[0].final_score, rel=1e-12)

    def test_weight_scaling_invariance(self, sample_index):
        """Test that scaling every weight keeps the order"""
        query = Query.from_text(NEWS_DATE, au="Maria Lopez Kenji Tanaka", co="antibiotic microbiome")
        base = SearchConfig()
        scaled = SearchConfig(weights={k: 4.0 * w for k, w in base.weights.items()})
        assert [h.paper_id for h in search(sample_index, query, base)] == \
               [h.paper_id for h in search(sample_index, query, scaled)]

    def test_deterministic(self, sample_index):
        """Test repeated searches are identical"""
        query = Query.from_text(NEWS_DATE, au="Maria Lopez", ti="antibiotic stewardship")
        assert search(sample_index, query, SearchConfig()) == search(sample_index, query, SearchConfig())

    def test_permutation_invariance(self):
        """Test that corpus order does not change results"""
        rng = random.Random(11)
        records = random_corpus(rng, 120)
        query = random_query(rng)
        shuffled = list(records)
        rng.shuffle(shuffled)
        cfg = SearchConfig(top_k=50)
        assert search(build_index(records), query, cfg) == search(build_index(shuffled), query, cfg)

    def test_stats(self, sample_index):
        """Test candidate and postings counters"""
        query = Query.from_text(NEWS_DATE, au="Kenji Tanaka")
        hits, stats = search_with_stats(sample_index, query, SearchConfig())
        assert stats.candidates == 2
        # kenji -> P1, P3; tanaka -> P1, P3
        assert stats.postings_scanned == 4
        assert {h.paper_id for h in hits} == {"P1", "P3"}


class TestBruteForceOracle:
    """Test the index against direct scoring of every record"""

    def test_empty_corpus(self):
        """Test an empty corpus gives no hits"""
        assert brute_force_search([], Query.from_text(NEWS_DATE, au="Ann Lee"), SearchConfig()) == []

    def test_single_match(self):
        """Test a single matching record ranks first"""
        hits = brute_force_search([make_paper("A")], Query.from_text(NEWS_DATE, au="Lopez"), SearchConfig())
        assert [(h.paper_id, h.rank) for h in hits] == [("A", 1)]

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", range(50))
    def test_oracle_equivalence(self, seed):
        """Test hit-for-hit equality on random corpora and queries"""
        rng = random.Random(1000 + seed)
        records = random_corpus(rng, rng.randint(100, 1000))
        index = build_index(records)
        for _ in range(20):
            query = random_query(rng)
            if query.is_empty():
                continue
            cfg = random_config(rng)
            expected = brute_force_search(records, query, cfg)
            actual = search(index, query, cfg)
            assert [h.paper_id for h in actual] == [h.paper_id for h in expected]
            for a, e in zip(actual, expected):
                assert a.final_score == pytest.approx(e.final_score, rel=1e-9, abs=1e-300)
                assert a.field_scores == pytest.approx(e.field_scores, rel=1e-9)
