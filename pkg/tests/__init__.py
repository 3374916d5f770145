"""
Test configuration and utilities
"""

import json
import os
import sys
import tempfile

# Add the parent directory to the path so we can import our modules
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from Linker.Corpus import NewsArticle, PaperRecord  # noqa: E402


def create_temp_file(content, suffix=".json"):
    """Create a temporary file with given content"""
    temp_file = tempfile.NamedTemporaryFile(mode="w", suffix=suffix, delete=False, encoding="utf-8")
    temp_file.write(content)
    temp_file.close()
    return temp_file.name


def create_temp_jsonl_file(rows, suffix=".jsonl"):
    """Create a temporary JSON Lines file, one object per row"""
    return create_temp_file("\n".join(json.dumps(r) for r in rows) + "\n", suffix=suffix)


def cleanup_temp_file(file_path):
    """Clean up temporary file"""
    try:
        os.unlink(file_path)
    except OSError:
        pass


def paper_dict(paper_id="P1", **overrides):
    """Raw paper record as it appears in a papers file"""
    data = {
        "paper_id": paper_id,
        "doi": f"10.1000/{paper_id.lower()}",
        "title": "Gut microbiome shifts after antibiotic exposure",
        "abstract": "We measured microbiome diversity in infants after antibiotic exposure.",
        "journal_name": "Journal of Clinical Microbiology",
        "journal_issn": "0095-1137",
        "journal_aliases": [],
        "authors": ["Maria Lopez", "Kenji Tanaka"],
        "affiliations": ["University of Leeds"],
        "dates": {"online_pub": "2020-03-02", "journal_pub": "2020-05-01"},
    }
    data.update(overrides)
    return data


def make_paper(paper_id="P1", **overrides):
    return PaperRecord.model_validate(paper_dict(paper_id, **overrides))


def make_news(body, title="", release_date="2020-03-10", news_id="N1", gold_paper_id=None):
    return NewsArticle(news_id=news_id, title=title, body=body,
                       release_date=release_date, gold_paper_id=gold_paper_id)


SAMPLE_PAPERS = [
    paper_dict("P1"),
    paper_dict(
        "P2",
        title="Sleep duration and cardiovascular risk in older adults",
        abstract="A cohort of older adults was followed for sleep duration and heart disease.",
        journal_name="Annals of Internal Medicine",
        journal_issn="0003-4819",
        authors=["Priya Sharma", "Lars Nilsson", "Maria Lopez"],
        affiliations=["Karolinska Institute"],
        dates={"journal_pub": "2019-11-15", "pubmed_pub": "2019-11-20"},
    ),
    paper_dict(
        "P3",
        title="Antibiotic stewardship in pediatric wards",
        abstract="Stewardship programs reduced antibiotic prescriptions in pediatric wards.",
        authors=["Kenji Tanaka"],
        affiliations=["Leeds General Infirmary"],
        dates={"online_pub": "2018-06-01"},
    ),
]

SAMPLE_ALIAS_LINES = [
    "# ISSN\tcanonical name\taliases",
    "0095-1137\tJournal of Clinical Microbiology\tJ Clin Microbiol",
    "0003-4819\tAnnals of Internal Medicine\tAnn Intern Med",
]

SAMPLE_NEWS_BODY = (
    "Babies given antibiotics show lasting changes in their gut bacteria, a new study finds. "
    "The findings were published in J Clin Microbiol. "
    "\"We saw the microbiome recover only slowly,\" said Dr. Maria Lopez of the University of Leeds. "
    "Co-author Kenji Tanaka said antibiotic exposure early in life matters."
)
