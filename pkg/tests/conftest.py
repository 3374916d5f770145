"""
Pytest configuration for test suite

This file provides shared fixtures and configuration for all tests.
The synthetic benchmark and its indexes are built once per session.
"""

import os

import pytest

from tests import SAMPLE_ALIAS_LINES, SAMPLE_PAPERS
from Linker.Corpus import expand_journal_aliases, parse_alias_lines, PaperRecord, JournalAliasTable
from Linker.Evaluation import Dataset
from Linker.Extraction import JournalGazetteer
from Linker.Index import build_index
from Linker.Synthetic import generate_benchmark


def pytest_collection_modifyitems(config, items):
    """Skip live-service tests unless NEWSLINK_API_URL points at a running service"""
    if os.environ.get("NEWSLINK_API_URL"):
        return
    skip = pytest.mark.skip(reason="NEWSLINK_API_URL not set")
    for item in items:
        if "integration" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="session")
def alias_table():
    table = JournalAliasTable()
    for issn, canonical, aliases in parse_alias_lines(SAMPLE_ALIAS_LINES):
        table.add(issn, canonical, aliases)
    return table


@pytest.fixture(scope="session")
def sample_records(alias_table):
    return [expand_journal_aliases(PaperRecord.model_validate(p), alias_table) for p in SAMPLE_PAPERS]


@pytest.fixture(scope="session")
def sample_index(sample_records):
    return build_index(sample_records)


@pytest.fixture(scope="session")
def sample_gazetteer(sample_records, alias_table):
    return JournalGazetteer.from_records(sample_records, alias_table)


@pytest.fixture(scope="session")
def benchmark():
    """The committed-seed synthetic benchmark (500 papers, 200 news articles)"""
    return generate_benchmark()


@pytest.fixture(scope="session")
def benchmark_dataset(benchmark):
    return Dataset(benchmark.papers, benchmark.news, benchmark.aliases)
