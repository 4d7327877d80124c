"""Frozen input/output pairs for the full cleaning transformation."""

from pathlib import Path

import pytest

from corpusforge.cleaning import clean_article
from corpusforge.config import CleanConfig
from corpusforge.records import RawPage

GOLDEN_ROOT = Path(__file__).parent / "data" / "golden"

CONFIGS = {
    "wikipedia": CleanConfig(language="sr", project="wikipedia"),
    "wikiquote": CleanConfig(language="sr", project="wikiquote",
                             include_quote_lead=True),
}


def golden_cases():
    for project in sorted(CONFIGS):
        for wiki_path in sorted((GOLDEN_ROOT / project).glob("*.wiki")):
            yield project, wiki_path


def case_id(case):
    project, wiki_path = case
    return f"{project}/{wiki_path.stem}"


ALL_CASES = list(golden_cases())


def test_golden_suite_is_large_enough():
    assert len(ALL_CASES) >= 30


@pytest.mark.parametrize("case", ALL_CASES, ids=case_id)
def test_golden(case):
    project, wiki_path = case
    wiki = wiki_path.read_text(encoding="utf-8")
    expected = wiki_path.with_suffix(".txt").read_text(encoding="utf-8")
    page = RawPage(page_id=1, title=wiki_path.stem, namespace=0, text=wiki)
    article = clean_article(page, CONFIGS[project])
    assert article is not None
    assert article.text == expected
