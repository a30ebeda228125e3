import json
from pathlib import Path

import pytest

from squash.text_analysis import segment

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def article_text():
    return (FIXTURES / "article.txt").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def article_doc(article_text):
    return segment(article_text, doc_id="article")


@pytest.fixture(scope="session")
def golden_sentences():
    return json.loads((FIXTURES / "golden_sentences.json").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def questions_50():
    return json.loads((FIXTURES / "questions_50.json").read_text(encoding="utf-8"))
