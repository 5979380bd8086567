import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fuzzyent.dictionary import build_dictionary
from fuzzyent.fixtures import FixtureConfig, generate
from fuzzyent.matcher import Matcher
from fuzzyent.ngram_lm import NgramModel, count_ngrams
from fuzzyent.tokenizer import TokenizerConfig, tokenize


@pytest.fixture(scope="session")
def world():
    return generate(FixtureConfig(seed=42))


@pytest.fixture(scope="session")
def world_dictionary(world):
    return build_dictionary([" ".join(e) for e in world.entities], TokenizerConfig())


@pytest.fixture(scope="session")
def world_pairs(world, world_dictionary):
    matcher = Matcher(world_dictionary)
    return [p for doc_id, text in world.documents for p in matcher.extract(doc_id, tokenize(text))]


@pytest.fixture(scope="session")
def world_lm(world):
    return NgramModel(3, dict(count_ngrams((line.split() for line in world.corpus), 3)))


@pytest.fixture
def abab_model():
    return NgramModel(2, dict(count_ngrams([["a", "b", "a", "b", "c"]], 2)))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
