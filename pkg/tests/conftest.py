import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from frc.backends import Lexicon, LexiconBackend  # noqa: E402
from frc.datasets import data_path  # noqa: E402
from frc.fuzzy import BINARY  # noqa: E402
from frc.perturb import LexiconPerturber, load_synonyms  # noqa: E402

from stub_server import StubServer  # noqa: E402

TOY_LEXICON = {
    "entries": {
        "good": {"positive": 0.6}, "tasty": {"positive": 0.7}, "great": {"positive": 0.8},
        "bad": {"negative": 0.6}, "terrible": {"negative": 0.9}, "slow": {"negative": 0.5},
        "dissatisfied": {"negative": 0.6}, "acceptable": {"positive": 0.4},
        "bittersweet": {"positive": 0.4, "negative": 0.4},
        "好吃": {"positive": 0.7}, "难吃": {"negative": 0.8},
    },
    "modifiers": {"very": 1.5, "slightly": 0.5, "extremely": 1.8, "a bit": 0.6, "非常": 1.8,
                  "有点": 0.6},
    "negators": ["not", "never", "不"],
}


@pytest.fixture
def classes():
    return BINARY


@pytest.fixture
def toy_lexicon():
    return Lexicon.from_dict(TOY_LEXICON)


@pytest.fixture
def toy_backend(toy_lexicon):
    return LexiconBackend(toy_lexicon, "toy")


@pytest.fixture(scope="session")
def lexicon():
    return Lexicon.load(data_path("lexicon.json"))


@pytest.fixture(scope="session")
def student_lexicon():
    return Lexicon.load(data_path("student_lexicon.json"))


@pytest.fixture
def backend(lexicon):
    return LexiconBackend(lexicon, "lexicon")


@pytest.fixture(scope="session")
def synonyms():
    return load_synonyms(data_path("synonyms.json"))


@pytest.fixture
def perturber(lexicon, synonyms):
    return LexiconPerturber(lexicon, synonyms, BINARY, seed=0)


@pytest.fixture
def stub_server(lexicon):
    with StubServer(lexicon) as server:
        yield server
