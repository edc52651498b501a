import pytest

from nvsyn.cli import build_seed_framework, default_dictionary, _data_path
from nvsyn.corpus import load_corpus
from nvsyn.evidence import build_evidence_index
from nvsyn.normalization import normalize_corpus


@pytest.fixture(scope="session")
def dictionary():
    return default_dictionary()


@pytest.fixture(scope="session")
def seed_corpus():
    return load_corpus(_data_path("seed_corpus.jsonl"))


@pytest.fixture(scope="session")
def seed_mappings(seed_corpus, dictionary):
    mappings, report = normalize_corpus(seed_corpus, dictionary)
    return mappings, report


@pytest.fixture(scope="session")
def seed_index(seed_mappings, dictionary):
    mappings, _ = seed_mappings
    return build_evidence_index(mappings, dictionary)


@pytest.fixture(scope="session")
def seed_framework():
    return build_seed_framework()
