import os

import pytest

from dsteval.analysis import load_ontology
from dsteval.harness import load_dialogues, load_predictions
from dsteval.phonetics import default_resource_path, load_phonetics
from dsteval.textnorm import load_misspellings, load_reorder_rules

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")


def data_path(name: str) -> str:
    return os.path.join(DATA_DIR, name)


@pytest.fixture(scope="session")
def resources():
    return load_phonetics()


@pytest.fixture(scope="session")
def ontology():
    return load_ontology(default_resource_path("ontology.json"))


@pytest.fixture(scope="session")
def misspellings():
    return load_misspellings(default_resource_path("misspellings.tsv"))


@pytest.fixture(scope="session")
def reorder_rules():
    return load_reorder_rules(default_resource_path("reorder_rules.tsv"))


@pytest.fixture(scope="session")
def gold_dialogues():
    return load_dialogues(data_path("gold_corpus.json"))


@pytest.fixture(scope="session")
def pred_a():
    return load_predictions(data_path("pred_system_a.jsonl"))


@pytest.fixture(scope="session")
def pred_b():
    return load_predictions(data_path("pred_system_b.jsonl"))
