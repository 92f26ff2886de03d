from pathlib import Path

import pytest

from hydiag.oracle import random_models
from hydiag.quotient import load_model
from hydiag.regions import load_ta

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

CORPUS_SEED = 20260809
CORPUS_SIZE = 500


@pytest.fixture(scope="session")
def q1():
    return load_model(FIXTURES / "q1.quot.json")


@pytest.fixture(scope="session")
def q2():
    return load_model(FIXTURES / "q2.quot.json")


@pytest.fixture(scope="session")
def ta1():
    return load_ta(FIXTURES / "ta1.ta.json")


@pytest.fixture(scope="session")
def corpus():
    """The fixed randomized model corpus shared by the acceptance suite."""
    return list(random_models(CORPUS_SIZE, CORPUS_SEED))
