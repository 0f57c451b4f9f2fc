import random

import pytest

from fusiongames.automata import AV11, COMB, FULL, HALF, MIX, ZERO, ZOO
from fusiongames.corpus import DEFAULT_SEED, automaton_corpus


@pytest.fixture(scope="session")
def zoo():
    return dict(ZOO)


@pytest.fixture(scope="session")
def corpus50():
    return automaton_corpus(50, max_states=6, seed=DEFAULT_SEED)


@pytest.fixture(scope="session")
def small_corpus():
    return automaton_corpus(50, max_states=5, seed=DEFAULT_SEED + 1)


@pytest.fixture()
def rng():
    return random.Random(DEFAULT_SEED)
