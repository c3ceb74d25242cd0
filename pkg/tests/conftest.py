import random
from fractions import Fraction as F

import pytest

from markovmoments.builders import block_chain
from markovmoments.chain import make_chain
from markovmoments.randomgen import random_strongly_connected


def bernoulli_chain():
    return make_chain(["s"], [("s", "s", "1/2", [0]), ("s", "s", "1/2", [1])], ["k"])


def cycle3(loop=False):
    tr = [("1", "2", 1), ("2", "3", 1), ("3", "1", "1/2" if loop else 1)]
    if loop:
        tr.append(("3", "3", "1/2"))
    return make_chain(["1", "2", "3"], tr)


def random_corpus(count=100, seed=20160311, m=2):
    rng = random.Random(seed)
    return [random_strongly_connected(rng, m=m) for _ in range(count)]


@pytest.fixture
def bernoulli():
    return bernoulli_chain()


@pytest.fixture
def blocks_uniform():
    return block_chain("10-11", F(1, 2), F(1, 2))


@pytest.fixture(scope="session")
def corpus():
    return random_corpus()
