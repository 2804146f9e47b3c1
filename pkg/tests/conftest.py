import random

import pytest

from cliffordt.clifford import get_table
from cliffordt.word import XGen


@pytest.fixture(scope="session")
def table():
    return get_table()


@pytest.fixture(scope="session")
def prover():
    from cliffordt.prover import Prover
    return Prover()


def random_x_word(rng: random.Random, max_len: int, gens=tuple(XGen)) -> tuple:
    return tuple(rng.choice(gens) for _ in range(rng.randint(0, max_len)))
