import random

import pytest

from gammaforms.core import GroupElement, IDENTITY, S, T, act
from gammaforms.reduction import enumerate_reduced

T_INV = T.inverse()


def random_sl2(rng: random.Random, max_len: int = 8) -> GroupElement:
    g = IDENTITY
    for _ in range(rng.randrange(1, max_len + 1)):
        g = g * rng.choice((T, T_INV, S))
    return g


def random_gamma0(rng: random.Random, n: int, max_len: int = 8) -> GroupElement:
    v = GroupElement(1, 0, n, 1)
    gens = (T, T_INV, v, v.inverse())
    g = IDENTITY
    for _ in range(rng.randrange(1, max_len + 1)):
        g = g * rng.choice(gens)
    return g


def random_form(rng: random.Random, d: int, max_len: int = 8):
    """A primitive positive-definite form of discriminant d, in a random
    SL2(Z)-class and at a random spot inside it."""
    base = rng.choice(enumerate_reduced(d, 1))
    return act(base, random_sl2(rng, max_len))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20260809)
