import random
from fractions import Fraction

import pytest

from rectlimsup.boxgeom import Box


def random_box(rng: random.Random, dim: int, den: int = 64) -> Box:
    lo, hi = [], []
    for _ in range(dim):
        a, b = sorted(rng.sample(range(den + 1), 2))
        lo.append(Fraction(a, den))
        hi.append(Fraction(b, den))
    return Box(tuple(lo), tuple(hi))


@pytest.fixture
def rng():
    return random.Random(12345)
