import random

import pytest

from backend.finite_field import finite_field
from backend.padic_tower import make_base_field

WINDOW = (-16, 16)


@pytest.fixture
def window():
    return WINDOW


@pytest.fixture
def F3():
    return finite_field(3)


@pytest.fixture
def F9():
    return finite_field(3, 2)


@pytest.fixture
def tower3():
    """p = 3, unramified: e = 2, v(lambda) = 1"""
    return make_base_field(3, 1, 8)


@pytest.fixture
def tower3_c2():
    """p = 3 after a ramified extension of degree 2: e = 4, v(lambda) = 2"""
    return make_base_field(3, 1, 16, 2)


@pytest.fixture
def rng():
    return random.Random(7)
