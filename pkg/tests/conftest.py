from fractions import Fraction
import pytest
from hypothesis import settings
from chargedfock.scalar import EXACT_GAUSSIAN, EXACT_RATIONAL, ScalarContext
from chargedfock.truncation import Truncation


# table construction is cached per process, so first calls are slow
settings.register_profile("chargedfock", deadline=None, max_examples=25)
settings.load_profile("chargedfock")

HALF = Fraction(1, 2)


@pytest.fixture
def ctx():
    return ScalarContext(EXACT_RATIONAL)


@pytest.fixture
def gaussian_ctx():
    return ScalarContext(EXACT_GAUSSIAN)


@pytest.fixture
def trunc():
    return Truncation(6, -2, 2, HALF)


@pytest.fixture
def small_trunc():
    return Truncation(4, -2, 2, HALF)
