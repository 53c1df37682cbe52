import math
from fractions import Fraction
import pytest
from chargedfock.scalar import GaussianRational
from chargedfock.truncation import Truncation, as_integer, enumerate_basis

HALF = Fraction(1, 2)


@pytest.mark.parametrize("j, level, count", [(0, 4, 5), (0, 0, 1), (1, 12, 77)])
def test_enumerate_basis_counts(j, level, count):
    trunc = Truncation(12, -2, 2, HALF)
    assert len(enumerate_basis(trunc, j, level)) == count


def test_enumerate_basis_vacuum_and_order():
    trunc = Truncation(12, -2, 2, HALF)
    assert enumerate_basis(trunc, 0, 0) == [()]
    assert enumerate_basis(trunc, 0, 3) == [(3,), (2, 1), (1, 1, 1)]


def test_enumerate_basis_preconditions():
    trunc = Truncation(4, -1, 1, HALF)
    with pytest.raises(ValueError):
        enumerate_basis(trunc, 2, 0)
    with pytest.raises(ValueError):
        enumerate_basis(trunc, 0, 5)
    with pytest.raises(ValueError):
        enumerate_basis(trunc, 0, -1)


def test_window():
    trunc = Truncation(4, -1, 2, HALF)
    assert trunc.charge_window == (-1, 2)
    assert trunc.sectors() == [-1, 0, 1, 2]
    assert trunc.contains_sector(2) and not trunc.contains_sector(3)
    assert trunc.charge(-1) == -HALF
    assert trunc.with_level_cutoff(8).level_cutoff == 8
    with pytest.raises(ValueError):
        trunc.check_sector(-2)


def test_invalid_truncations():
    with pytest.raises(ValueError):
        Truncation(-1, 0, 0, HALF)
    with pytest.raises(ValueError):
        Truncation(4, 1, 0, HALF)
    with pytest.raises(ValueError):
        Truncation(4, 0, 0, 0)


def test_charge_steps():
    trunc = Truncation(4, -2, 2, HALF)
    assert trunc.charge_steps(Fraction(1)) == 2
    assert trunc.charge_steps(-HALF) == -1
    with pytest.raises(ValueError):
        trunc.charge_steps(Fraction(1, 3))


def test_charge_steps_float():
    alpha0 = 1 / math.sqrt(2)
    trunc = Truncation(4, -2, 2, alpha0)
    assert trunc.charge_steps(2 * alpha0) == 2


def test_as_integer():
    assert as_integer(Fraction(6, 3)) == 2
    assert as_integer(GaussianRational(-3, 0)) == -3
    assert as_integer(2.0000000001) == 2
    assert as_integer(complex(1.0, 0.0)) == 1
    with pytest.raises(ValueError):
        as_integer(HALF)
    with pytest.raises(ValueError):
        as_integer(GaussianRational(1, 1))
    with pytest.raises(ValueError):
        as_integer(0.5)
