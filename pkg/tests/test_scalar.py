from fractions import Fraction
import pytest
from hypothesis import given
from chargedfock.scalar import (EXACT_GAUSSIAN, EXACT_RATIONAL, FLOAT, GaussianRational, ScalarContext, abs2, conj,
                                format_decimal, imag_part, real_part, select)
from tests.strategies import fractions, gaussians


def test_parse_rational():
    ctx = ScalarContext(EXACT_RATIONAL)
    assert ctx.parse("1/2") == Fraction(1, 2)
    assert ctx.parse(" -3/4 ") == Fraction(-3, 4)
    assert ctx.parse("0.25") == Fraction(1, 4)


def test_parse_irrational_needs_float():
    with pytest.raises(ValueError):
        ScalarContext(EXACT_RATIONAL).parse("1/sqrt(2)")
    value = ScalarContext(FLOAT, 1e-12).parse("1/sqrt(2)")
    assert value == pytest.approx(0.5 ** 0.5)


def test_parse_garbage():
    with pytest.raises(ValueError):
        ScalarContext(EXACT_RATIONAL).parse("1/(")
    with pytest.raises(ValueError):
        ScalarContext(FLOAT, 1e-12).parse("alpha")


def test_mode_validation():
    with pytest.raises(ValueError):
        ScalarContext("decimal")
    with pytest.raises(ValueError):
        ScalarContext(FLOAT, 0.0)
    with pytest.raises(ValueError):
        ScalarContext(EXACT_RATIONAL, -1.0)


def test_imaginary_unit():
    with pytest.raises(ValueError):
        ScalarContext(EXACT_RATIONAL).imaginary_unit()
    i = ScalarContext(EXACT_GAUSSIAN).imaginary_unit()
    assert i * i == -1
    assert ScalarContext(FLOAT, 1e-9).imaginary_unit() == 1j


def test_gaussian_arithmetic():
    a = GaussianRational(1, 2)
    b = GaussianRational(3, -1)
    assert a * b == GaussianRational(5, 5)
    assert (a * b) / b == a
    assert a - a == 0
    assert 2 * a == GaussianRational(2, 4)
    assert hash(GaussianRational(3, 0)) == hash(Fraction(3))


def test_gaussian_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        GaussianRational(1, 1) / GaussianRational(0, 0)


def test_gaussian_immutable():
    with pytest.raises(AttributeError):
        GaussianRational(1, 1).re = 2


@given(gaussians())
def test_abs2_is_product_with_conjugate(x):
    product = x * conj(x)
    assert imag_part(product) == 0
    assert real_part(product) == abs2(x)


@given(gaussians(), gaussians())
def test_conjugation_is_multiplicative(x, y):
    assert conj(x * y) == conj(x) * conj(y)


@given(fractions())
def test_convert_keeps_rationals_exact(x):
    ctx = ScalarContext(EXACT_GAUSSIAN)
    assert ctx.convert(x) == x
    assert isinstance(ctx.convert(GaussianRational(x, 0)), Fraction)


def test_convert_rejects_imaginary_in_rational_mode():
    with pytest.raises(ValueError):
        ScalarContext(EXACT_RATIONAL).convert(GaussianRational(0, 1))
    with pytest.raises(ValueError):
        ScalarContext(EXACT_RATIONAL).convert(1j)


def test_zero_tests():
    exact = ScalarContext(EXACT_RATIONAL)
    assert exact.is_zero(Fraction(0))
    assert not exact.is_zero(Fraction(1, 10 ** 30))
    approx = ScalarContext(FLOAT, 1e-9)
    assert approx.is_zero(1e-12)
    assert approx.equal(0.1 + 0.2, 0.3)
    assert not approx.is_zero(1e-6)


def test_within_budget():
    exact = ScalarContext(EXACT_RATIONAL)
    assert exact.within(Fraction(1, 100), 0.02)
    assert not exact.within(Fraction(1, 100), 0.0)
    assert exact.within(0, 0.0)
    assert exact.within(Fraction(5), float("inf"))


def test_to_string():
    ctx = ScalarContext(EXACT_GAUSSIAN)
    assert ctx.to_string(Fraction(3, 4)) == "3/4"
    assert ctx.to_string(2) == "2/1"
    assert ctx.to_string(GaussianRational(Fraction(1, 2), -3)) == "1/2-3/1i"
    assert ctx.to_string(0.5) == "0.5"


def test_format_decimal():
    assert format_decimal(Fraction(1, 4), 10).startswith("0.25")
    assert format_decimal(Fraction(1, 3), 30).startswith("0.333333333333333333333333333")


def test_select():
    ctx = select(FLOAT, 1e-12)
    assert not ctx.is_exact
    assert ctx.convert(Fraction(1, 4)) == 0.25
    assert select(EXACT_GAUSSIAN).convert(GaussianRational(1, 0)) == 1
    with pytest.raises(ValueError):
        select("decimal")
