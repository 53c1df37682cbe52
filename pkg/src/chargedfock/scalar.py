from fractions import Fraction
from numbers import Number
from typing import Union
import sympy


EXACT_RATIONAL = "exact-rational"
EXACT_GAUSSIAN = "exact-gaussian"
FLOAT = "float"
MODES = (EXACT_RATIONAL, EXACT_GAUSSIAN, FLOAT)


class GaussianRational:
    """
    Exact complex number a + bi with rational a, b.
    """
    __slots__ = ("re", "im")

    def __init__(self, re: Union[int, Fraction] = 0, im: Union[int, Fraction] = 0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @staticmethod
    def _coerce(other) -> "GaussianRational":
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other, 0)
        return None

    def __add__(self, other):
        o = GaussianRational._coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return complex(self) + other
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = GaussianRational._coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return complex(self) - other
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        o = GaussianRational._coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return complex(self) * other
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussianRational._coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return complex(self) / other
            return NotImplemented
        norm = o.re * o.re + o.im * o.im
        if norm == 0:
            raise ZeroDivisionError("GaussianRational division by zero")
        return self * GaussianRational(o.re / norm, -o.im / norm)

    def __rtruediv__(self, other):
        o = GaussianRational._coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return other / complex(self)
            return NotImplemented
        return o / self

    def __eq__(self, other):
        o = GaussianRational._coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return complex(self) == other
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self) -> float:
        return abs(complex(self))

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    @property
    def real(self) -> Fraction:
        return self.re

    @property
    def imag(self) -> Fraction:
        return self.im

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        return f"{self.re}+{self.im}i"


Scalar = Union[int, Fraction, GaussianRational, float, complex]


def conj(x: Scalar) -> Scalar:
    return x.conjugate()


def abs2(x: Scalar):
    """|x|^2, exact for exact scalars."""
    if isinstance(x, GaussianRational):
        return x.re * x.re + x.im * x.im
    if isinstance(x, complex):
        return x.real * x.real + x.imag * x.imag
    return x * x


def real_part(x: Scalar):
    if isinstance(x, (int, Fraction, float)):
        return x
    return x.real


def imag_part(x: Scalar):
    if isinstance(x, (int, Fraction, float)):
        return 0
    return x.imag


def to_float(x: Scalar) -> float:
    return float(real_part(x))


def format_rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def format_decimal(x, digits: int = 30) -> str:
    if isinstance(x, Fraction):
        return str(sympy.Rational(x.numerator, x.denominator).evalf(digits))
    return str(sympy.Float(float(x), digits))


class ScalarContext:
    """
    Run-wide arithmetic mode. Converts parameters into the active representation
    and decides when a residual counts as zero.
    """
    def __init__(self, mode: str = EXACT_RATIONAL, tolerance: float = 0.0):
        if mode not in MODES:
            raise ValueError(f"Unknown arithmetic mode: {mode}")
        if tolerance < 0:
            raise ValueError("tolerance must be nonnegative")
        if mode == FLOAT and tolerance == 0:
            raise ValueError("float mode needs a positive tolerance")
        self.mode: str = mode
        self.tolerance: float = float(tolerance)

    @property
    def is_exact(self) -> bool:
        return self.mode != FLOAT

    def convert(self, value) -> Scalar:
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, GaussianRational):
            if self.mode == FLOAT:
                return complex(value)
            if value.im == 0:
                return value.re
            if self.mode == EXACT_RATIONAL:
                raise ValueError("exact-rational mode cannot hold an imaginary part")
            return value
        if isinstance(value, complex):
            if self.is_exact:
                raise ValueError("complex floats are not exact scalars")
            return value
        if isinstance(value, sympy.Basic):
            return self._convert_sympy(value)
        if isinstance(value, float):
            if self.is_exact:
                return self.convert(Fraction(value))
            return value
        if isinstance(value, (int, Fraction)):
            if self.mode == FLOAT:
                return float(value)
            return Fraction(value)
        if isinstance(value, Number):
            return self.convert(complex(value))
        raise TypeError(f"Cannot convert {value!r} to a scalar")

    def _convert_sympy(self, expr: sympy.Basic) -> Scalar:
        re, im = expr.as_real_imag()
        if self.is_exact:
            if not (re.is_rational and im.is_rational):
                raise ValueError(f"{expr} is irrational; use float mode")
            re = Fraction(int(re.p), int(re.q))
            im = Fraction(int(im.p), int(im.q))
            if im == 0:
                return re
            if self.mode == EXACT_RATIONAL:
                raise ValueError("exact-rational mode cannot hold an imaginary part")
            return GaussianRational(re, im)
        if im == 0:
            return float(re)
        return complex(float(re), float(im))

    def parse(self, text: str) -> Scalar:
        """Parse "p/q", a decimal or a closed form such as "1/sqrt(2)"."""
        text = text.strip()
        try:
            expr = sympy.Rational(text)
        except (TypeError, ValueError):
            try:
                expr = sympy.sympify(text)
            except (sympy.SympifyError, TypeError) as e:
                raise ValueError(f"Cannot parse scalar: {text!r}") from e
        if not expr.is_number:
            raise ValueError(f"Not a number: {text!r}")
        return self._convert_sympy(expr)

    def imaginary_unit(self) -> Scalar:
        if self.mode == EXACT_RATIONAL:
            raise ValueError("exact-rational mode has no imaginary unit; use exact-gaussian")
        if self.mode == EXACT_GAUSSIAN:
            return GaussianRational(0, 1)
        return 1j

    def zero(self) -> Scalar:
        return self.convert(0)

    def one(self) -> Scalar:
        return self.convert(1)

    def is_zero(self, x: Scalar) -> bool:
        if self.is_exact:
            return x == 0
        return abs(x) <= self.tolerance

    def equal(self, x: Scalar, y: Scalar) -> bool:
        return self.is_zero(x - y)

    def within(self, x: Scalar, budget: float) -> bool:
        if self.is_exact and budget == 0:
            return x == 0
        return abs(complex(x)) <= budget + self.tolerance

    def to_string(self, x) -> str:
        if isinstance(x, (int, Fraction)):
            return format_rational(x)
        if isinstance(x, GaussianRational):
            return f"{format_rational(x.re)}{'+' if x.im >= 0 else '-'}{format_rational(abs(x.im))}i"
        if isinstance(x, complex):
            return repr(x)
        return repr(float(x))

    def __repr__(self):
        return f"ScalarContext({self.mode!r}, {self.tolerance!r})"


def select(mode: str, tolerance: float = 0.0) -> ScalarContext:
    return ScalarContext(mode=mode, tolerance=tolerance)
