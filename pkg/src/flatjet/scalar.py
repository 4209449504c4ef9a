"""Exact Gaussian rationals ``a + b*i`` with ``a, b`` in Q."""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational

_RATIONAL_RE = re.compile(r"^-?\d+(/\d+)?$")


def parse_rational(text: str) -> Fraction:
    """Parse the canonical ``"p/q"`` (or bare ``"p"``) text form.

    Decimal and exponent notations are rejected so that no float ever
    leaks into an exact computation.
    """
    if not isinstance(text, str):
        raise ValueError(f"rational must be a string, got {type(text).__name__}")
    text = text.strip()
    if not _RATIONAL_RE.match(text):
        raise ValueError(f"malformed rational {text!r} (expected 'p/q' or 'p')")
    if "/" in text:
        num, den = text.split("/")
        if int(den) == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def format_rational(value: Fraction) -> str:
    # str(Fraction) is already reduced with a positive denominator.
    return str(value)


class Scalar:
    """Exact complex number with rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, Scalar):
            if im:
                raise TypeError("cannot combine a Scalar real part with an imaginary part")
            re, im = re.re, re.im
        elif isinstance(re, complex):
            raise TypeError("floating-point complex values are not exact; use Scalar(re, im)")
        if isinstance(re, float) or isinstance(im, float):
            raise TypeError("floats are not accepted as exact scalars")
        self.re = re if type(re) is Fraction else Fraction(re)
        self.im = im if type(im) is Fraction else Fraction(im)

    @classmethod
    def _raw(cls, re: Fraction, im: Fraction) -> Scalar:
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    @classmethod
    def coerce(cls, value) -> Scalar:
        if isinstance(value, Scalar):
            return value
        return cls(value)

    @classmethod
    def from_strings(cls, re: str, im: str = "0") -> Scalar:
        return cls._raw(parse_rational(re), parse_rational(im))

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Scalar):
            return Scalar._raw(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, Rational)):
            return Scalar._raw(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw(-self.re, -self.im)

    def __sub__(self, other):
        if isinstance(other, Scalar):
            return Scalar._raw(self.re - other.re, self.im - other.im)
        if isinstance(other, (int, Rational)):
            return Scalar._raw(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Rational)):
            return Scalar._raw(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, Scalar):
            a, b, c, d = self.re, self.im, other.re, other.im
            if not b and not d:
                return Scalar._raw(a * c, b)
            return Scalar._raw(a * c - b * d, a * d + b * c)
        if isinstance(other, (int, Rational)):
            return Scalar._raw(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def inverse(self) -> Scalar:
        norm = self.re * self.re + self.im * self.im
        if not norm:
            raise ZeroDivisionError("Scalar division by zero")
        return Scalar._raw(self.re / norm, -self.im / norm)

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            if not other:
                raise ZeroDivisionError("Scalar division by zero")
            return Scalar._raw(self.re / other, self.im / other)
        if isinstance(other, Scalar):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Rational)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = ONE
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def conjugate(self) -> Scalar:
        return Scalar._raw(self.re, -self.im)

    def norm2(self) -> Fraction:
        """Squared modulus, which is exactly rational."""
        return self.re * self.re + self.im * self.im

    def sup_bound(self) -> Fraction:
        """Rational upper bound ``|re| + |im|`` on the modulus."""
        return abs(self.re) + abs(self.im)

    @property
    def is_real(self) -> bool:
        return not self.im

    # -- comparison / hashing -------------------------------------------------

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Rational)):
            return not self.im and self.re == other
        if isinstance(other, complex):
            return self.re == other.real and self.im == other.imag
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if not self.im:
            return f"Scalar({format_rational(self.re)})"
        return f"Scalar({format_rational(self.re)}, {format_rational(self.im)})"

    def __str__(self):
        if not self.im:
            return format_rational(self.re)
        if not self.re:
            return f"{format_rational(self.im)}i"
        sign = "-" if self.im < 0 else "+"
        return f"{format_rational(self.re)}{sign}{format_rational(abs(self.im))}i"

    def to_json(self) -> dict:
        return {"re": format_rational(self.re), "im": format_rational(self.im)}

    @classmethod
    def from_json(cls, obj) -> Scalar:
        if not isinstance(obj, dict) or set(obj) - {"re", "im"} or "re" not in obj:
            raise ValueError(f"scalar must be an object with 're' and 'im' strings, got {obj!r}")
        return cls.from_strings(obj["re"], obj.get("im", "0"))


ZERO = Scalar._raw(Fraction(0), Fraction(0))
ONE = Scalar._raw(Fraction(1), Fraction(0))
I = Scalar._raw(Fraction(0), Fraction(1))
