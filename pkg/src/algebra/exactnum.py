"""Exact arithmetic in Z[1/6].

A Coefficient is stored as (numerator, exp2, exp3) with value
numerator * 2**(-exp2) * 3**(-exp3).  In canonical form the numerator is
coprime to 6 (or zero, in which case both exponents are 0), so equal values
have identical triples.  Negative exponents are powers of 2 or 3 sitting in
the numerator.
"""
from fractions import Fraction
from typing import Iterable, List, Tuple, Union

import sympy

from ..errors import CoefficientError

Number = Union[int, Fraction, "Coefficient"]


def _strip6(n: int, e2: int, e3: int) -> Tuple[int, int, int]:
    if n == 0:
        return 0, 0, 0
    v2 = (n & -n).bit_length() - 1
    if v2:
        n >>= v2
        e2 -= v2
    while n % 3 == 0:
        n //= 3
        e3 -= 1
    return n, e2, e3


def six_split(n: int) -> Tuple[int, int, int]:
    """Write a nonzero integer as m * 2**a * 3**b with m coprime to 6; returns (m, a, b)."""
    m, e2, e3 = _strip6(n, 0, 0)
    return m, -e2, -e3


def xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Extended Euclid: returns (x, y, g) with x*a + y*b == g == gcd(a, b), g >= 0."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


class Coefficient:
    """Immutable element of Z[1/6]."""

    __slots__ = ("_n", "_e2", "_e3")

    def __new__(cls, value: Union[int, str, Fraction, "Coefficient"] = 0):
        if isinstance(value, Coefficient):
            return value
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, int):
            return cls._raw(*_strip6(value, 0, 0))
        if isinstance(value, Fraction):
            return cls.from_fraction(value.numerator, value.denominator)
        if isinstance(value, str):
            return cls.parse(value)
        if isinstance(value, sympy.Rational):
            return cls.from_fraction(int(value.p), int(value.q))
        raise CoefficientError(f"Cannot build a Z[1/6] coefficient from {value!r}")

    @classmethod
    def _raw(cls, n: int, e2: int, e3: int) -> "Coefficient":
        self = object.__new__(cls)
        self._n = n
        self._e2 = e2
        self._e3 = e3
        return self

    @classmethod
    def make(cls, n: int, e2: int = 0, e3: int = 0) -> "Coefficient":
        """Value n * 2**(-e2) * 3**(-e3), canonicalized."""
        return cls._raw(*_strip6(n, e2, e3))

    @classmethod
    def from_fraction(cls, p: int, q: int) -> "Coefficient":
        if q == 0:
            raise CoefficientError("Zero denominator")
        if q < 0:
            p, q = -p, -q
        fr = Fraction(p, q)
        p, q = fr.numerator, fr.denominator
        rest, a, b = six_split(q)
        if rest != 1:
            raise CoefficientError(f"Denominator {q} of {p}/{q} is not of the form 2^a*3^b")
        return cls.make(p, a, b)

    @classmethod
    def parse(cls, text: str) -> "Coefficient":
        text = text.strip().replace(" ", "")
        try:
            if "/" in text:
                num, den = text.split("/", 1)
                return cls.from_fraction(int(num), int(den))
            return cls.make(int(text))
        except ValueError as e:
            raise CoefficientError(f"Malformed coefficient '{text}': {e}") from e

    # accessors

    @property
    def numerator(self) -> int:
        return self._n

    @property
    def exp2(self) -> int:
        return self._e2

    @property
    def exp3(self) -> int:
        return self._e3

    def __reduce__(self):
        return (Coefficient.make, (self._n, self._e2, self._e3))

    # predicates

    def __bool__(self) -> bool:
        return self._n != 0

    def is_zero(self) -> bool:
        return self._n == 0

    def is_unit(self) -> bool:
        return self._n == 1 or self._n == -1

    def sign(self) -> int:
        return (self._n > 0) - (self._n < 0)

    def six_free_part(self) -> int:
        """|x|_6: absolute value of the part of the numerator coprime to 6."""
        return abs(self._n)

    def unit_part(self) -> "Coefficient":
        """The unit u with self == u * six_free_part (positive unit, sign carried by u)."""
        if self._n == 0:
            raise CoefficientError("Zero has no unit part")
        return Coefficient._raw(self.sign(), self._e2, self._e3)

    # arithmetic

    def __add__(self, other: Number) -> "Coefficient":
        if not isinstance(other, Coefficient):
            other = _coerce(other)
            if other is None:
                return NotImplemented
        if other._n == 0:
            return self
        if self._n == 0:
            return other
        a2, a3, b2, b3 = self._e2, self._e3, other._e2, other._e3
        if a2 == b2 and a3 == b3:
            return Coefficient._raw(*_strip6(self._n + other._n, a2, a3))
        e2 = a2 if a2 > b2 else b2
        e3 = a3 if a3 > b3 else b3
        n = (self._n << (e2 - a2)) * 3 ** (e3 - a3) + (other._n << (e2 - b2)) * 3 ** (e3 - b3)
        return Coefficient._raw(*_strip6(n, e2, e3))

    __radd__ = __add__

    def __neg__(self) -> "Coefficient":
        return Coefficient._raw(-self._n, self._e2, self._e3)

    def __pos__(self) -> "Coefficient":
        return self

    def __sub__(self, other: Number) -> "Coefficient":
        if not isinstance(other, Coefficient):
            other = _coerce(other)
            if other is None:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Number) -> "Coefficient":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other: Number) -> "Coefficient":
        if not isinstance(other, Coefficient):
            other = _coerce(other)
            if other is None:
                return NotImplemented
        if self._n == 0 or other._n == 0:
            return ZERO
        return Coefficient._raw(self._n * other._n, self._e2 + other._e2, self._e3 + other._e3)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Coefficient":
        if k >= 0:
            if self._n == 0:
                return ONE if k == 0 else ZERO
            return Coefficient._raw(self._n ** k, self._e2 * k, self._e3 * k)
        return self.inverse() ** (-k)

    def inverse(self) -> "Coefficient":
        if not self.is_unit():
            raise CoefficientError(f"{self} is not a unit of Z[1/6]")
        return Coefficient._raw(self._n, -self._e2, -self._e3)

    def try_divide(self, other: "Coefficient") -> "Coefficient | None":
        """self / other if the quotient lies in Z[1/6], else None."""
        other = Coefficient(other)
        if other._n == 0:
            raise CoefficientError("Division by zero")
        q, r = divmod(self._n, other._n)
        if r:
            return None
        if q == 0:
            return ZERO
        return Coefficient._raw(q, self._e2 - other._e2, self._e3 - other._e3)

    def residue(self, p: int) -> int:
        """The representative in [0, p) of self modulo a positive p coprime to 6."""
        if p == 1 or self._n == 0:
            return 0
        return self._n * pow(2, -self._e2, p) * pow(3, -self._e3, p) % p

    def __truediv__(self, other: Number) -> "Coefficient":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        q = self.try_divide(other)
        if q is None:
            raise CoefficientError(f"{self} / {other} is not in Z[1/6]")
        return q

    def __rtruediv__(self, other: Number) -> "Coefficient":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    # comparisons and conversions

    def __eq__(self, other) -> bool:
        if isinstance(other, Coefficient):
            return self._n == other._n and self._e2 == other._e2 and self._e3 == other._e3
        if isinstance(other, (int, Fraction)):
            return self.to_fraction() == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.to_fraction())

    def __lt__(self, other: Number) -> bool:
        return self.to_fraction() < Coefficient(other).to_fraction()

    def __le__(self, other: Number) -> bool:
        return self.to_fraction() <= Coefficient(other).to_fraction()

    def to_fraction(self) -> Fraction:
        num = self._n
        den = 1
        if self._e2 >= 0:
            den <<= self._e2
        else:
            num <<= -self._e2
        if self._e3 >= 0:
            den *= 3 ** self._e3
        else:
            num *= 3 ** (-self._e3)
        return Fraction(num, den)

    def to_sympy(self) -> sympy.Rational:
        fr = self.to_fraction()
        return sympy.Rational(fr.numerator, fr.denominator)

    def scaled_int(self, e2: int, e3: int) -> int:
        """The integer self * 2**e2 * 3**e3; requires e2 >= exp2 and e3 >= exp3."""
        return (self._n << (e2 - self._e2)) * 3 ** (e3 - self._e3)

    def __str__(self) -> str:
        fr = self.to_fraction()
        if fr.denominator == 1:
            return str(fr.numerator)
        return f"{fr.numerator}/{fr.denominator}"

    def __repr__(self) -> str:
        return f"Coefficient('{self}')"


def _coerce(value) -> "Coefficient | None":
    if isinstance(value, Coefficient):
        return value
    if isinstance(value, (int, Fraction, str)) or isinstance(value, sympy.Rational):
        return Coefficient(value)
    return None


ZERO = Coefficient._raw(0, 0, 0)
ONE = Coefficient._raw(1, 0, 0)


def add(a: Coefficient, b: Coefficient) -> Coefficient:
    return Coefficient(a) + Coefficient(b)


def euclidean_divide(a: Number, b: Number) -> Tuple[Coefficient, Coefficient]:
    """Division with remainder for the 6-free absolute value.

    Returns (q, r) with a == q*b + r and |r|_6 < |b|_6.
    """
    a = Coefficient(a)
    b = Coefficient(b)
    if b.is_zero():
        raise CoefficientError("Euclidean division by zero")
    big_q, big_r = divmod(a.numerator, b.numerator)
    q = Coefficient.make(big_q, a.exp2 - b.exp2, a.exp3 - b.exp3)
    r = Coefficient.make(big_r, a.exp2, a.exp3)
    return q, r


def common_scale(coeffs: Iterable[Coefficient]) -> Tuple[int, int]:
    """Exponents (e2, e3) such that every coefficient times 2**e2 * 3**e3 is an integer."""
    e2 = e3 = 0
    for c in coeffs:
        if c._e2 > e2:
            e2 = c._e2
        if c._e3 > e3:
            e3 = c._e3
    return e2, e3


def to_int_row(coeffs: List[Coefficient]) -> Tuple[List[int], int, int]:
    e2, e3 = common_scale(coeffs)
    return [c.scaled_int(e2, e3) for c in coeffs], e2, e3
