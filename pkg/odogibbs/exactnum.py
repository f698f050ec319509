from __future__ import annotations

import math
import re

from fractions import Fraction
from functools import total_ordering
from typing import Any, Iterable, List, Optional, Tuple, Union

import numpy as np

from .exceptions import RangeExceeded

DyadicLike = Union["DyadicRational", int]

# exp(709.78) is the largest argument that stays below the binary64 maximum.
EXP_OVERFLOW: float = 709.78

_PRODUCT = re.compile(r"^([+-]?\d+)\*2\^([+-]?\d+)$")
_POWER = re.compile(r"^([+-]?)2\^([+-]?\d+)$")
_RATIO = re.compile(r"^([+-]?\d+)/(\d+)$")
_INTEGER = re.compile(r"^[+-]?\d+$")


@total_ordering
class DyadicRational:
    """
    An exact rational number with a power of two denominator, ``mantissa * 2**exponent``.

    Values are kept in canonical form: the mantissa is odd, or the value is zero with exponent 0.
    Every arithmetic operation is exact.

    Parameters
    ----------
    mantissa:
        Arbitrary precision signed integer.
    exponent:
        Signed power of two.
    """

    __slots__ = ("_mantissa", "_exponent")

    def __init__(self, mantissa: int, exponent: int = 0) -> None:
        if mantissa == 0:
            exponent = 0
        else:
            zeros: int = (mantissa & -mantissa).bit_length() - 1
            mantissa >>= zeros
            exponent += zeros

        self._mantissa: int = mantissa
        self._exponent: int = exponent

    def __repr__(self) -> str:
        return f"<DyadicRational(mantissa={self._mantissa}, exponent={self._exponent})>"

    def __str__(self) -> str:
        return self.render()

    @property
    def mantissa(self) -> int:
        """Odd mantissa, or 0."""
        return self._mantissa

    @property
    def exponent(self) -> int:
        """Power of two scaling the mantissa."""
        return self._exponent

    @classmethod
    def from_int(cls, value: int) -> DyadicRational:
        return cls(value, 0)

    @classmethod
    def power_of_two(cls, exponent: int) -> DyadicRational:
        """The value ``2**exponent``."""
        return cls(1, exponent)

    @classmethod
    def from_fraction(cls, value: Fraction) -> DyadicRational:
        """
        Converts a fraction whose denominator is a power of two.

        Raises
        ------
        ValueError
            The denominator is not a power of two.
        """
        denominator: int = value.denominator
        if denominator & (denominator - 1):
            raise ValueError(f"{value} is not a dyadic rational.")

        return cls(value.numerator, -(denominator.bit_length() - 1))

    @classmethod
    def parse(cls, text: str) -> DyadicRational:
        """
        Parses ``"5*2^-5"``, ``"2^-24"``, ``"3/64"`` or a plain integer.

        Raises
        ------
        ValueError
            The text is not one of the accepted forms.
        """
        text = text.strip().replace(" ", "")

        if match := _PRODUCT.match(text):
            return cls(int(match.group(1)), int(match.group(2)))

        if match := _POWER.match(text):
            sign: int = -1 if match.group(1) == "-" else 1
            return cls(sign, int(match.group(2)))

        if match := _RATIO.match(text):
            denominator: int = int(match.group(2))
            if denominator == 0:
                raise ValueError(f"Zero denominator in {text!r}.")
            return cls.from_fraction(Fraction(int(match.group(1)), denominator))

        if _INTEGER.match(text):
            return cls(int(text), 0)

        raise ValueError(f"Cannot parse {text!r} as a dyadic rational.")

    def render(self) -> str:
        """Canonical text form, ``5*2^-5`` for 5/32."""
        if self._exponent == 0 or self._mantissa == 0:
            return str(self._mantissa)

        if 0 < self._exponent <= 64:
            return str(self._mantissa << self._exponent)

        if abs(self._mantissa) == 1:
            sign: str = "-" if self._mantissa < 0 else ""
            return f"{sign}2^{self._exponent}"

        return f"{self._mantissa}*2^{self._exponent}"

    def sign(self) -> int:
        return (self._mantissa > 0) - (self._mantissa < 0)

    def magnitude(self) -> int:
        """
        Binary magnitude, ``|value|`` lies in ``[2**(magnitude-1), 2**magnitude)``.

        .. note::
            Only meaningful for nonzero values, callers check :meth:`sign` first.
        """
        return self._exponent + abs(self._mantissa).bit_length()

    def is_zero(self) -> bool:
        return self._mantissa == 0

    def shift(self, places: int) -> DyadicRational:
        """Multiplies by ``2**places``."""
        return DyadicRational(self._mantissa, self._exponent + places)

    def floor_to(self, exponent: int) -> DyadicRational:
        """Largest multiple of ``2**exponent`` that is not above this value."""
        if self._exponent >= exponent:
            return self

        drop: int = exponent - self._exponent
        if drop > abs(self._mantissa).bit_length() + 1:
            return DyadicRational(-1 if self._mantissa < 0 else 0, exponent)

        return DyadicRational(self._mantissa >> drop, exponent)

    def ceil_to(self, exponent: int) -> DyadicRational:
        """Smallest multiple of ``2**exponent`` that is not below this value."""
        return -((-self).floor_to(exponent))

    def to_fraction(self) -> Fraction:
        if self._exponent >= 0:
            return Fraction(self._mantissa << self._exponent)
        return Fraction(self._mantissa, 1 << -self._exponent)

    def __float__(self) -> float:
        if self._mantissa == 0:
            return 0.0

        if self.magnitude() < -1100:
            return 0.0 if self._mantissa > 0 else -0.0

        if self.magnitude() > 1024:
            raise RangeExceeded(f"{self.render()} does not fit a binary64 float.", "up")

        try:
            return float(self.to_fraction())
        except OverflowError:
            # Rounds up to 2**1024.
            raise RangeExceeded(f"{self.render()} does not fit a binary64 float.", "up") from None

    def __int__(self) -> int:
        return int(self.to_fraction())

    def __hash__(self) -> int:
        return hash((self._mantissa, self._exponent))

    def __bool__(self) -> bool:
        return self._mantissa != 0

    @staticmethod
    def coerce(value: Any) -> Optional[DyadicRational]:
        """Converts ints and dyadic fractions, returns None for anything else."""
        if isinstance(value, DyadicRational):
            return value
        if isinstance(value, bool):
            return None
        if isinstance(value, int):
            return DyadicRational(value)
        if isinstance(value, Fraction):
            try:
                return DyadicRational.from_fraction(value)
            except ValueError:
                return None
        return None

    def compare(self, other: DyadicRational) -> int:
        """Three way comparison returning -1, 0 or 1."""
        left, right = self.sign(), other.sign()
        if left != right:
            return -1 if left < right else 1
        if left == 0:
            return 0

        # Same sign: compare magnitudes first, so tiny exponents never get materialized.
        left_mag, right_mag = self.magnitude(), other.magnitude()
        if left_mag != right_mag:
            larger: int = 1 if left_mag > right_mag else -1
            return larger * left

        base: int = min(self._exponent, other._exponent)
        a: int = self._mantissa << (self._exponent - base)
        b: int = other._mantissa << (other._exponent - base)
        return (a > b) - (a < b)

    def __eq__(self, other: Any) -> bool:
        value = DyadicRational.coerce(other)
        if value is None:
            return NotImplemented
        return self._mantissa == value._mantissa and self._exponent == value._exponent

    def __lt__(self, other: Any) -> bool:
        value = DyadicRational.coerce(other)
        if value is None:
            return NotImplemented
        return self.compare(value) < 0

    def __neg__(self) -> DyadicRational:
        return DyadicRational(-self._mantissa, self._exponent)

    def __abs__(self) -> DyadicRational:
        return DyadicRational(abs(self._mantissa), self._exponent)

    def __add__(self, other: Any) -> DyadicRational:
        value = DyadicRational.coerce(other)
        if value is None:
            return NotImplemented
        if value._mantissa == 0:
            return self
        if self._mantissa == 0:
            return value

        base: int = min(self._exponent, value._exponent)
        return DyadicRational(
            (self._mantissa << (self._exponent - base)) + (value._mantissa << (value._exponent - base)),
            base,
        )

    __radd__ = __add__

    def __sub__(self, other: Any) -> DyadicRational:
        value = DyadicRational.coerce(other)
        if value is None:
            return NotImplemented
        return self + (-value)

    def __rsub__(self, other: Any) -> DyadicRational:
        value = DyadicRational.coerce(other)
        if value is None:
            return NotImplemented
        return value + (-self)

    def __mul__(self, other: Any) -> DyadicRational:
        value = DyadicRational.coerce(other)
        if value is None:
            return NotImplemented
        return DyadicRational(self._mantissa * value._mantissa, self._exponent + value._exponent)

    __rmul__ = __mul__


ZERO: DyadicRational = DyadicRational(0)
ONE: DyadicRational = DyadicRational(1)


def dyadic(value: Union[DyadicLike, str, Fraction]) -> DyadicRational:
    """Builds a :class:`DyadicRational` from an int, a dyadic fraction or its text form."""
    if isinstance(value, str):
        return DyadicRational.parse(value)

    converted = DyadicRational.coerce(value)
    if converted is None:
        raise TypeError(f"Cannot convert {value!r} to a dyadic rational.")
    return converted


def dyadic_arith(a: DyadicRational, b: DyadicRational, op: str) -> Union[DyadicRational, int]:
    """
    Exact arithmetic on two dyadic rationals.

    Parameters
    ----------
    op:
        One of ``add``, ``sub``, ``mul`` or ``cmp``. ``cmp`` returns -1, 0 or 1.
    """
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "cmp":
        return a.compare(b)
    raise ValueError(f"Unknown dyadic operation {op!r}.")


class DyadicInterval:
    """
    A closed interval with exact dyadic endpoints.

    Every operation is conservative: the result contains all pointwise results of the operands.

    Raises
    ------
    ValueError
        If ``lo > hi``.
    """

    __slots__ = ("_lo", "_hi")

    def __init__(self, lo: Union[DyadicLike, str], hi: Union[DyadicLike, str, None] = None) -> None:
        low: DyadicRational = dyadic(lo)
        high: DyadicRational = low if hi is None else dyadic(hi)

        if low > high:
            raise ValueError(f"Empty interval [{low}, {high}].")

        self._lo: DyadicRational = low
        self._hi: DyadicRational = high

    def __repr__(self) -> str:
        return f"<DyadicInterval(lo={self._lo}, hi={self._hi})>"

    def __str__(self) -> str:
        return f"[{self._lo},{self._hi}]"

    @property
    def lo(self) -> DyadicRational:
        """Lower endpoint."""
        return self._lo

    @property
    def hi(self) -> DyadicRational:
        """Upper endpoint."""
        return self._hi

    @classmethod
    def point(cls, value: Union[DyadicLike, str]) -> DyadicInterval:
        return cls(value, value)

    def __hash__(self) -> int:
        return hash((self._lo, self._hi))

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, DyadicInterval):
            return NotImplemented
        return self._lo == other._lo and self._hi == other._hi

    def __add__(self, other: Union[DyadicInterval, DyadicLike]) -> DyadicInterval:
        other = _as_interval(other)
        return DyadicInterval(self._lo + other._lo, self._hi + other._hi)

    __radd__ = __add__

    def __sub__(self, other: Union[DyadicInterval, DyadicLike]) -> DyadicInterval:
        other = _as_interval(other)
        return DyadicInterval(self._lo - other._hi, self._hi - other._lo)

    def __neg__(self) -> DyadicInterval:
        return DyadicInterval(-self._hi, -self._lo)

    def __mul__(self, other: Union[DyadicInterval, DyadicLike]) -> DyadicInterval:
        other = _as_interval(other)
        products = (
            self._lo * other._lo,
            self._lo * other._hi,
            self._hi * other._lo,
            self._hi * other._hi,
        )
        return DyadicInterval(min(products), max(products))

    __rmul__ = __mul__

    def scale(self, factor: DyadicLike) -> DyadicInterval:
        """Multiplies both endpoints by an exact scalar, swapping them for negative factors."""
        return self * DyadicInterval.point(factor)

    def width(self) -> DyadicRational:
        return self._hi - self._lo

    def midpoint(self) -> DyadicRational:
        return (self._lo + self._hi).shift(-1)

    def contains(self, value: Union[DyadicInterval, DyadicLike]) -> bool:
        """Whether a value, or every value of another interval, lies inside."""
        if isinstance(value, DyadicInterval):
            return self._lo <= value._lo and value._hi <= self._hi
        point: DyadicRational = dyadic(value)
        return self._lo <= point <= self._hi

    def overlaps(self, other: DyadicInterval) -> bool:
        return self._lo <= other._hi and other._lo <= self._hi

    def intersection(self, other: DyadicInterval) -> Optional[DyadicInterval]:
        """The common part, or None for disjoint intervals."""
        if not self.overlaps(other):
            return None
        return DyadicInterval(max(self._lo, other._lo), min(self._hi, other._hi))

    def hull(self, other: DyadicInterval) -> DyadicInterval:
        return DyadicInterval(min(self._lo, other._lo), max(self._hi, other._hi))

    def to_real(self) -> RealInterval:
        """Outward rounded floating enclosure."""
        return RealInterval.from_dyadic(self._lo).hull(RealInterval.from_dyadic(self._hi))


def _as_interval(value: Union[DyadicInterval, DyadicLike]) -> DyadicInterval:
    if isinstance(value, DyadicInterval):
        return value
    return DyadicInterval.point(value)


def _down(value: float, ulps: int = 2) -> float:
    for _ in range(ulps):
        value = float(np.nextafter(value, -np.inf))
    return value


def _up(value: float, ulps: int = 2) -> float:
    for _ in range(ulps):
        value = float(np.nextafter(value, np.inf))
    return value


class RealInterval:
    """
    A binary64 interval with outward rounding.

    Every operation widens the lower end down and the upper end up by two units in the last
    place, so results stay within four ulps of the exact image while enclosing it.

    Parameters
    ----------
    lo:
        Lower endpoint.
    hi:
        Upper endpoint. Defaults to ``lo``.
    """

    __slots__ = ("lo", "hi")

    def __init__(self, lo: float, hi: Optional[float] = None) -> None:
        high: float = lo if hi is None else hi
        if math.isnan(lo) or math.isnan(high):
            raise ValueError("Interval endpoints must not be NaN.")
        if lo > high:
            raise ValueError(f"Empty interval [{lo}, {high}].")

        self.lo: float = float(lo)
        self.hi: float = float(high)

    def __repr__(self) -> str:
        return f"<RealInterval(lo={self.lo!r}, hi={self.hi!r})>"

    def __str__(self) -> str:
        return f"[{self.lo:.17g},{self.hi:.17g}]"

    @classmethod
    def widened(cls, lo: float, hi: float) -> RealInterval:
        """An interval from nearest rounded endpoints, widened outward."""
        return cls(_down(lo), _up(hi))

    @classmethod
    def from_dyadic(cls, value: DyadicRational) -> RealInterval:
        nearest: float = float(value)
        low, high = _down(nearest, 1), _up(nearest, 1)
        if value.sign() >= 0:
            low = max(low, 0.0)
        if value.sign() <= 0:
            high = min(high, 0.0)
        return cls(low, high)

    @classmethod
    def from_fraction(cls, value: Fraction) -> RealInterval:
        nearest: float = float(value)
        return cls(_down(nearest, 1), _up(nearest, 1))

    @classmethod
    def total(cls, items: Iterable[RealInterval]) -> RealInterval:
        """
        Sum of many intervals.

        ``math.fsum`` rounds each endpoint sum once, so one ulp of widening encloses it.
        """
        values: List[RealInterval] = list(items)
        if not values:
            return cls(0.0)
        return cls(_down(math.fsum(v.lo for v in values), 1), _up(math.fsum(v.hi for v in values), 1))

    def __hash__(self) -> int:
        return hash((self.lo, self.hi))

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, RealInterval):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi

    def __add__(self, other: Union[RealInterval, float]) -> RealInterval:
        other = _as_real(other)
        return RealInterval.widened(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __sub__(self, other: Union[RealInterval, float]) -> RealInterval:
        other = _as_real(other)
        return RealInterval.widened(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other: Union[RealInterval, float]) -> RealInterval:
        return _as_real(other) - self

    def __neg__(self) -> RealInterval:
        return RealInterval(-self.hi, -self.lo)

    def __mul__(self, other: Union[RealInterval, float]) -> RealInterval:
        other = _as_real(other)
        products: Tuple[float, ...] = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return RealInterval.widened(min(products), max(products))

    __rmul__ = __mul__

    def __truediv__(self, other: Union[RealInterval, float]) -> RealInterval:
        other = _as_real(other)
        if other.lo <= 0.0 <= other.hi:
            raise ZeroDivisionError("Divisor interval contains zero.")

        quotients: Tuple[float, ...] = (
            self.lo / other.lo,
            self.lo / other.hi,
            self.hi / other.lo,
            self.hi / other.hi,
        )
        return RealInterval.widened(min(quotients), max(quotients))

    def exp(self) -> RealInterval:
        """
        Outward enclosure of ``exp``.

        Raises
        ------
        RangeExceeded
            The upper end overflows binary64, direction ``"up"``.
        """
        if self.hi > EXP_OVERFLOW:
            raise RangeExceeded(f"exp({self.hi!r}) overflows binary64.", "up")

        return RealInterval(max(_down(math.exp(self.lo)), 0.0), _up(math.exp(self.hi)))

    def log(self) -> RealInterval:
        """
        Raises
        ------
        RangeExceeded
            The lower end is not positive, direction ``"down"``.
        """
        if self.lo <= 0.0:
            raise RangeExceeded(f"log is undefined at {self.lo!r}.", "down")
        return RealInterval.widened(math.log(self.lo), math.log(self.hi))

    def sqrt(self) -> RealInterval:
        if self.lo < 0.0:
            raise RangeExceeded(f"sqrt is undefined at {self.lo!r}.", "down")
        return RealInterval(max(_down(math.sqrt(self.lo)), 0.0), _up(math.sqrt(self.hi)))

    def power(self, exponent: float) -> RealInterval:
        """``self ** exponent`` for a positive base."""
        if self.lo <= 0.0:
            raise RangeExceeded(f"power needs a positive base, got {self.lo!r}.", "down")
        if exponent == 0.5:
            return self.sqrt()

        ends = (math.pow(self.lo, exponent), math.pow(self.hi, exponent))
        return RealInterval(max(_down(min(ends)), 0.0), _up(max(ends)))

    def hull(self, other: RealInterval) -> RealInterval:
        return RealInterval(min(self.lo, other.lo), max(self.hi, other.hi))

    def contains(self, value: Union[RealInterval, float]) -> bool:
        if isinstance(value, RealInterval):
            return self.lo <= value.lo and value.hi <= self.hi
        return self.lo <= value <= self.hi

    def overlaps(self, other: RealInterval) -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def certainly_below(self, other: RealInterval) -> bool:
        """True if every value of this interval is strictly below every value of ``other``."""
        return self.hi < other.lo

    def width(self) -> float:
        return self.hi - self.lo

    def midpoint(self) -> float:
        return self.lo + (self.hi - self.lo) / 2


def _as_real(value: Union[RealInterval, float, int]) -> RealInterval:
    if isinstance(value, RealInterval):
        return value
    return RealInterval(float(value))


def outward_exp(x: RealInterval) -> RealInterval:
    """
    Encloses ``exp`` over an interval.

    Raises
    ------
    RangeExceeded
        On overflow, with ``direction == "up"``.
    """
    return x.exp()
