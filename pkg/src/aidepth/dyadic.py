"""Exact dyadic rationals and integer-only base-2 logarithms."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Union

Rational = Union[int, Fraction, "DyadicRational"]


def _as_fraction(value: Rational) -> Fraction:
    if isinstance(value, DyadicRational):
        return value.to_fraction()
    return Fraction(value)


def floor_log2(value: Rational) -> int:
    """Exact ``floor(log2(value))`` for a positive rational."""
    q = _as_fraction(value)
    if q <= 0:
        raise ValueError(f"floor_log2 of non-positive value {q}")
    n, d = q.numerator, q.denominator
    e = n.bit_length() - d.bit_length()
    # 2**e <= n/d < 2**(e+1) after at most one correction
    if e >= 0:
        if n < d << e:
            e -= 1
    elif n << -e < d:
        e -= 1
    return e


def ceil_log2(value: Rational) -> int:
    """Exact ``ceil(log2(value))`` for a positive rational."""
    e = floor_log2(value)
    q = _as_fraction(value)
    return e if q == Fraction(2) ** e else e + 1


def log2(value: Rational) -> float:
    """Float log2 that survives numerators/denominators beyond float range."""
    import math

    q = _as_fraction(value)
    if q <= 0:
        raise ValueError(f"log2 of non-positive value {q}")
    return math.log2(q.numerator) - math.log2(q.denominator)


@total_ordering
@dataclass(frozen=True)
class DyadicRational:
    """``numerator / 2**exponent`` kept in canonical form (odd numerator or zero)."""

    numerator: int
    exponent: int

    def __post_init__(self) -> None:
        if self.numerator < 0 or self.exponent < 0:
            raise ValueError("DyadicRational must be non-negative with exponent >= 0")
        n, e = self.numerator, self.exponent
        if n == 0:
            e = 0
        else:
            shift = min((n & -n).bit_length() - 1, e)
            n >>= shift
            e -= shift
        object.__setattr__(self, "numerator", n)
        object.__setattr__(self, "exponent", e)

    @classmethod
    def zero(cls) -> DyadicRational:
        return cls(0, 0)

    @classmethod
    def pow2(cls, k: int) -> DyadicRational:
        """``2**-k`` for ``k >= 0``."""
        if k < 0:
            raise ValueError("pow2 takes a non-negative exponent")
        return cls(1, k)

    @classmethod
    def from_fraction(cls, q: Fraction) -> DyadicRational:
        d = q.denominator
        if q < 0 or d & (d - 1):
            raise ValueError(f"{q} is not a non-negative dyadic rational")
        return cls(q.numerator, d.bit_length() - 1)

    @classmethod
    def parse(cls, text: str) -> DyadicRational:
        num, _, den = text.partition("/2^")
        return cls(int(num), int(den or 0))

    def to_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.exponent)

    def __add__(self, other: DyadicRational) -> DyadicRational:
        if not isinstance(other, DyadicRational):
            return NotImplemented
        e = max(self.exponent, other.exponent)
        n = (self.numerator << (e - self.exponent)) + (other.numerator << (e - other.exponent))
        return DyadicRational(n, e)

    def __mul__(self, other: DyadicRational) -> DyadicRational:
        if not isinstance(other, DyadicRational):
            return NotImplemented
        return DyadicRational(self.numerator * other.numerator, self.exponent + other.exponent)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, DyadicRational):
            return (self.numerator, self.exponent) == (other.numerator, other.exponent)
        if isinstance(other, (int, Fraction)):
            return self.to_fraction() == other
        return NotImplemented

    def __lt__(self, other: Rational) -> bool:
        if isinstance(other, DyadicRational):
            e = max(self.exponent, other.exponent)
            return self.numerator << (e - self.exponent) < other.numerator << (e - other.exponent)
        if isinstance(other, (int, Fraction)):
            return self.to_fraction() < other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.numerator, self.exponent))

    def __bool__(self) -> bool:
        return self.numerator != 0

    def __float__(self) -> float:
        return float(self.to_fraction())

    def __str__(self) -> str:
        return f"{self.numerator}/2^{self.exponent}"

    def __repr__(self) -> str:
        return f"DyadicRational({self})"
