"""Certified rational brackets ``center ± radius``."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass an exact rational")
    return Fraction(value)


@dataclass(frozen=True)
class ApproxReal:
    """A closed rational interval ``[center - radius, center + radius]``
    known to contain some real quantity."""

    center: Fraction
    radius: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "center", as_fraction(self.center))
        object.__setattr__(self, "radius", as_fraction(self.radius))
        if self.radius < 0:
            raise ValueError("negative radius")

    @classmethod
    def exact(cls, value) -> ApproxReal:
        return cls(as_fraction(value), Fraction(0))

    @classmethod
    def from_bounds(cls, lo, hi) -> ApproxReal:
        lo, hi = as_fraction(lo), as_fraction(hi)
        if hi < lo:
            raise ValueError(f"empty bracket [{lo}, {hi}]")
        return cls((lo + hi) / 2, (hi - lo) / 2)

    @property
    def lo(self) -> Fraction:
        return self.center - self.radius

    @property
    def hi(self) -> Fraction:
        return self.center + self.radius

    @property
    def width(self) -> Fraction:
        return 2 * self.radius

    def __add__(self, other):
        other = _coerce(other)
        return ApproxReal(self.center + other.center, self.radius + other.radius)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        return ApproxReal(self.center - other.center, self.radius + other.radius)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __neg__(self):
        return ApproxReal(-self.center, self.radius)

    def scale(self, factor) -> ApproxReal:
        factor = as_fraction(factor)
        return ApproxReal(self.center * factor, self.radius * abs(factor))

    def __abs__(self):
        lo, hi = self.lo, self.hi
        if lo >= 0:
            return self
        if hi <= 0:
            return -self
        return ApproxReal.from_bounds(0, max(-lo, hi))

    def widen(self, amount) -> ApproxReal:
        return ApproxReal(self.center, self.radius + as_fraction(amount))

    def extend_up(self, amount) -> ApproxReal:
        """Bracket for ``x + t`` where ``0 <= t <= amount``."""
        return ApproxReal.from_bounds(self.lo, self.hi + as_fraction(amount))

    def contains(self, value) -> bool:
        value = as_fraction(value)
        return self.lo <= value <= self.hi

    def excludes_zero(self) -> bool:
        return not self.contains(0)

    def certainly_le(self, other) -> bool:
        return self.hi <= _coerce(other).lo

    def __str__(self):
        return f"{self.center} ± {self.radius}"


def _coerce(value) -> ApproxReal:
    if isinstance(value, ApproxReal):
        return value
    return ApproxReal.exact(value)
