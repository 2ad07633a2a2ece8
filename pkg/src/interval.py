"""
Closed float intervals with outward rounding.

Every arithmetic result is pushed one ulp outward with math.nextafter so the
true real value stays inside the returned bounds.
"""

import math
from dataclasses import dataclass
from fractions import Fraction


def _down(x):
    return math.nextafter(x, -math.inf)


def _up(x):
    return math.nextafter(x, math.inf)


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"Invalid interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, value):
        """Tightest interval around a float, int or Fraction."""
        if isinstance(value, Fraction):
            x = float(value)
            if Fraction(x) == value:
                return cls(x, x)
            return cls(_down(x), _up(x))
        x = float(value)
        return cls(x, x)

    @classmethod
    def around(cls, mid, radius):
        return cls(_down(mid - radius), _up(mid + radius))

    @classmethod
    def hull(cls, *intervals):
        return cls(min(i.lo for i in intervals), max(i.hi for i in intervals))

    @property
    def mid(self):
        return 0.5 * (self.lo + self.hi)

    @property
    def width(self):
        return self.hi - self.lo

    def contains(self, value, slack=0.0):
        return self.lo - slack <= float(value) <= self.hi + slack

    def __add__(self, other):
        other = other if isinstance(other, Interval) else Interval.point(other)
        return Interval(_down(self.lo + other.lo), _up(self.hi + other.hi))

    __radd__ = __add__

    def __sub__(self, other):
        other = other if isinstance(other, Interval) else Interval.point(other)
        return Interval(_down(self.lo - other.hi), _up(self.hi - other.lo))

    def __rsub__(self, other):
        return Interval.point(other) - self

    def __mul__(self, other):
        other = other if isinstance(other, Interval) else Interval.point(other)
        products = (self.lo * other.lo, self.lo * other.hi,
                    self.hi * other.lo, self.hi * other.hi)
        return Interval(_down(min(products)), _up(max(products)))

    __rmul__ = __mul__

    def square(self):
        if self.lo >= 0:
            return Interval(_down(self.lo * self.lo), _up(self.hi * self.hi))
        if self.hi <= 0:
            return Interval(_down(self.hi * self.hi), _up(self.lo * self.lo))
        return Interval(0.0, _up(max(self.lo * self.lo, self.hi * self.hi)))

    def widen(self, radius):
        return Interval(_down(self.lo - radius), _up(self.hi + radius))

    def to_dict(self):
        return {"mid": self.mid, "width": self.width, "lo": self.lo, "hi": self.hi}

    def __repr__(self):
        return f"[{self.lo:.12g}, {self.hi:.12g}]"
