"""
The weighted sequence space: weights w(i) = 1/(i(i+1)), truncated inner
products, and certified residue-class weight sums

    s(j, L) = Σ_{m≥0} w(j + mL),

which turn a residual with period L into its full weighted norm.
"""

import logging
import math
import sys
import threading
from fractions import Fraction

from .config import settings
from .errors import PreconditionError
from .interval import Interval

logger = logging.getLogger(__name__)

EPS = sys.float_info.epsilon


def weight(i):
    if i < 1:
        raise PreconditionError(f"weights start at index 1, got {i}")
    return Fraction(1, i * (i + 1))


def total_weight(N):
    """Σ_{i=1..N} w(i), which telescopes to 1 - 1/(N+1)."""
    if N < 0:
        raise PreconditionError(f"N must be nonnegative, got {N}")
    return 1 - Fraction(1, N + 1)


def inner_truncated(a, b, N):
    """Σ_{i=1..N} a_i b_i w(i); exact when every entry is exact."""
    if len(a) != len(b):
        raise PreconditionError(f"length mismatch: {len(a)} vs {len(b)}")
    if N < 0 or N > len(a):
        raise PreconditionError(f"vectors of length {len(a)} do not cover 1..{N}")
    pairs = list(zip(a[:N], b[:N]))
    if all(not isinstance(x, float) and not isinstance(y, float) for x, y in pairs):
        return sum((Fraction(x) * Fraction(y) * weight(i) for i, (x, y) in enumerate(pairs, start=1)),
                   Fraction(0))
    return math.fsum(float(x) * float(y) / (i * (i + 1)) for i, (x, y) in enumerate(pairs, start=1))


def _class_tail_bounds(j, L, terms):
    """
    Bounds on Σ_{m≥terms} w(j + mL).

    w is decreasing, so each class term is sandwiched by the mean of the L
    consecutive weights just before / just after it, and Σ_{i≥N} w(i) = 1/N.
    """
    lower = 1.0 / (L * (j + terms * L))
    upper = 1.0 / (L * (j + (terms - 1) * L + 1))
    return math.nextafter(lower, 0.0), math.nextafter(upper, math.inf)


def _summed_class(j, L, tol):
    if L == 1:
        # The single class is every index: the telescoping total
        return Interval.point(1.0)

    terms = max(2, math.ceil(math.sqrt(2.0 / tol) / L) + 2)
    tail_lo, tail_hi = _class_tail_bounds(j, L, terms)
    while tail_hi - tail_lo > 0.5 * tol:
        terms *= 2
        tail_lo, tail_hi = _class_tail_bounds(j, L, terms)

    head = math.fsum(1.0 / (i * (i + 1)) for i in range(j, j + terms * L, L))
    # each term is correctly rounded and fsum adds one more rounding
    rounding = 2.0 * EPS * head
    return Interval(head + tail_lo, head + tail_hi).widen(rounding)


class WeightedSpace:
    """Class-sum evaluator with a shared cache keyed by (j, L, tol)."""

    def __init__(self, tol=None):
        self.tol = settings.tol if tol is None else tol
        if not self.tol > 0:
            raise PreconditionError("tol must be positive")
        self._cache = {}
        self._lock = threading.Lock()

    def class_weight_sum(self, j, L, tol=None):
        tol = self.tol if tol is None else tol
        if L < 1 or not 1 <= j <= L:
            raise PreconditionError(f"need 1 <= j <= L, got j={j}, L={L}")
        if not tol > 0:
            raise PreconditionError("tol must be positive")

        key = (j, L, tol)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        value = _summed_class(j, L, tol)
        with self._lock:
            # inserts are idempotent: every thread computes the same interval
            self._cache.setdefault(key, value)
        return value

    def class_sums(self, L, tol=None):
        """s(1, L), ..., s(L, L)."""
        logger.debug("class sums for L=%d", L)
        return [self.class_weight_sum(j, L, tol) for j in range(1, L + 1)]

    def periodic_norm_sq(self, r, tol=None):
        """‖x‖²_H for the period-L sequence whose class j value is r[j-1] (class L is i ≡ 0)."""
        L = len(r)
        if L < 1:
            raise PreconditionError("residual must cover at least one class")
        total = Interval(0.0, 0.0)
        for value, s in zip(r, self.class_sums(L, tol)):
            if value == 0:
                continue
            if isinstance(value, float):
                square = Interval.point(value).square()
            else:
                square = Interval.point(Fraction(value) ** 2)
            total = total + s * square
        return total

    def tail_term(self, L, tol=None):
        """Σ_{i≥1} w(iL): the weight of the indices divisible by L."""
        return self.class_weight_sum(L, L, tol)


_default_space = WeightedSpace()


def default_space():
    return _default_space


def class_weight_sum(j, L, tol=None):
    return _default_space.class_weight_sum(j, L, tol)


def periodic_norm_sq(r, tol=None):
    return _default_space.periodic_norm_sq(r, tol)


def tail_term(L, tol=None):
    return _default_space.tail_term(L, tol)
