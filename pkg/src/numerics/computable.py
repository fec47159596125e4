"""
Computable reals backed by mpmath interval arithmetic

A handle produces nested enclosures [lo, hi] of any requested width 2^-k.
Endpoints are exact Fractions (mpmath interval endpoints are binary floats),
or +/-inf when an interval is unbounded.
"""

import math
import threading
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from mpmath import iv, libmp

from src.utils.exceptions import EnclosureBudgetExceeded
from src.utils.settings import load_settings

_NUMERICS = load_settings('sampling')['numerics']
GUARD_BITS = _NUMERICS['guard_bits']
MIN_PRECISION = _NUMERICS['min_precision']
MAX_PRECISION = _NUMERICS['max_precision']
BOUNDARY_BUDGET = _NUMERICS['boundary_refinement_budget']

# iv.prec is process-global; evaluations hold this while they change it
_IV_LOCK = threading.RLock()


@dataclass(frozen=True)
class RealEnclosure:
    """Closed interval [lo, hi] known to contain a real value"""

    lo: object
    hi: object

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"Empty enclosure [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, value):
        value = Fraction(value)
        return cls(value, value)

    @property
    def width(self):
        if not self.is_finite:
            return math.inf
        return self.hi - self.lo

    @property
    def is_finite(self):
        return not (isinstance(self.lo, float) or isinstance(self.hi, float))

    @property
    def midpoint(self):
        if not self.is_finite:
            raise ValueError("Unbounded enclosure has no midpoint")
        return (self.lo + self.hi) / 2

    def contains(self, value):
        return self.lo <= value <= self.hi

    def within(self, k):
        """True when the width is at most 2^-k"""
        return self.width <= Fraction(1, 1 << k)

    def intersect(self, other):
        return RealEnclosure(max(self.lo, other.lo), min(self.hi, other.hi))

    def scaled(self, factor):
        """Enclosure of factor * x for a positive rational factor"""
        factor = Fraction(factor)
        return RealEnclosure(self.lo * factor, self.hi * factor)

    def __float__(self):
        if self.is_finite:
            return float(self.midpoint)
        return float(self.lo) if self.lo == self.hi else math.nan


def _raw_to_value(raw):
    if raw == libmp.finf:
        return math.inf
    if raw == libmp.fninf:
        return -math.inf
    if raw == libmp.fnan:
        raise EnclosureBudgetExceeded("Interval evaluation produced NaN")
    p, q = libmp.to_rational(raw)
    return Fraction(p, q)


def to_enclosure(value):
    """Convert an mpmath iv interval to a RealEnclosure with exact endpoints"""
    a, b = value._mpi_
    return RealEnclosure(_raw_to_value(a), _raw_to_value(b))


def fraction_interval(value, ctx=iv):
    """Tightest interval for a rational at the context's precision (exact for short dyadics)"""
    value = Fraction(value)
    if value.denominator == 1:
        return ctx.mpf(value.numerator)
    return ctx.mpf(value.numerator) / ctx.mpf(value.denominator)


def as_interval(value, ctx=iv):
    if isinstance(value, ComputableReal):
        return value.interval(ctx)
    return fraction_interval(value, ctx)


def evaluate(build, prec):
    """Evaluate build(iv) at a fixed working precision"""
    with _IV_LOCK:
        saved = iv.prec
        iv.prec = prec
        try:
            return to_enclosure(build(iv))
        finally:
            iv.prec = saved


def evaluate_to_width(build, k, min_bits=0):
    """
    Evaluate build(iv) until the enclosure width is at most 2^-k

    Precision starts at max(k, min_bits) + guard bits and doubles on failure.
    """
    target = Fraction(1, 1 << k)
    prec = max(max(k, min_bits) + GUARD_BITS, MIN_PRECISION)
    best = None
    while prec <= MAX_PRECISION:
        enclosure = evaluate(build, prec)
        best = enclosure if best is None else best.intersect(enclosure)
        if best.width <= target:
            return best
        prec *= 2
    raise EnclosureBudgetExceeded(
        f"Could not reach width 2^-{k} within {MAX_PRECISION} bits of precision"
    )


class ComputableReal(ABC):
    """Handle to a real number that can be enclosed to any precision"""

    name = 'real'

    @abstractmethod
    def interval(self, ctx):
        """Value as an interval at the context's current precision"""

    @abstractmethod
    def enclose(self, k):
        """RealEnclosure of width <= 2^-k, nested across calls"""

    def approx(self):
        return float(self.enclose(53))

    def _lift(self, other):
        return other if isinstance(other, ComputableReal) else ExactReal(other)

    def _exact_pair(self, other):
        return isinstance(self, ExactReal) and isinstance(other, ExactReal)

    def __add__(self, other):
        other = self._lift(other)
        if self._exact_pair(other):
            return ExactReal(self.value + other.value)
        return IntervalReal(lambda ctx: self.interval(ctx) + other.interval(ctx), f"({self.name}+{other.name})")

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        if self._exact_pair(other):
            return ExactReal(self.value - other.value)
        return IntervalReal(lambda ctx: self.interval(ctx) - other.interval(ctx), f"({self.name}-{other.name})")

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        if self._exact_pair(other):
            return ExactReal(self.value * other.value)
        return IntervalReal(lambda ctx: self.interval(ctx) * other.interval(ctx), f"{self.name}*{other.name}")

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        if self._exact_pair(other):
            return ExactReal(self.value / other.value)
        return IntervalReal(lambda ctx: self.interval(ctx) / other.interval(ctx), f"{self.name}/{other.name}")

    def __neg__(self):
        return IntervalReal(lambda ctx: -self.interval(ctx), f"-{self.name}")

    def __repr__(self):
        return f"{type(self).__name__}({self.name})"


class ExactReal(ComputableReal):
    """A rational number; every enclosure is the point itself"""

    def __init__(self, value):
        self.value = Fraction(value)
        self.name = str(self.value)

    def interval(self, ctx):
        return fraction_interval(self.value, ctx)

    def enclose(self, k):
        return RealEnclosure.point(self.value)

    def approx(self):
        return float(self.value)


class IntervalReal(ComputableReal):
    """
    Real defined by an interval expression build(ctx)

    The tightest enclosure seen so far is kept; every answer is the
    intersection of all evaluations, so enclosures nest.
    """

    def __init__(self, build, name='real'):
        self._build = build
        self.name = name
        self._best = None
        self._lock = threading.Lock()

    def interval(self, ctx):
        return self._build(ctx)

    def enclose(self, k):
        with self._lock:
            if self._best is not None and self._best.within(k):
                return self._best
            enclosure = evaluate_to_width(self._build, k)
            self._best = enclosure if self._best is None else self._best.intersect(enclosure)
            return self._best


def compare(x, real, start=None):
    """
    Compare a rational x with a computable real

    Returns:
        int: -1 if x < real, 1 if x > real, 0 if provably equal (exact reals only,
        or a degenerate enclosure)
    """
    x = Fraction(x)
    if isinstance(real, ExactReal):
        return (x > real.value) - (x < real.value)
    k = start or max(x.denominator.bit_length() + GUARD_BITS, MIN_PRECISION)
    for _ in range(BOUNDARY_BUDGET + 1):
        enclosure = real.enclose(k)
        if x < enclosure.lo:
            return -1
        if x > enclosure.hi:
            return 1
        if enclosure.lo == enclosure.hi:
            return 0
        k *= 2
        if k > MAX_PRECISION:
            break
    raise EnclosureBudgetExceeded(f"Could not separate {x} from {real.name}")


def constant(value):
    return ExactReal(value)


@lru_cache(maxsize=None)
def exp_neg(x):
    """e^-x for a rational x"""
    x = Fraction(x)
    if x == 0:
        return ExactReal(1)
    return IntervalReal(lambda ctx: ctx.exp(-fraction_interval(x, ctx)), f"exp(-{x})")


@lru_cache(maxsize=None)
def one_minus_exp_neg(x):
    """1 - e^-x for a rational x"""
    x = Fraction(x)
    if x == 0:
        return ExactReal(0)
    return IntervalReal(lambda ctx: 1 - ctx.exp(-fraction_interval(x, ctx)), f"1-exp(-{x})")


@lru_cache(maxsize=None)
def logistic_weight(j):
    """p_j = e^(-2^-j) / (1 + e^(-2^-j)), the j-th convolution Bernoulli parameter"""
    x = Fraction(1, 1 << j)
    return IntervalReal(lambda ctx: 1 / (1 + ctx.exp(fraction_interval(x, ctx))), f"p_{j}")


INV_E = exp_neg(1)
PI = IntervalReal(lambda ctx: +ctx.pi, 'pi')
LOG2_E = IntervalReal(lambda ctx: 1 / ctx.ln2, 'log2(e)')
