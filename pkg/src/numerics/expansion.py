"""
Binary expansion oracles for probabilities in [0, 1]

Digits use the terminating form for dyadic values: p = 1/2 is 0.1000...,
never 0.0111... Digit j is floor(2^j p) - 2 floor(2^(j-1) p).
"""

import threading
from fractions import Fraction

from src.numerics.computable import ComputableReal, ExactReal, GUARD_BITS, RealEnclosure
from src.utils.exceptions import DigitUndecidable, InvalidDistribution
from src.utils.settings import load_settings

DIGIT_BUDGET = load_settings('sampling')['numerics']['digit_refinement_budget']


class ProbabilityExpansion:
    """
    Digit oracle j -> b_j for a probability p

    Rational p is handled exactly. A computable-real p is refined until
    floor(2^j p) is pinned down; a dyadic p hidden behind an enclosure can
    never be pinned at its own boundary and raises DigitUndecidable.
    """

    def __init__(self, value, name=None):
        if isinstance(value, ExactReal):
            value = value.value
        if isinstance(value, ComputableReal):
            self.exact = False
            self.real = value
            self.value = None
        else:
            self.exact = True
            self.value = Fraction(value)
            self.real = ExactReal(self.value)
            if not 0 <= self.value <= 1:
                raise InvalidDistribution(f"Probability {self.value} outside [0, 1]")
        self.name = name or self.real.name
        self._floors = {}
        self._lock = threading.Lock()

    def __repr__(self):
        return f"ProbabilityExpansion({self.name})"

    @property
    def is_zero(self):
        return self.exact and self.value == 0

    @property
    def is_one(self):
        return self.exact and self.value == 1

    def enclose(self, k):
        return self.real.enclose(k)

    def scaled_floor(self, j):
        """floor(2^j p)"""
        if self.exact:
            return (self.value.numerator << j) // self.value.denominator
        with self._lock:
            cached = self._floors.get(j)
        if cached is not None:
            return cached
        k = j + GUARD_BITS
        for _ in range(DIGIT_BUDGET + 1):
            enclosure = self.real.enclose(k)
            low = (enclosure.lo.numerator << j) // enclosure.lo.denominator
            high = (enclosure.hi.numerator << j) // enclosure.hi.denominator
            if low == high:
                with self._lock:
                    self._floors[j] = low
                return low
            k *= 2
        raise DigitUndecidable(f"Digit {j} of {self.name} undecidable within the refinement budget")

    def digit(self, j):
        """Binary digit b_j, j >= 1"""
        if j < 1:
            raise ValueError("Digit index starts at 1")
        return self.scaled_floor(j) & 1

    def integer_part(self):
        """0 for p < 1, 1 for p = 1"""
        return self.scaled_floor(0)

    def partial_sum(self, k):
        """Sum of b_j 2^-j for j <= k (the fractional digits; p = 1 gives 0)"""
        return Fraction(self.scaled_floor(k) - (self.integer_part() << k), 1 << k)

    def prefix_ones(self, j):
        """Number of one digits among b_1 .. b_j"""
        fractional = self.scaled_floor(j) - (self.integer_part() << j)
        return bin(fractional).count('1')

    def residual_bounds(self, k):
        """Enclosure of p minus the integer part minus the digits up to k"""
        if self.exact:
            return RealEnclosure.point(self.value - self.integer_part() - self.partial_sum(k))
        enclosure = self.real.enclose(k + GUARD_BITS)
        base = self.integer_part() + self.partial_sum(k)
        return RealEnclosure(max(enclosure.lo - base, Fraction(0)), min(enclosure.hi - base, Fraction(1, 1 << k)))


def expansion_digit(p, j):
    return p.digit(j)
