"""
Dyadic intervals [lo/2^depth, hi/2^depth) refined one bit at a time
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction


@dataclass(frozen=True)
class DyadicInterval:
    """Half-open interval [lo/2^depth, hi/2^depth) with 0 <= lo < hi <= 2^depth"""

    lo: int
    hi: int
    depth: int

    def __post_init__(self):
        if self.depth < 0 or not (0 <= self.lo < self.hi <= (1 << self.depth)):
            raise ValueError(f"Invalid dyadic interval [{self.lo}, {self.hi}) at depth {self.depth}")

    @classmethod
    def unit(cls):
        return cls(0, 1, 0)

    @classmethod
    def from_bits(cls, bits):
        interval = cls.unit()
        for bit in bits:
            interval = interval.refine(bit)
        return interval

    @property
    def lower(self):
        return Fraction(self.lo, 1 << self.depth)

    @property
    def upper(self):
        return Fraction(self.hi, 1 << self.depth)

    @property
    def width(self):
        return Fraction(self.hi - self.lo, 1 << self.depth)

    def refine(self, bit):
        """Left half for bit 0, right half for bit 1; depth grows by one"""
        span = self.hi - self.lo
        lo = 2 * self.lo + (span if bit else 0)
        return DyadicInterval(lo, lo + span, self.depth + 1)

    def contains(self, x):
        return self.lower <= x < self.upper

    def __str__(self):
        return f"[{self.lower}, {self.upper})"


def refine(interval, bit):
    return interval.refine(bit)


class Containment(Enum):
    """Outcome of testing an interval against a cell with enclosed endpoints"""

    INSIDE = 'inside'          # provably I is a subset of the cell
    OUTSIDE = 'outside'        # provably disjoint
    STRADDLING = 'straddling'  # provably neither: overlaps and sticks out
    UNDECIDED = 'undecided'    # enclosures too wide, caller refines

    @property
    def decided(self):
        return self is not Containment.UNDECIDED


def interval_inside(interval, cell_lo, cell_hi):
    """
    Decide whether [a, b) lies inside [cell_lo, cell_hi)

    Args:
        interval: DyadicInterval I = [a, b)
        cell_lo: RealEnclosure of the cell's left end
        cell_hi: RealEnclosure of the cell's right end

    Returns:
        Containment: INSIDE / OUTSIDE / STRADDLING, or UNDECIDED when the
        enclosures overlap an endpoint of I
    """
    a, b = interval.lower, interval.upper
    if cell_lo.hi <= a and b <= cell_hi.lo:
        return Containment.INSIDE
    if b <= cell_lo.lo or cell_hi.hi <= a:
        return Containment.OUTSIDE
    # Not inside once an end provably sticks out; the overlap must be provable too
    sticks_out = cell_lo.lo > a or cell_hi.hi < b
    overlaps = cell_lo.hi < b and a < cell_hi.lo
    if sticks_out and overlaps:
        return Containment.STRADDLING
    return Containment.UNDECIDED


def ceil_log2(x):
    """Smallest integer k with 2^k >= x, for a positive rational x"""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("ceil_log2 needs a positive argument")
    k = x.numerator.bit_length() - x.denominator.bit_length()
    while _power_of_two(k) < x:
        k += 1
    while _power_of_two(k - 1) >= x:
        k -= 1
    return k


def _power_of_two(k):
    return Fraction(1 << k) if k >= 0 else Fraction(1, 1 << -k)
