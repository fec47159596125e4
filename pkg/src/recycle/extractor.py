"""
Randomness extraction by interval nesting

Each (symbol, leaf) pair narrows [U-, U+) to the leaf's slice of its
conditional CDF. The leading binary digits shared by U- and U+ are
emitted; they are fair bits independent of the symbols.

The interval is held as integers over a power-of-two scale. Slices are
floored onto that grid after it has been widened to keep precision_bits
of resolution inside the slice, so the state never grows past the
working precision plus the undecided suffix.
"""

import sys
import os
from fractions import Fraction

sys.path.append(os.path.dirname(os.path.dirname(os.path.dirname(__file__))))

from src.source.tape_io import write_tape
from src.utils.exceptions import InvalidLeaf
from src.utils.logger import setup_logger
from src.utils.settings import load_settings

logger = setup_logger('recycle_extractor')

PRECISION_BITS = load_settings('sampling')['extractor']['precision_bits']


class ExtractorState:
    """
    Current interval [U-, U+) with the emitted prefix shed

    lo and hi hold the undecided suffix over 2^scale:
    U- = (prefix + lo / 2^scale) / 2^R and U+ = (prefix + hi / 2^scale) / 2^R,
    where prefix is the integer read from the R emitted bits.
    """

    def __init__(self, precision_bits=None):
        self.precision_bits = precision_bits or PRECISION_BITS
        self.lo = 0
        self.hi = 1
        self.scale = 0
        self.emitted = []

    @property
    def emitted_count(self):
        """R_n = max t with floor(2^t U-) = floor(2^t U+)"""
        return len(self.emitted)

    @property
    def interval(self):
        """(U-, U+) as exact rationals"""
        denominator = 1 << (len(self.emitted) + self.scale)
        prefix = int(''.join(map(str, self.emitted)) or '0', 2)
        base = prefix << self.scale
        return Fraction(base + self.lo, denominator), Fraction(base + self.hi, denominator)

    def _widen(self, mass):
        # width * mass >= 2^precision_bits after this
        mass = Fraction(mass)
        need = self.precision_bits + mass.denominator.bit_length() - mass.numerator.bit_length() + 2
        short = need - (self.hi - self.lo).bit_length()
        if short > 0:
            self.lo <<= short
            self.hi <<= short
            self.scale += short

    def narrow(self, low_fraction, high_fraction):
        """Replace the interval by its [low, high) slice and return new bits"""
        low_fraction, high_fraction = Fraction(low_fraction), Fraction(high_fraction)
        self._widen(high_fraction - low_fraction)
        width = self.hi - self.lo
        self.lo, self.hi = (
            self.lo + width * low_fraction.numerator // low_fraction.denominator,
            self.lo + width * high_fraction.numerator // high_fraction.denominator,
        )
        fresh = []
        # Digit agreement is tested on the closed endpoints, so U+ = 1/2 still splits
        while self.scale > 0 and self.lo >> (self.scale - 1) == self.hi >> (self.scale - 1):
            bit = self.lo >> (self.scale - 1)
            fresh.append(bit)
            self.scale -= 1
            self.lo -= bit << self.scale
            self.hi -= bit << self.scale
        self.emitted.extend(fresh)
        return fresh

    def dump_emitted(self, path, line_width=64):
        """Write the emitted bits in the tape format"""
        write_tape(path, self.emitted, line_width)
        logger.info(f"✓ Wrote {len(self.emitted):,} emitted bits to {path}")


def extractor_feed(state, x, y, model):
    """
    Feed one (symbol, leaf) pair

    Args:
        state: ExtractorState
        x: Symbol
        y: 1-based leaf index or an ExitLeaf of symbol x
        model: ConditionalModel

    Returns:
        list: bits newly emitted by this feed

    Raises:
        InvalidLeaf: y is not a leaf of x
    """
    y = model.leaf_index(x, y)
    if y < 1:
        raise InvalidLeaf(f"Leaf index {y} out of range for symbol {x}")
    return state.narrow(model.cdf(x, y - 1), model.cdf(x, y))


def extract_stream(model, src, n, state=None):
    """Draw n pairs from a model and feed them all; returns the final state"""
    state = state or ExtractorState()
    for _ in range(n):
        x, y, _ = model.draw(src)
        extractor_feed(state, x, y, model)
    return state
