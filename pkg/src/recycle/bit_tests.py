"""
Monobit and runs tests on extracted bits
Flags extractor output that is visibly biased or correlated
"""

import math
import sys
import os
from dataclasses import dataclass

import numpy as np

sys.path.append(os.path.dirname(os.path.dirname(os.path.dirname(__file__))))

from src.utils.exceptions import TooFewBits
from src.utils.settings import load_settings

_EXTRACTION = load_settings('bench')['extraction']
MIN_BITS = _EXTRACTION['min_bits']
Z_THRESHOLD = _EXTRACTION['z_threshold']


@dataclass(frozen=True)
class BitTestReport:
    n: int
    ones: int
    monobit_z: float
    runs: int
    runs_z: float

    def passed(self, threshold=Z_THRESHOLD):
        """Both |z| below the threshold; an undefined runs z fails"""
        if math.isnan(self.runs_z):
            return False
        return abs(self.monobit_z) < threshold and abs(self.runs_z) < threshold

    def print_report(self, threshold=Z_THRESHOLD, stream=None):
        """Print the statistics; stream defaults to stderr so stdout stays a clean table"""
        stream = stream or sys.stderr
        print("\n" + "=" * 80, file=stream)
        print("EXTRACTOR OUTPUT TESTS", file=stream)
        print("=" * 80, file=stream)
        print(f"  {'bits':25} : {self.n:>12,}", file=stream)
        print(f"  {'ones':25} : {self.ones:>12,}", file=stream)
        print(f"  {'monobit z':25} : {self.monobit_z:>12.4f}", file=stream)
        print(f"  {'runs':25} : {self.runs:>12,}", file=stream)
        print(f"  {'runs z':25} : {self.runs_z:>12.4f}", file=stream)
        if self.passed(threshold):
            print(f"  ✓ Both statistics within ±{threshold}", file=stream)
        else:
            print(f"  ✗ A statistic is outside ±{threshold}", file=stream)
        print("=" * 80 + "\n", file=stream)


def extractor_output_tests(bits, min_bits=None):
    """
    Monobit z = (ones - zeros) / sqrt(n) and the Wald-Wolfowitz runs z

    Runs use mu = 2 n1 n0 / n + 1 and sigma^2 = (mu - 1)(mu - 2) / (n - 1);
    runs_z is nan when one symbol is missing.

    Raises:
        TooFewBits: fewer than min_bits bits (10^4 by default)
    """
    sequence = np.asarray(bits, dtype=np.uint8)
    min_bits = MIN_BITS if min_bits is None else min_bits
    n = int(sequence.size)
    if n < max(min_bits, 2):
        raise TooFewBits(f"Need at least {max(min_bits, 2):,} bits, got {n:,}")

    ones = int(np.count_nonzero(sequence))
    zeros = n - ones
    monobit_z = (ones - zeros) / math.sqrt(n)

    runs = int(np.count_nonzero(np.diff(sequence))) + 1
    mu = 2 * ones * zeros / n + 1
    variance = (mu - 1) * (mu - 2) / (n - 1)
    runs_z = (runs - mu) / math.sqrt(variance) if variance > 0 else math.nan
    return BitTestReport(n, ones, monobit_z, runs, runs_z)
