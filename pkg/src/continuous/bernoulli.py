"""
Bernoulli(p) from fair coins by digit comparison
"""

from src.discrete.knuth_yao import MAX_WALK_DEPTH
from src.numerics.expansion import ProbabilityExpansion
from src.utils.exceptions import SamplingError


def bernoulli_sample(p, src):
    """
    Return 1 with probability p

    Source bits U_1 U_2 ... are compared with the digits of p; at the first
    disagreement the answer is 1 when U_j < b_j (so U < p). Two bits are
    used on average for any p strictly between 0 and 1.

    Args:
        p: ProbabilityExpansion, Fraction or computable real
        src: BitSource

    Returns:
        tuple: (bit, bits_used)
    """
    if not isinstance(p, ProbabilityExpansion):
        p = ProbabilityExpansion(p)
    if p.is_zero:
        return 0, 0
    if p.is_one:
        return 1, 0
    for j in range(1, MAX_WALK_DEPTH + 1):
        u = src.next_bit()
        b = p.digit(j)
        if u != b:
            return int(u < b), j
    raise SamplingError(f"Bernoulli({p.name}) matched {MAX_WALK_DEPTH} digits")
