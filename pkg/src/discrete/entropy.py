"""
Binary entropy and exit-leaf entropy of discrete distributions
"""

from src.discrete.han_hoshi import hh_expected_bits
from src.discrete.knuth_yao import ky_expected_bits
from src.numerics.computable import RealEnclosure, evaluate_to_width
from src.utils.exceptions import InvalidDistribution


def entropy_discrete(dist, precision=40):
    """
    Enclosure of sum p_i log2(1/p_i) with width <= 2^-precision

    Zero and one atoms contribute nothing. Countable laws are supported
    when they carry a closed-form entropy handle.
    """
    if not dist.is_finite:
        if dist.entropy_hint is None:
            raise InvalidDistribution(f"No entropy available for countable {dist.name}")
        return dist.entropy_hint.enclose(precision)

    terms = []
    for i in dist.indices():
        expansion = dist.probability(i)
        if expansion.exact and expansion.value in (0, 1):
            continue
        terms.append(dist.atom(i))
    if not terms:
        return RealEnclosure.point(0)

    def build(ctx):
        total = ctx.mpf(0)
        for atom in terms:
            p = atom.interval(ctx)
            total -= p * ctx.ln(p)
        return total / ctx.ln2

    return evaluate_to_width(build, precision)


def exit_leaf_entropy(dist, algorithm, depth_cap=64, precision=40):
    """
    Entropy of the exit leaf Y and the recyclable surplus E(Y) - E(X)

    A leaf at depth d fires with probability 2^-d, so E(Y) = E[T].

    Returns:
        tuple: (RealEnclosure of E(Y), RealEnclosure of E(Y) - E(X))
    """
    expected = {'ky': ky_expected_bits, 'hh': hh_expected_bits}
    if algorithm not in expected:
        raise ValueError(f"Unknown algorithm {algorithm!r}; expected 'ky' or 'hh'")
    leaf_entropy = expected[algorithm](dist, depth_cap)
    symbol_entropy = entropy_discrete(dist, precision)
    surplus = RealEnclosure(leaf_entropy.lo - symbol_entropy.hi, leaf_entropy.hi - symbol_entropy.lo)
    return leaf_entropy, surplus
