"""
Knuth-Yao sampling by a lazy walk of the DDG tree

The tree is never materialized. At level j the leaves are the atoms whose
digit b_{i,j} is 1, in ascending atom order, at the lowest offsets; internal
nodes take the remaining offsets.
"""

from dataclasses import dataclass
from fractions import Fraction

from src.discrete.distribution import ExitLeaf, SampleOutcome
from src.numerics.computable import RealEnclosure
from src.utils.exceptions import InvalidDistribution, SamplingError
from src.utils.settings import load_settings

_DISCRETE = load_settings('sampling')['discrete']
MAX_WALK_DEPTH = _DISCRETE['max_walk_depth']


@dataclass
class TreeLeaves:
    """Leaves of a DDG tree down to a depth cap"""

    leaves: list           # (atom, ExitLeaf) pairs
    unresolved: Fraction   # probability of not exiting by the cap
    depth_cap: int
    max_boundaries: int = 1  # most cumulative boundaries inside one unresolved node


def ky_sample(dist, src):
    """
    Draw one atom with probability exactly p_i

    Returns:
        SampleOutcome: atom, bits used (= exit depth) and the exit leaf
    """
    start = src.consumed
    certain = dist.level_atoms(0)
    if certain:
        atom = certain[0]
        return SampleOutcome(atom, 0, ExitLeaf(0, 0), dist.label(atom))

    offset = 0
    depth = 0
    while depth < MAX_WALK_DEPTH:
        depth += 1
        offset = 2 * offset + src.next_bit()
        leaves = dist.level_atoms(depth)
        if offset < len(leaves):
            atom = leaves[offset]
            rank = dist.probability(atom).prefix_ones(depth - 1)
            return SampleOutcome(atom, src.consumed - start, ExitLeaf(depth, rank), dist.label(atom))
        offset -= len(leaves)
    raise SamplingError(f"Knuth-Yao walk on {dist.name} passed depth {MAX_WALK_DEPTH}")


def ky_tree_leaves(dist, depth_cap):
    """Every leaf of depth <= depth_cap, grouped by atom in ascending depth"""
    if not dist.is_finite:
        raise InvalidDistribution("Tree enumeration needs finite support")
    leaves = []
    resolved = Fraction(0)
    for atom in dist.indices():
        expansion = dist.probability(atom)
        if expansion.integer_part():
            leaves.append((atom, ExitLeaf(0, 0)))
            resolved += 1
            continue
        rank = 0
        for depth in range(1, depth_cap + 1):
            if expansion.digit(depth):
                leaves.append((atom, ExitLeaf(depth, rank)))
                resolved += Fraction(1, 1 << depth)
                rank += 1
    return TreeLeaves(leaves, 1 - resolved, depth_cap)


def ky_expected_bits(dist, depth_cap):
    """
    Enclosure of E[T] = sum over atoms and levels of t b_{i,t} 2^-t

    The level sum is exact up to the cap. An atom with leftover mass r past
    the cap contributes between (cap+1) r and (cap+1) r + 2^-cap more.
    """
    if depth_cap < 1:
        raise ValueError("depth_cap must be at least 1")
    tree = ky_tree_leaves(dist, depth_cap)
    partial = sum((Fraction(leaf.depth, 1 << leaf.depth) for _, leaf in tree.leaves), Fraction(0))
    open_atoms = 0
    for atom in dist.indices():
        expansion = dist.probability(atom)
        if not expansion.exact:
            open_atoms += 1
        elif expansion.residual_bounds(depth_cap).hi > 0:
            open_atoms += 1
    lower = partial + (depth_cap + 1) * tree.unresolved
    upper = lower + Fraction(open_atoms, 1 << depth_cap)
    return RealEnclosure(lower, upper)
