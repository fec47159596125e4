"""
Han-Hoshi interval sampling

The dyadic interval I = [a, b) is refined one bit at a time until it fits
inside a single cumulative cell [Q(i-1), Q(i)). The cell holding a only
moves right as I shrinks, so the search resumes from the previous cell.
"""

import math
from fractions import Fraction

from src.discrete.distribution import ExitLeaf, SampleOutcome
from src.discrete.knuth_yao import MAX_WALK_DEPTH, TreeLeaves
from src.numerics.computable import GUARD_BITS, MAX_PRECISION, MIN_PRECISION, RealEnclosure, compare
from src.numerics.dyadic import Containment, DyadicInterval, interval_inside
from src.utils.exceptions import EnclosureBudgetExceeded, InvalidDistribution, SamplingError


def cell_of(dist, x, start=1):
    """
    Smallest i >= start with x < Q(i), given Q(start - 1) <= x

    Galloping search: long runs of small cells (partition cells, geometric
    tails) cost O(log distance) comparisons.
    """
    if compare(x, dist.cumulative(start)) < 0:
        return start
    below, step = start, 1
    above = start + 1
    while compare(x, dist.cumulative(above)) >= 0:
        below = above
        step *= 2
        above = below + step
    while above - below > 1:
        middle = (below + above) // 2
        if compare(x, dist.cumulative(middle)) >= 0:
            below = middle
        else:
            above = middle
    return above


def decide_containment(interval, cell_lo, cell_hi):
    """interval_inside with enclosures refined until the answer is decided"""
    k = max(interval.depth + GUARD_BITS, MIN_PRECISION)
    while k <= MAX_PRECISION:
        state = interval_inside(interval, cell_lo.enclose(k), cell_hi.enclose(k))
        if state.decided:
            return state
        k *= 2
    raise EnclosureBudgetExceeded(f"Cell boundary near {interval} could not be separated")


def hh_sample(dist, src):
    """
    Draw one atom with probability exactly p_i

    Returns:
        SampleOutcome: the exit leaf is the final interval (depth, numerator of a)
    """
    start = src.consumed
    interval = DyadicInterval.unit()
    cell = 1
    while interval.depth <= MAX_WALK_DEPTH:
        cell = cell_of(dist, interval.lower, cell)
        state = decide_containment(interval, dist.cumulative(cell - 1), dist.cumulative(cell))
        if state is Containment.INSIDE:
            leaf = ExitLeaf(interval.depth, interval.lo)
            return SampleOutcome(cell, src.consumed - start, leaf, dist.label(cell))
        interval = interval.refine(src.next_bit())
    raise SamplingError(f"Han-Hoshi refinement on {dist.name} passed depth {MAX_WALK_DEPTH}")


def final_interval(outcome):
    """The exit interval of a Han-Hoshi outcome"""
    return DyadicInterval(outcome.leaf.rank, outcome.leaf.rank + 1, outcome.leaf.depth)


def hh_tree_leaves(dist, depth_cap):
    """
    Enumerate the Han-Hoshi tree down to depth_cap

    Every level holds at most one straddling node per cumulative boundary,
    so the walk visits O(n * depth_cap) nodes.
    """
    if not dist.is_finite:
        raise InvalidDistribution("Tree enumeration needs finite support")
    leaves = []
    unresolved = Fraction(0)
    max_boundaries = 1
    stack = [(DyadicInterval.unit(), 1)]
    while stack:
        interval, hint = stack.pop()
        cell = cell_of(dist, interval.lower, hint)
        state = decide_containment(interval, dist.cumulative(cell - 1), dist.cumulative(cell))
        if state is Containment.INSIDE:
            leaves.append((cell, ExitLeaf(interval.depth, interval.lo)))
        elif interval.depth >= depth_cap:
            unresolved += interval.width
            boundaries = 0
            i = cell
            while compare(interval.upper, dist.cumulative(i)) > 0:
                boundaries += 1
                i += 1
            max_boundaries = max(max_boundaries, boundaries)
        else:
            stack.append((interval.refine(1), cell))
            stack.append((interval.refine(0), cell))
    return TreeLeaves(leaves, unresolved, depth_cap, max_boundaries)


def hh_expected_bits(dist, depth_cap):
    """
    Enclosure of E[T] for the Han-Hoshi sampler

    Leaves above the cap are summed exactly. A node still open at the cap
    that holds m boundaries exits after at most ceil(log2 m) + 2 more bits
    on average, and after at least one.
    """
    if depth_cap < 1:
        raise ValueError("depth_cap must be at least 1")
    tree = hh_tree_leaves(dist, depth_cap)
    partial = sum((Fraction(leaf.depth, 1 << leaf.depth) for _, leaf in tree.leaves), Fraction(0))
    extra = math.ceil(math.log2(tree.max_boundaries)) if tree.max_boundaries > 1 else 0
    lower = partial + (depth_cap + 1) * tree.unresolved
    upper = partial + (depth_cap + 2 + extra) * tree.unresolved
    return RealEnclosure(lower, upper)
