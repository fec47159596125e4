"""
Conditional law of the exit leaf Y given the symbol X

Leaf u of symbol i fires with probability 2^-d(u), so given X = i it has
probability 2^-d(u) / p_i. Leaves are indexed 1, 2, ... per symbol in
(depth, rank) order and F_i(j) sums the first j of them.
"""

import math
import sys
import os
from fractions import Fraction

sys.path.append(os.path.dirname(os.path.dirname(os.path.dirname(__file__))))

from src.discrete.distribution import DiscreteDistribution, ExitLeaf
from src.discrete.han_hoshi import hh_sample, hh_tree_leaves
from src.discrete.knuth_yao import ky_tree_leaves
from src.utils.exceptions import DepthCapTooSmall, InvalidDistribution, InvalidLeaf
from src.utils.logger import setup_logger
from src.utils.settings import load_settings

logger = setup_logger('recycle_conditional_model')

_DISCRETE = load_settings('sampling')['discrete']
DEPTH_CAP = _DISCRETE['depth_cap']
UNRESOLVED_MASS = Fraction(1, 1 << _DISCRETE['unresolved_mass_log2'])

TREE_BUILDERS = {'ky': ky_tree_leaves, 'hh': hh_tree_leaves}


def _log2(q):
    return math.log2(q.numerator) - math.log2(q.denominator)


class ConditionalModel:
    """
    Per-symbol conditional CDFs over exit leaves

    Args:
        symbol_masses: Exact probabilities p_1 .. p_n
        leaves: {symbol: [(ExitLeaf or None, conditional mass), ...]} in leaf order;
                a None leaf is the tail lump of every leaf below the depth cap
        depth_cap: Leaves deeper than this map to the tail lump
    """

    def __init__(self, symbol_masses, leaves, depth_cap=None, name='model'):
        self.name = name
        self.symbol_masses = [Fraction(p) for p in symbol_masses]
        self.depth_cap = depth_cap
        self._cdfs = {}
        self._index = {}
        self._tail = {}
        self._symbol_dist = None
        self._leaf_dists = {}
        for symbol, entries in leaves.items():
            running = Fraction(0)
            cdf = [running]
            index = {}
            for y, (leaf, mass) in enumerate(entries, start=1):
                running += mass
                cdf.append(running)
                if leaf is None:
                    self._tail[symbol] = y
                else:
                    index[leaf] = y
            if running != 1:
                raise InvalidDistribution(f"Leaf masses of symbol {symbol} sum to {running}, not 1")
            self._cdfs[symbol] = cdf
            self._index[symbol] = index

    def __repr__(self):
        return f"ConditionalModel({self.name}, symbols={len(self._cdfs)})"

    @property
    def symbols(self):
        return sorted(self._cdfs)

    def leaf_count(self, x):
        return len(self._cdfs_for(x)) - 1

    def _cdfs_for(self, x):
        if x not in self._cdfs:
            raise InvalidLeaf(f"Symbol {x} has no leaves in {self.name}")
        return self._cdfs[x]

    def cdf(self, x, j):
        """F_x(j), with F_x(0) = 0 and F_x(leaf_count) = 1"""
        cdf = self._cdfs_for(x)
        if not 0 <= j < len(cdf):
            raise InvalidLeaf(f"Leaf index {j} out of range for symbol {x}")
        return cdf[j]

    def leaf_index(self, x, leaf):
        """1-based index of an ExitLeaf (or an index passed through unchanged)"""
        if isinstance(leaf, int):
            self.cdf(x, leaf)
            if leaf < 1:
                raise InvalidLeaf(f"Leaf index {leaf} out of range for symbol {x}")
            return leaf
        self._cdfs_for(x)
        y = self._index[x].get(leaf)
        if y is not None:
            return y
        if x in self._tail and self.depth_cap is not None and leaf.depth > self.depth_cap:
            return self._tail[x]
        raise InvalidLeaf(f"{leaf} is not a leaf of symbol {x}")

    def conditional_entropy(self):
        """E(Y | X) in bits: the long-run extraction rate per sample"""
        total = 0.0
        for x, cdf in self._cdfs.items():
            p = self.symbol_masses[x - 1]
            steps = [cdf[j] - cdf[j - 1] for j in range(1, len(cdf))]
            total += float(p) * math.fsum(-float(q) * _log2(q) for q in steps if q > 0)
        return total

    def draw(self, src):
        """
        Realize a (symbol, leaf index) pair from the model's joint law

        Returns:
            tuple: (x, y, bits_used)
        """
        start = src.consumed
        if self._symbol_dist is None:
            self._symbol_dist = DiscreteDistribution(self.symbol_masses, name=f"{self.name}-symbols")
        x = hh_sample(self._symbol_dist, src).value
        y = hh_sample(self._leaf_distribution(x), src).value
        return x, y, src.consumed - start

    def _leaf_distribution(self, x):
        if x not in self._leaf_dists:
            cdf = self._cdfs[x]
            steps = [cdf[j] - cdf[j - 1] for j in range(1, len(cdf))]
            self._leaf_dists[x] = DiscreteDistribution(steps, name=f"{self.name}-leaves-{x}")
        return self._leaf_dists[x]

    @classmethod
    def fair_coin(cls):
        """One symbol, two equiprobable leaves"""
        return cls.uniform_leaves(2)

    @classmethod
    def uniform_leaves(cls, m):
        """One symbol with m equiprobable leaves; E(Y | X) = log2 m"""
        if m < 1:
            raise ValueError("A model needs at least one leaf")
        depth = max(1, (m - 1).bit_length())
        entries = [(ExitLeaf(depth, rank), Fraction(1, m)) for rank in range(m)]
        return cls([1], {1: entries}, name=f"uniform-{m}-leaves")

    @classmethod
    def degenerate(cls, n):
        """n equiprobable symbols with one leaf each; nothing can be extracted"""
        if n < 1:
            raise ValueError("A model needs at least one symbol")
        leaves = {i: [(ExitLeaf(0, 0), Fraction(1))] for i in range(1, n + 1)}
        return cls([Fraction(1, n)] * n, leaves, name=f"degenerate-{n}")


def build_conditional_model(dist, algorithm, depth_cap=None):
    """
    Conditional leaf model of a Knuth-Yao or Han-Hoshi sampler

    Args:
        dist: Finite DiscreteDistribution with exact rational atoms
        algorithm: 'ky' or 'hh'
        depth_cap: Tree enumeration depth; leaf mass left below it is lumped
                   into one tail leaf per symbol

    Raises:
        DepthCapTooSmall: more than 2^-32 of leaf mass lies below the cap
    """
    if algorithm not in TREE_BUILDERS:
        raise ValueError(f"Unknown algorithm {algorithm!r}; expected 'ky' or 'hh'")
    if not dist.is_finite or not dist.exact:
        raise InvalidDistribution(f"Extraction needs a finite exact distribution, got {dist.name}")
    depth_cap = depth_cap or DEPTH_CAP
    tree = TREE_BUILDERS[algorithm](dist, depth_cap)
    if tree.unresolved > UNRESOLVED_MASS:
        raise DepthCapTooSmall(
            f"Unresolved leaf mass {float(tree.unresolved):.3g} at depth {depth_cap} exceeds {float(UNRESOLVED_MASS):.3g}"
        )

    grouped = {}
    for atom, leaf in tree.leaves:
        grouped.setdefault(atom, []).append(leaf)

    masses = []
    leaves = {}
    for atom in dist.indices():
        p = dist.probability(atom).value
        masses.append(p)
        if p == 0:
            continue
        ordered = sorted(grouped.get(atom, []), key=lambda leaf: (leaf.depth, leaf.rank))
        entries = [(leaf, Fraction(1, 1 << leaf.depth) / p) for leaf in ordered]
        covered = sum((mass for _, mass in entries), Fraction(0))
        if covered < 1:
            entries.append((None, 1 - covered))
        leaves[atom] = entries

    model = ConditionalModel(masses, leaves, depth_cap, name=f"{dist.name}-{algorithm}")
    logger.info(f"✓ Built {algorithm.upper()} conditional model for {dist.name} ({len(tree.leaves)} leaves)")
    return model
