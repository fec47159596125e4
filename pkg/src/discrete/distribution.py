"""
Discrete distributions over atoms 1, 2, ... with exact or computable probabilities
Includes the outcome records shared by the Knuth-Yao and Han-Hoshi samplers
"""

import json
import re
import sys
import os
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

sys.path.append(os.path.dirname(os.path.dirname(os.path.dirname(__file__))))

from src.numerics.computable import (
    ComputableReal, ExactReal, IntervalReal, compare, evaluate_to_width,
    exp_neg, logistic_weight, one_minus_exp_neg,
)
from src.numerics.expansion import ProbabilityExpansion
from src.utils.exceptions import InvalidDistribution, UnknownLaw
from src.utils.logger import setup_logger

logger = setup_logger('discrete_distribution')


@dataclass(frozen=True)
class ExitLeaf:
    """
    Leaf through which a sampler stopped; probability exactly 2^-depth

    rank orders leaves of the same symbol: for Knuth-Yao it is the number of
    shallower leaves of that symbol, for Han-Hoshi the numerator of the exit
    interval's left end at this depth.
    """

    depth: int
    rank: int


@dataclass(frozen=True)
class SampleOutcome:
    value: int          # atom index, 1-based
    bits_used: int
    leaf: ExitLeaf
    label: object = None  # what the atom stands for (integer, dyadic, ...)


def parse_probability(text):
    """'num/den', an integer or a decimal string, as an exact Fraction"""
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise InvalidDistribution(f"Cannot parse probability {text!r}: {e}")


class DiscreteDistribution:
    """
    Probability vector (p_1, p_2, ...) with cumulative handles Q(i)

    Finite distributions pass `atoms`. Countable ones pass `atom_fn` and
    `cumulative_fn` (both 1-based, evaluated lazily) and leave size as None.
    """

    def __init__(self, atoms=None, name='discrete', atom_fn=None, cumulative_fn=None,
                 label_fn=None, entropy=None, check=True):
        self.name = name
        self._label_fn = label_fn
        self.entropy_hint = entropy
        self._lock = threading.Lock()
        self._expansions = {}
        self._cumulative = {0: ExactReal(0)}
        self._levels = {}

        if atoms is not None:
            self._atoms = [a if isinstance(a, ComputableReal) else ExactReal(Fraction(a)) for a in atoms]
            self.size = len(self._atoms)
            self._atom_fn = None
            self._cumulative_fn = None
            if self.size == 0:
                raise InvalidDistribution("Distribution needs at least one atom")
            self.exact = all(isinstance(a, ExactReal) for a in self._atoms)
            if self.exact:
                running = Fraction(0)
                for i, atom in enumerate(self._atoms, start=1):
                    if atom.value < 0:
                        raise InvalidDistribution(f"Negative probability {atom.value} at atom {i}")
                    running += atom.value
                    self._cumulative[i] = ExactReal(running)
                if check and running != 1:
                    raise InvalidDistribution(f"Probabilities of {name} sum to {running}, not 1")
            elif check:
                self._check_sum()
            self._cumulative[self.size] = ExactReal(1)
        else:
            if atom_fn is None or cumulative_fn is None:
                raise InvalidDistribution("Countable distributions need atom_fn and cumulative_fn")
            self._atoms = None
            self._atom_fn = atom_fn
            self._cumulative_fn = cumulative_fn
            self.size = None
            self.exact = False

    def __repr__(self):
        support = self.size if self.size is not None else 'countable'
        return f"DiscreteDistribution({self.name}, atoms={support})"

    @property
    def is_finite(self):
        return self.size is not None

    def indices(self):
        if not self.is_finite:
            raise InvalidDistribution(f"{self.name} has countable support")
        return range(1, self.size + 1)

    def atom(self, i):
        """Probability p_i as a computable real"""
        if self.is_finite:
            if not 1 <= i <= self.size:
                return ExactReal(0)
            return self._atoms[i - 1]
        return self._atom_fn(i)

    def probability(self, i):
        """ProbabilityExpansion of p_i (memoized)"""
        with self._lock:
            expansion = self._expansions.get(i)
        if expansion is None:
            expansion = ProbabilityExpansion(self.atom(i), name=f"p_{i}")
            with self._lock:
                self._expansions.setdefault(i, expansion)
                expansion = self._expansions[i]
        return expansion

    def cumulative(self, i):
        """Q(i) = p_1 + ... + p_i, with Q(0) = 0 and Q(n) = 1"""
        with self._lock:
            handle = self._cumulative.get(i)
        if handle is not None:
            return handle
        if self.is_finite:
            if i >= self.size:
                return ExactReal(1)
            parts = self._atoms[:i]
            handle = IntervalReal(lambda ctx: sum((a.interval(ctx) for a in parts), ctx.mpf(0)), f"Q({i})")
        else:
            handle = self._cumulative_fn(i)
        with self._lock:
            self._cumulative.setdefault(i, handle)
            return self._cumulative[i]

    def label(self, i):
        return self._label_fn(i) if self._label_fn else i

    def level_atoms(self, j):
        """
        Atoms with a leaf at level j of the DDG tree, ascending

        Level 0 holds an atom with p = 1. For countable support only atoms
        with Q(i-1) <= 1 - 2^-j can have digit j set, so the scan stops there.
        """
        with self._lock:
            cached = self._levels.get(j)
        if cached is not None:
            return cached

        def has_leaf(i):
            expansion = self.probability(i)
            return expansion.integer_part() if j == 0 else expansion.digit(j)

        if self.is_finite:
            atoms = [i for i in self.indices() if has_leaf(i)]
        else:
            atoms = []
            threshold = 1 - Fraction(1, 1 << j)
            i = 1
            while compare(threshold, self.cumulative(i - 1)) >= 0:
                if has_leaf(i):
                    atoms.append(i)
                i += 1
        atoms = tuple(atoms)
        with self._lock:
            self._levels[j] = atoms
        return atoms

    def _check_sum(self, k=40):
        parts = self._atoms
        enclosure = evaluate_to_width(lambda ctx: sum((a.interval(ctx) for a in parts), ctx.mpf(0)), k)
        if not enclosure.contains(1):
            raise InvalidDistribution(f"Probabilities of {self.name} do not sum to 1: {enclosure}")

    @classmethod
    def from_fractions(cls, values, name='discrete'):
        return cls([parse_probability(v) for v in values], name=name)


def load_distribution(spec):
    """
    Resolve a discrete law specification

    Args:
        spec: 'dyadic:1/2,1/4,1/4' inline atoms, a JSON file path, or a
              built-in name ('geometric-1-over-e', 'uniform-<n>')

    Returns:
        DiscreteDistribution
    """
    spec = spec.strip()
    if spec.startswith('dyadic:') or spec.startswith('atoms:'):
        _, body = spec.split(':', 1)
        return DiscreteDistribution.from_fractions([part for part in body.split(',') if part.strip()], name=spec)
    if spec in BUILTIN_DISTRIBUTIONS:
        return BUILTIN_DISTRIBUTIONS[spec]()
    uniform = re.fullmatch(r'uniform-(\d+)', spec)
    if uniform:
        return uniform_discrete(int(uniform.group(1)))
    if spec.endswith('.json') and os.path.exists(spec):
        with open(spec, 'r') as f:
            payload = json.load(f)
        atoms = payload.get('atoms')
        if atoms is None:
            builtin = payload.get('builtin')
            if builtin in BUILTIN_DISTRIBUTIONS:
                return BUILTIN_DISTRIBUTIONS[builtin]()
            raise InvalidDistribution(f"{spec} has neither 'atoms' nor a known 'builtin'")
        distribution = DiscreteDistribution.from_fractions(atoms, name=payload.get('name', spec))
        logger.info(f"✓ Loaded {distribution.size} atoms from {spec}")
        return distribution
    raise UnknownLaw(f"Unknown discrete law: {spec}")


@lru_cache(maxsize=None)
def geometric_entropy():
    """Entropy of floor(E), E exponential: log2(e/(e-1)) + log2(e)/(e-1)"""
    return IntervalReal(
        lambda ctx: (1 - ctx.ln(ctx.e - 1)) / ctx.ln2 + 1 / (ctx.ln2 * (ctx.e - 1)),
        'H(geometric 1/e)',
    )


@lru_cache(maxsize=None)
def geometric_one_over_e():
    """
    Law of floor(E) for E standard exponential

    Atom i stands for the integer i - 1: p_i = e^-(i-1) (1 - e^-1), Q(i) = 1 - e^-i.
    """
    tail = one_minus_exp_neg(1)
    return DiscreteDistribution(
        name='geometric-1-over-e',
        atom_fn=lambda i: tail if i == 1 else exp_neg(i - 1) * tail,
        cumulative_fn=lambda i: one_minus_exp_neg(i),
        label_fn=lambda i: i - 1,
        entropy=geometric_entropy(),
    )


def uniform_discrete(n):
    """n equiprobable atoms; entropy log2 n"""
    if n < 1:
        raise InvalidDistribution(f"uniform-{n} needs at least one atom")
    return DiscreteDistribution([Fraction(1, n)] * n, name=f'uniform-{n}')


@lru_cache(maxsize=None)
def convolution_vector(k):
    """
    Joint law of the k convolution Bernoullis (x_1, ..., x_k)

    Atom m + 1 is the vector whose binary reading x_1 x_2 ... x_k (x_1 most
    significant) is m; its label is the dyadic m / 2^k.
    """
    weights = [logistic_weight(j) for j in range(1, k + 1)]

    def atom(m):
        bits = [(m >> (k - j)) & 1 for j in range(1, k + 1)]

        def build(ctx):
            value = ctx.mpf(1)
            for bit, weight in zip(bits, weights):
                p = weight.interval(ctx)
                value = value * (p if bit else 1 - p)
            return value

        return IntervalReal(build, f"v{m}")

    atoms = [atom(m) for m in range(1 << k)]
    return DiscreteDistribution(
        atoms,
        name=f'convolution-vector-{k}',
        label_fn=lambda i: Fraction(i - 1, 1 << k),
        check=False,
    )


BUILTIN_DISTRIBUTIONS = {
    'geometric-1-over-e': geometric_one_over_e,
}
