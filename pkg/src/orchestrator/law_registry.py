"""
Law and method registry for the bench harness

Maps a (law, method) pair to a sampler over a bit source and to the
theoretical lower and upper bounds on its expected bit cost.
"""

import math
import sys
import os
from dataclasses import dataclass
from fractions import Fraction

sys.path.append(os.path.dirname(os.path.dirname(os.path.dirname(__file__))))

from src.bounds.bounds import (
    exponential_convolution_upper_bound, inversion_upper_bound, lower_bound_bits, maxwell_upper_bound,
    normal_pair_lower_bound, normal_pair_upper_bound, partition_upper_bound, scale_entropy,
)
from src.bounds.catalog import diff_entropy_catalog
from src.continuous.exponential import exp_sample
from src.continuous.inversion import invert_eps
from src.continuous.maxwell import maxwell_sample
from src.continuous.normal_pair import normal_pair
from src.continuous.partition import partition_sample_1d
from src.continuous.quantiles import builtin_laws
from src.discrete.distribution import geometric_entropy, load_distribution
from src.discrete.entropy import entropy_discrete
from src.discrete.han_hoshi import hh_sample
from src.discrete.knuth_yao import ky_sample
from src.utils.exceptions import InvalidEpsilon

CONTINUOUS_METHODS = {
    'uniform': ('inversion', 'partition-hh', 'partition-ky'),
    'exponential': ('inversion', 'partition-hh', 'partition-ky', 'split', 'convolution', 'convolution-ky'),
    'truncated-exponential': ('inversion', 'partition-hh', 'partition-ky'),
    'maxwell': ('inversion', 'partition-hh', 'partition-ky'),
    'normal-pair': ('box-muller',),
}
DISCRETE_METHODS = ('hh', 'ky')

# exp_sample settings behind each exponential method: (route, integer method, variant)
EXPONENTIAL_ROUTES = {
    'convolution': ('convolution', 'hh', 'raw'),
    'convolution-ky': ('convolution', 'ky', 'ky'),
}


@dataclass(frozen=True)
class TrialSpec:
    """Everything a worker process needs to rebuild a sampler"""

    law: str
    method: str
    eps: Fraction = None
    p: object = math.inf
    scale: Fraction = Fraction(1)
    route: str = 'inversion'
    integer_method: str = 'hh'
    variant: str = 'raw'

    @property
    def is_discrete(self):
        return self.law not in CONTINUOUS_METHODS

    @property
    def d(self):
        return 2 if self.law == 'normal-pair' else 1


@dataclass(frozen=True)
class TrialOutcome:
    value: str
    bits_used: int
    leaf: object = None


def default_method(law):
    if law in CONTINUOUS_METHODS:
        return CONTINUOUS_METHODS[law][0]
    return 'hh'


def validate_spec(spec):
    """Raise UnknownLaw / InvalidEpsilon / ValueError for a spec that cannot run"""
    if spec.is_discrete:
        load_distribution(spec.law)
        if spec.method not in DISCRETE_METHODS:
            raise ValueError(f"Method {spec.method} does not apply to discrete laws; use one of {DISCRETE_METHODS}")
        return spec
    if spec.method not in CONTINUOUS_METHODS[spec.law]:
        raise ValueError(f"Method {spec.method} does not apply to {spec.law}; use one of {CONTINUOUS_METHODS[spec.law]}")
    if spec.eps is None or spec.eps <= 0:
        raise InvalidEpsilon(f"{spec.law} needs a positive --eps")
    if spec.scale != 1 and spec.method in ('split', 'convolution', 'convolution-ky', 'box-muller'):
        raise ValueError(f"--scale applies to inversion and partition methods, not {spec.method}")
    return spec


def _format(value):
    value = Fraction(value)
    return f"{value} ({float(value):.12g})" if value.denominator > 1 else str(value)


def _continuous_law(spec):
    law = builtin_laws()[spec.law]
    return law.scaled(spec.scale) if spec.scale != 1 else law


def build_sampler(spec):
    """
    Sampler for a trial spec

    Returns:
        callable: src -> TrialOutcome
    """
    validate_spec(spec)
    if spec.is_discrete:
        dist = load_distribution(spec.law)
        sample = hh_sample if spec.method == 'hh' else ky_sample

        def run_discrete(src):
            outcome = sample(dist, src)
            return TrialOutcome(str(outcome.label), outcome.bits_used, outcome.leaf)

        return run_discrete

    eps = spec.eps
    if spec.law == 'normal-pair':
        def run_pair(src):
            pair = normal_pair(eps, src)
            return TrialOutcome(f"{_format(pair.first.y)}, {_format(pair.second.y)}", pair.bits_used)

        return run_pair

    law = _continuous_law(spec)
    if spec.method.startswith('partition-'):
        selector = spec.method.split('-', 1)[1]

        def run_partition(src):
            result = partition_sample_1d(law.cdf, eps, src, method=selector)
            return TrialOutcome(_format(result.y), result.bits_used)

        return run_partition

    if spec.law == 'exponential' and spec.method != 'inversion':
        route, integer_method, variant = EXPONENTIAL_ROUTES.get(
            spec.method, (spec.route, spec.integer_method, spec.variant)
        )

        def run_exponential(src):
            result = exp_sample(eps, src, route=route, integer_method=integer_method, variant=variant)
            return TrialOutcome(_format(result.y), result.bits_used)

        return run_exponential

    if spec.law == 'maxwell':
        def run_maxwell(src):
            result = maxwell_sample(eps, src, law=law)
            return TrialOutcome(_format(result.y), result.bits_used, result.piece)

        return run_maxwell

    def run_inversion(src):
        result = invert_eps(law.quantile, eps, src)
        return TrialOutcome(_format(result.y), result.bits_used)

    return run_inversion


def _span(real, k=40):
    enclosure = real.enclose(k)
    return float(enclosure.lo), float(enclosure.hi)


def theoretical_bounds(spec):
    """
    (lower, upper) bounds on the expected bits of a trial spec

    Returns:
        tuple: floats; the lower end of the lower bound's enclosure and the
        upper end of the upper bound's enclosure
    """
    validate_spec(spec)
    if spec.is_discrete:
        entropy = entropy_discrete(load_distribution(spec.law))
        extra = 3 if spec.method == 'hh' else 2
        return float(entropy.lo), float(entropy.hi) + extra

    eps = spec.eps
    if spec.law == 'normal-pair':
        return _span(normal_pair_lower_bound(eps))[0], _span(normal_pair_upper_bound(eps))[1]

    law = builtin_laws()[spec.law]
    entropy = diff_entropy_catalog(law.catalog_name)
    if spec.scale != 1:
        entropy = scale_entropy(entropy, spec.scale)
    lower = _span(lower_bound_bits(entropy, 1, eps, spec.p))[0]

    if spec.method.startswith('partition-'):
        upper = partition_upper_bound(entropy, 1, eps, spec.p, spec.method.split('-', 1)[1])
    elif spec.method in EXPONENTIAL_ROUTES:
        _, integer_method, variant = EXPONENTIAL_ROUTES[spec.method]
        upper = exponential_convolution_upper_bound(eps, integer_method, variant)
    elif spec.method == 'split':
        if spec.route == 'convolution':
            upper = exponential_convolution_upper_bound(eps, spec.integer_method, spec.variant)
        else:
            integer = geometric_entropy() + (3 if spec.integer_method == 'hh' else 2)
            upper = integer + inversion_upper_bound(diff_entropy_catalog('truncated-exponential'), eps, monotone=True)
    elif spec.law == 'maxwell':
        upper = maxwell_upper_bound(eps)
        if spec.scale != 1:
            upper = scale_entropy(upper, spec.scale)
    else:
        upper = inversion_upper_bound(entropy, eps, monotone=law.monotone_density)
    return lower, _span(upper)[1]


def resolve_law(name):
    """'continuous' or 'discrete'; UnknownLaw when neither"""
    if name in CONTINUOUS_METHODS:
        return 'continuous'
    load_distribution(name)
    return 'discrete'
