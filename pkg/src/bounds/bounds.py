"""
Entropy bounds on the expected number of fair bits

Lower bound for any epsilon-accurate sampler, upper bounds of the
partition, inversion, Box-Muller and convolution samplers, and the
partition entropy that links them.
"""

import math
from fractions import Fraction

import numpy as np

from src.bounds.catalog import diff_entropy_catalog
from src.continuous.exponential import convolution_terms
from src.discrete.distribution import geometric_entropy
from src.numerics.computable import ComputableReal, ExactReal, IntervalReal, RealEnclosure, evaluate_to_width
from src.numerics.computable import fraction_interval, logistic_weight

KY_CONSTANT = 2
HH_CONSTANT = 3
METHOD_CONSTANTS = {'ky': KY_CONSTANT, 'hh': HH_CONSTANT}


def _real(value):
    return value if isinstance(value, ComputableReal) else ExactReal(Fraction(value))


def norm_index(p):
    """math.inf or a positive rational"""
    if isinstance(p, str):
        p = math.inf if p.strip().lower() in ('inf', 'infinity', 'max') else Fraction(p)
    if isinstance(p, float) and math.isinf(p):
        return math.inf
    p = Fraction(p)
    if p < 1:
        raise ValueError(f"Norm index p must be at least 1, got {p}")
    return p


def log2_real(x):
    """log2 of a positive computable real; exact for powers of two"""
    x = _real(x)
    if isinstance(x, ExactReal):
        value = x.value
        if value <= 0:
            raise ValueError("log2 needs a positive argument")
        num, den = value.numerator, value.denominator
        if num & (num - 1) == 0 and den & (den - 1) == 0:
            return ExactReal(num.bit_length() - den.bit_length())
    return IntervalReal(lambda ctx: ctx.ln(x.interval(ctx)) / ctx.ln2, f"log2({x.name})")


def _log2_inverse_eps(eps):
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    return log2_real(1 / eps)


def unit_ball_volume(d, p=math.inf):
    """
    V_{d,p} = (2 Gamma(1/p + 1))^d / Gamma(d/p + 1)

    d = 1 gives 2 for every p and p = inf gives 2^d.
    """
    if d < 1:
        raise ValueError("Dimension must be at least 1")
    p = norm_index(p)
    if d == 1:
        return ExactReal(2)
    if p == math.inf:
        return ExactReal(1 << d)

    def build(ctx):
        inner = fraction_interval(1 / p + 1, ctx)
        outer = fraction_interval(Fraction(d) / p + 1, ctx)
        return (2 * ctx.gamma(inner)) ** d / ctx.gamma(outer)

    return IntervalReal(build, f"V_{d},{p}")


def lower_bound_bits(entropy, d, eps, p=math.inf):
    """E(f) + d log2(1/eps) - log2 V_{d,p}: no epsilon-accurate sampler uses fewer bits on average"""
    return _real(entropy) + d * _log2_inverse_eps(eps) - log2_real(unit_ball_volume(d, p))


def partition_upper_bound(entropy, d, eps, p=math.inf, method='ky'):
    """
    Partition sampler cost: E(f) + d log2(1/eps) + c - d + (d/p) log2 d

    c = 2 for Knuth-Yao and 3 for Han-Hoshi cell selection.
    """
    if method not in METHOD_CONSTANTS:
        raise ValueError(f"Unknown method {method!r}; expected 'ky' or 'hh'")
    p = norm_index(p)
    bound = _real(entropy) + d * _log2_inverse_eps(eps) + (METHOD_CONSTANTS[method] - d)
    if p != math.inf and d > 1:
        bound = bound + (Fraction(d) / p) * log2_real(d)
    return bound


def partition_gap(d, p=math.inf, method='ky'):
    """
    D = upper - lower = c + (d/p) log2 d + d log2 Gamma(1/p + 1) - log2 Gamma(d/p + 1)

    Independent of the law and of epsilon; D = c at d = 1 and at p = inf.
    """
    if method not in METHOD_CONSTANTS:
        raise ValueError(f"Unknown method {method!r}; expected 'ky' or 'hh'")
    p = norm_index(p)
    c = METHOD_CONSTANTS[method]
    if d == 1 or p == math.inf:
        return ExactReal(c)

    def build(ctx):
        ratio = fraction_interval(Fraction(d) / p, ctx)
        gammas = d * ctx.ln(ctx.gamma(fraction_interval(1 / p + 1, ctx))) - ctx.ln(ctx.gamma(ratio + 1))
        return c + (ratio * ctx.ln(ctx.mpf(d)) + gammas) / ctx.ln2

    return IntervalReal(build, f"D_{d},{p}")


def partition_gap_stirling(d, p, method='ky'):
    """Stirling upper bound on D: c + d log2(Gamma(1/p+1) (e p)^(1/p)) - log2(2 pi d / p) / 2"""
    p = norm_index(p)
    if p == math.inf:
        raise ValueError("The Stirling form needs a finite p")
    c = METHOD_CONSTANTS[method]

    def build(ctx):
        inverse = fraction_interval(1 / p, ctx)
        per_axis = ctx.ln(ctx.gamma(inverse + 1)) + inverse * ctx.ln(ctx.e * fraction_interval(p, ctx))
        spread = ctx.ln(2 * ctx.pi * fraction_interval(Fraction(d) / p, ctx)) / 2
        return c + (d * per_axis - spread) / ctx.ln2

    return IntervalReal(build, f"D_{d},{p} (Stirling)")


def partition_entropy(masses, tail=0.0, precision=40):
    """
    Enclosure of sum P(A) log2(1/P(A)) over the listed cells

    Exact (Fraction or computable) masses are summed in interval
    arithmetic. Float masses are summed with math.fsum and widened by the
    rounding error. A positive tail mass widens the upper end by
    tail (log2(1/tail) + 64), which covers tails spread over fewer than 2^64 cells.
    """
    if not isinstance(masses, np.ndarray):
        masses = list(masses)
    if not isinstance(masses, np.ndarray) and all(isinstance(m, (Fraction, int, ComputableReal)) for m in masses):
        reals = [_real(m) for m in masses]
        reals = [r for r in reals if not (isinstance(r, ExactReal) and r.value == 0)]

        def build(ctx):
            total = ctx.mpf(0)
            for real in reals:
                q = real.interval(ctx)
                total -= q * ctx.ln(q)
            return total / ctx.ln2

        enclosure = evaluate_to_width(build, precision) if reals else RealEnclosure.point(0)
        lower, upper = enclosure.lo, enclosure.hi
    else:
        values = np.asarray(masses, dtype=float)
        values = values[values > 0]
        total = math.fsum((-values * np.log2(values)).tolist())
        rounding = (values.size + 1) * 2.0 ** -50 * (abs(total) + 1)
        lower, upper = Fraction(total - rounding), Fraction(total + rounding)
    tail = float(tail)
    if tail > 0:
        upper += Fraction(tail * (math.log2(1 / tail) + 64))
    return RealEnclosure(lower, upper)


def inversion_upper_bound(entropy, eps, monotone=False):
    """log2(1/eps) + E(f) + 2 for the inversion sampler; the +2 drops for a bounded nonincreasing density"""
    bound = _log2_inverse_eps(eps) + _real(entropy)
    return bound if monotone else bound + 2


def maxwell_upper_bound(eps):
    """log2(2/eps) + E(Maxwell) + 2 for two-piece inversion"""
    return _log2_inverse_eps(Fraction(eps) / 2) + diff_entropy_catalog('maxwell') + 2


def normal_pair_upper_bound(eps):
    """Box-Muller pair: 2 log2(1/eps) + 2 + log2(2 pi e)"""
    return 2 * _log2_inverse_eps(eps) + 2 + diff_entropy_catalog('normal-pair')


def normal_pair_lower_bound(eps):
    """Lower bound for a pair of normals in the max norm: 2 log2(1/eps) + log2(2 pi e) - 2"""
    return lower_bound_bits(diff_entropy_catalog('normal-pair'), 2, eps, math.inf)


def scale_entropy(entropy, a):
    """Entropy of aX: E(f) + log2 a"""
    a = _real(a)
    if isinstance(a, ExactReal) and a.value <= 0:
        raise ValueError("Scale must be positive")
    return _real(entropy) + log2_real(a)


def _binary_entropy(weight):
    def build(ctx):
        p = weight.interval(ctx)
        return -(p * ctx.ln(p) + (1 - p) * ctx.ln(1 - p)) / ctx.ln2

    return build


def convolution_vector_entropy(k):
    """Entropy of the k independent convolution Bernoullis: sum of h(p_j)"""
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return ExactReal(0)
    builds = [_binary_entropy(logistic_weight(j)) for j in range(1, k + 1)]
    return IntervalReal(lambda ctx: sum((build(ctx) for build in builds), ctx.mpf(0)), f"H(vector {k})")


def exponential_convolution_upper_bound(eps, integer_method='ky', variant='ky'):
    """
    Expected bits of exp_sample on the convolution route

    Integer part: H(geometric) + 2 (Knuth-Yao) or + 3 (Han-Hoshi).
    Fractional part: 2k for raw Bernoullis, H(vector) + 2 for one Knuth-Yao walk.
    """
    if integer_method not in METHOD_CONSTANTS:
        raise ValueError(f"Unknown integer method {integer_method!r}; expected 'ky' or 'hh'")
    k = convolution_terms(eps)
    integer = geometric_entropy() + METHOD_CONSTANTS[integer_method]
    if variant == 'raw':
        return integer + 2 * k
    if variant == 'ky':
        return integer + convolution_vector_entropy(k) + KY_CONSTANT
    raise ValueError(f"Unknown convolution variant {variant!r}; expected 'raw' or 'ky'")
