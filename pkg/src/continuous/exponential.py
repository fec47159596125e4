"""
Exponential sampling

The integer part floor(E) is geometric with Q(k) = 1 - e^-k and is drawn
exactly. The fractional part is a truncated exponential on [0, 1), drawn
either by inversion or as the binary expansion sum_j 2^-j B_j with
independent B_j ~ Bernoulli(p_j), p_j = e^(-2^-j) / (1 + e^(-2^-j)).
"""

from fractions import Fraction

from src.continuous.bernoulli import bernoulli_sample
from src.continuous.inversion import EpsilonSample, invert_eps, parse_epsilon
from src.continuous.quantiles import builtin_laws
from src.discrete.distribution import convolution_vector, geometric_one_over_e
from src.discrete.han_hoshi import hh_sample
from src.discrete.knuth_yao import ky_sample
from src.numerics.computable import logistic_weight
from src.numerics.dyadic import ceil_log2
from src.numerics.expansion import ProbabilityExpansion

ROUTES = ('inversion', 'convolution')
VARIANTS = ('raw', 'ky')
INTEGER_SAMPLERS = {'hh': hh_sample, 'ky': ky_sample}


def convolution_weights(k):
    """Digit oracles for p_1 .. p_k"""
    return [ProbabilityExpansion(logistic_weight(j), name=f"p_{j}") for j in range(1, k + 1)]


def convolution_terms(eps):
    """k = ceil(log2(1/eps)) terms leave a tail of at most 2^-k <= eps"""
    return max(0, ceil_log2(1 / parse_epsilon(eps)))


def exp_frac_convolution(eps, src, variant='raw'):
    """
    Truncated exponential on [0, 1) from its first k binary digits

    Args:
        eps: Positive rational accuracy
        src: BitSource
        variant: 'raw' draws each digit with its own Bernoulli (2 bits each
                 on average); 'ky' draws the k-digit vector in one Knuth-Yao walk

    Returns:
        EpsilonSample: y = sum_{j<=k} 2^-j B_j; the omitted digits add less than 2^-k
    """
    if variant not in VARIANTS:
        raise ValueError(f"Unknown convolution variant {variant!r}; expected one of {VARIANTS}")
    eps = parse_epsilon(eps)
    k = convolution_terms(eps)
    tail = Fraction(1, 1 << k)
    if k == 0:
        return EpsilonSample(Fraction(0), 0, eps, lower=Fraction(0), upper=tail)
    if variant == 'ky':
        outcome = ky_sample(convolution_vector(k), src)
        y, used = outcome.label, outcome.bits_used
    else:
        y, used = Fraction(0), 0
        for j, weight in enumerate(convolution_weights(k), start=1):
            bit, bits = bernoulli_sample(weight, src)
            used += bits
            if bit:
                y += Fraction(1, 1 << j)
    return EpsilonSample(y, used, eps, lower=y, upper=y + tail)


def exp_sample(eps, src, route='inversion', integer_method='hh', variant='raw'):
    """
    Standard exponential to precision eps

    The integer part is exact, so the coupling error is that of the
    fractional part alone.

    Args:
        eps: Positive rational accuracy
        src: BitSource
        route: 'inversion' or 'convolution' for the fractional part
        integer_method: 'hh' or 'ky' for the geometric integer part
        variant: convolution variant, 'raw' or 'ky'
    """
    if route not in ROUTES:
        raise ValueError(f"Unknown exponential route {route!r}; expected one of {ROUTES}")
    if integer_method not in INTEGER_SAMPLERS:
        raise ValueError(f"Unknown integer sampler {integer_method!r}; expected 'hh' or 'ky'")
    eps = parse_epsilon(eps)
    integer = INTEGER_SAMPLERS[integer_method](geometric_one_over_e(), src)
    if route == 'inversion':
        fraction = invert_eps(builtin_laws()['truncated-exponential'].quantile, eps, src)
    else:
        fraction = exp_frac_convolution(eps, src, variant)
    n = integer.label
    return EpsilonSample(
        n + fraction.y,
        integer.bits_used + fraction.bits_used,
        eps,
        fraction.u_interval,
        n + fraction.lower,
        n + fraction.upper,
        piece=str(n),
    )
