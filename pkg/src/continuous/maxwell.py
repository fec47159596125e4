"""
Maxwell sampling (density r e^(-r^2/2) on [0, inf)) by two-piece inversion

The density rises on [0, 1] and falls on [1, inf). A Bernoulli(1 - e^-1/2)
coin picks the left piece; inversion then runs inside the piece, where the
conditional density is monotone.
"""

from fractions import Fraction

from src.continuous.bernoulli import bernoulli_sample
from src.continuous.inversion import EpsilonSample, invert_eps, parse_epsilon
from src.continuous.quantiles import builtin_laws
from src.numerics.computable import one_minus_exp_neg
from src.numerics.expansion import ProbabilityExpansion

LEFT_PIECE_MASS = ProbabilityExpansion(one_minus_exp_neg(Fraction(1, 2)), name='1-exp(-1/2)')


def maxwell_sample(eps, src, law=None):
    """
    Maxwell variate to precision eps

    Args:
        eps: Positive rational accuracy
        src: BitSource
        law: ContinuousLaw with (left, right) pieces; defaults to the standard
             Maxwell law, pass law.scaled(a) for aX

    Returns:
        EpsilonSample with piece set to 'left' or 'right'
    """
    eps = parse_epsilon(eps)
    left, right = (law or builtin_laws()['maxwell']).pieces
    bit, coin_bits = bernoulli_sample(LEFT_PIECE_MASS, src)
    quantile, piece = (left, 'left') if bit else (right, 'right')
    inner = invert_eps(quantile, eps, src)
    return EpsilonSample(
        inner.y, coin_bits + inner.bits_used, eps,
        inner.u_interval, inner.lower, inner.upper, piece,
    )
