"""
Box-Muller pair of standard normals to precision eps

(M sin 2 pi V, M cos 2 pi V) is a pair of independent normals when M is
Maxwell and V uniform. With M' within eps/2 of M and the angle within
delta of 2 pi V,

    |M' sin U' - M sin U| <= |M' - M| + M |U' - U| <= eps/2 + (M' + eps/2) delta

so delta = (eps/2) / (M' + eps/2) keeps each coordinate within eps. A
small share of that angle budget is held back for the error of evaluating
sin and cos.
"""

from dataclasses import dataclass
from fractions import Fraction

from src.continuous.inversion import EpsilonSample, invert_eps, parse_epsilon
from src.continuous.maxwell import maxwell_sample
from src.continuous.quantiles import builtin_laws
from src.numerics.computable import PI, evaluate_to_width, fraction_interval
from src.numerics.dyadic import ceil_log2
from src.utils.settings import load_settings

_NORMAL_PAIR = load_settings('sampling')['normal_pair']
TRIG_ERROR_DIVISOR = _NORMAL_PAIR['trig_error_divisor']
ANGLE_RESERVE_DIVISOR = _NORMAL_PAIR['angle_reserve_divisor']


@dataclass(frozen=True)
class NormalPair:
    """Two coupled normal coordinates with the radius and angle they came from"""

    first: EpsilonSample
    second: EpsilonSample
    radius: EpsilonSample
    angle: EpsilonSample   # V' in [0, 1]; the angle is 2 pi V'
    bits_used: int

    def __iter__(self):
        yield self.first
        yield self.second


def angle_accuracy(eps, m_prime):
    """delta = (eps/2) / (M' + eps/2)"""
    half = parse_epsilon(eps) / 2
    return half / (Fraction(m_prime) + half)


def _turn_accuracy(eps, m_prime):
    """Accuracy for V' with the trig reserve taken out and 2 pi bounded from above"""
    half = eps / 2
    budget = (half - eps / ANGLE_RESERVE_DIVISOR) / (m_prime + half)
    two_pi = 2 * PI.enclose(64).hi
    return budget / two_pi


def _coordinate(radius, turn, trig, eps, bits):
    k = ceil_log2(2 * TRIG_ERROR_DIVISOR / eps)

    def build(ctx):
        angle = 2 * ctx.pi * fraction_interval(turn, ctx)
        return fraction_interval(radius, ctx) * getattr(ctx, trig)(angle)

    enclosure = evaluate_to_width(build, k)
    return EpsilonSample(enclosure.midpoint, bits, eps, lower=enclosure.lo, upper=enclosure.hi, piece=trig)


def normal_pair(eps, src):
    """
    Two independent standard normals, each within eps of its target

    Args:
        eps: Positive rational accuracy
        src: BitSource

    Returns:
        NormalPair iterable as (first, second); bits_used counts the radius
        and the angle bits together
    """
    eps = parse_epsilon(eps)
    radius = maxwell_sample(eps / 2, src)
    turn = invert_eps(builtin_laws()['uniform'].quantile, _turn_accuracy(eps, radius.y), src)
    bits = radius.bits_used + turn.bits_used
    first = _coordinate(radius.y, turn.y, 'sin', eps, bits)
    second = _coordinate(radius.y, turn.y, 'cos', eps, bits)
    return NormalPair(first, second, radius, turn, bits)
