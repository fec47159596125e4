"""
Inversion sampling to precision epsilon

U is refined one bit at a time. The sampler stops once the quantiles of
both ends of the current dyadic interval are known to lie within 2 eps
of each other, then returns the midpoint of their hull.
"""

from dataclasses import dataclass
from fractions import Fraction

from src.numerics.dyadic import DyadicInterval, ceil_log2
from src.utils.exceptions import InvalidEpsilon, NonterminatingQuantile
from src.utils.logger import setup_logger
from src.utils.settings import load_settings

logger = setup_logger('continuous_inversion')

_QUANTILE = load_settings('sampling')['quantile']
ENCLOSURE_DIVISOR = _QUANTILE['enclosure_divisor']
MAX_INVERSION_BITS = _QUANTILE['max_inversion_bits']


@dataclass(frozen=True)
class EpsilonSample:
    """
    Dyadic output y within eps of the target variate under the canonical coupling

    [lower, upper] contains every target value coupled with the consumed
    bits (for inversion, the quantiles of the exit interval [a, b)).
    piece names the mixture component when the law was split.
    """

    y: Fraction
    bits_used: int
    epsilon: Fraction
    u_interval: DyadicInterval = None
    lower: Fraction = None
    upper: Fraction = None
    piece: str = None

    def __float__(self):
        return float(self.y)


def parse_epsilon(eps):
    """Positive rational epsilon; anything else raises InvalidEpsilon"""
    try:
        value = Fraction(eps)
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise InvalidEpsilon(f"Cannot read epsilon {eps!r}: {e}")
    if value <= 0:
        raise InvalidEpsilon(f"Epsilon must be positive, got {value}")
    return value


def enclosure_bits(eps):
    """Precision k with 2^-k <= eps / divisor"""
    return max(0, ceil_log2(ENCLOSURE_DIVISOR / eps))


def uniform_bits(eps):
    """Bits inversion spends on the uniform law: min t with 2^-t <= 2 eps"""
    eps = parse_epsilon(eps)
    return max(0, ceil_log2(1 / (2 * eps)))


def invert_eps(q, eps, src):
    """
    Sample F^-1(U) to precision eps

    Args:
        q: QuantileOracle
        eps: Positive rational accuracy
        src: BitSource

    Returns:
        EpsilonSample: y is the midpoint of [lower(F^-1(a)), upper(F^-1(b))]
        for the exit interval [a, b)

    Raises:
        NonterminatingQuantile: the quantiles never came within 2 eps
    """
    eps = parse_epsilon(eps)
    k = enclosure_bits(eps)
    start = src.consumed
    enclosures = {}

    def enclose(u):
        enclosure = enclosures.get(u)
        if enclosure is None:
            enclosure = q.enclose(u, k)
            enclosures[u] = enclosure
        return enclosure

    interval = DyadicInterval.unit()
    while interval.depth <= MAX_INVERSION_BITS:
        low, high = enclose(interval.lower), enclose(interval.upper)
        if low.is_finite and high.is_finite and high.hi - low.lo <= 2 * eps:
            y = (low.lo + high.hi) / 2
            return EpsilonSample(y, src.consumed - start, eps, interval, low.lo, high.hi)
        interval = interval.refine(src.next_bit())
    raise NonterminatingQuantile(
        f"{q.name} quantiles did not close to 2*{eps} within {MAX_INVERSION_BITS} bits"
    )
