"""
Quantile and distribution-function oracles for the built-in continuous laws

Quantiles are evaluated at dyadic arguments u with mpmath interval
arithmetic; u and 1 - u enter the expression exactly.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from src.numerics.computable import (
    ExactReal, RealEnclosure, evaluate_to_width, fraction_interval, one_minus_exp_neg,
)
from src.numerics.dyadic import ceil_log2
from src.utils.exceptions import EnclosureBudgetExceeded, NonterminatingQuantile


class QuantileOracle:
    """
    F^-1 on [0, 1] returning enclosures of a requested width

    Args:
        name: Law name
        expr: expr(ctx, u, v) -> interval of F^-1(u), with v = 1 - u
        exact_map: Fraction -> Fraction, used instead of expr when F^-1 is rational
        lower / upper: F^-1(0) and F^-1(1); math.inf marks an unbounded side
        scale: Positive rational factor applied to every value (X -> aX)
    """

    def __init__(self, name, expr=None, exact_map=None, lower=Fraction(0), upper=math.inf, scale=1):
        self.name = name
        self._expr = expr
        self._exact_map = exact_map
        self.lower = lower if isinstance(lower, float) else Fraction(lower)
        self.upper = upper if isinstance(upper, float) else Fraction(upper)
        self.scale = Fraction(scale)
        if self.scale <= 0:
            raise ValueError("Scale must be positive")
        self._scale_bits = max(0, ceil_log2(self.scale))

    def __repr__(self):
        return f"QuantileOracle({self.name})"

    def scaled(self, factor):
        return QuantileOracle(
            f"{self.name}*{factor}", self._expr, self._exact_map,
            self.lower, self.upper, self.scale * Fraction(factor),
        )

    def _endpoint(self, value):
        if isinstance(value, float):
            return RealEnclosure(value, value)
        return RealEnclosure.point(value * self.scale)

    def enclose(self, u, k):
        """Enclosure of scale * F^-1(u) with width <= 2^-k"""
        u = Fraction(u)
        if u == 0:
            return self._endpoint(self.lower)
        if u == 1:
            return self._endpoint(self.upper)
        if self._exact_map is not None:
            return RealEnclosure.point(self._exact_map(u) * self.scale)
        expr = self._expr

        def build(ctx):
            return expr(ctx, fraction_interval(u, ctx), fraction_interval(1 - u, ctx))

        try:
            enclosure = evaluate_to_width(build, k + self._scale_bits, min_bits=u.denominator.bit_length())
        except EnclosureBudgetExceeded as e:
            raise NonterminatingQuantile(f"{self.name} quantile at {u}: {e}")
        return enclosure.scaled(self.scale)


class CdfOracle:
    """
    Distribution function F at rational points as computable-real handles

    `handle(x)` may return an ExactReal when F(x) is rational.
    """

    def __init__(self, name, handle, support_end=math.inf):
        self.name = name
        self._handle = handle
        self.support_end = support_end

    def __call__(self, x):
        x = Fraction(x)
        if x <= 0:
            return ExactReal(0)
        if x >= self.support_end:
            return ExactReal(1)
        return self._handle(x)

    def scaled(self, factor):
        """Distribution function of aX: F(x / a)"""
        factor = Fraction(factor)
        if factor <= 0:
            raise ValueError("Scale must be positive")
        end = self.support_end if isinstance(self.support_end, float) else self.support_end * factor
        return CdfOracle(f"{self.name}*{factor}", lambda x: self._handle(x / factor), support_end=end)


@dataclass(frozen=True)
class ContinuousLaw:
    """A built-in one-dimensional law with its oracles"""

    name: str
    quantile: QuantileOracle
    cdf: CdfOracle
    monotone_density: bool = True   # bounded and nonincreasing on its support
    catalog_name: str = None
    pieces: tuple = field(default=())

    def scaled(self, factor):
        """The law of aX for a positive rational a"""
        return ContinuousLaw(
            f"{self.name}*{factor}", self.quantile.scaled(factor), self.cdf.scaled(factor),
            self.monotone_density, self.catalog_name, tuple(piece.scaled(factor) for piece in self.pieces),
        )


def uniform_quantile():
    return QuantileOracle('uniform', exact_map=lambda u: u, upper=1)


def exponential_quantile():
    return QuantileOracle('exponential', lambda ctx, u, v: -ctx.ln(v))


def truncated_exponential_quantile():
    """Exponential conditioned on [0, 1): -ln(1 - u (1 - e^-1))"""
    return QuantileOracle(
        'truncated-exponential',
        lambda ctx, u, v: -ctx.ln(1 - u * (1 - ctx.exp(ctx.mpf(-1)))),
        upper=1,
    )


def maxwell_quantile():
    return QuantileOracle('maxwell', lambda ctx, u, v: ctx.sqrt(-2 * ctx.ln(v)))


def maxwell_left_quantile():
    """Maxwell conditioned on [0, 1] (density increasing to the mode)"""
    return QuantileOracle(
        'maxwell-left',
        lambda ctx, u, v: ctx.sqrt(-2 * ctx.ln(1 - u * (1 - ctx.exp(ctx.mpf(-1) / 2)))),
        upper=1,
    )


def maxwell_right_quantile():
    """Maxwell conditioned on [1, inf): sqrt(1 + 2 ln(1 / (1 - u)))"""
    return QuantileOracle(
        'maxwell-right',
        lambda ctx, u, v: ctx.sqrt(1 - 2 * ctx.ln(v)),
        lower=1,
    )


def uniform_cdf():
    return CdfOracle('uniform', lambda x: ExactReal(x), support_end=1)


def exponential_cdf():
    return CdfOracle('exponential', one_minus_exp_neg)


def truncated_exponential_cdf():
    mass = one_minus_exp_neg(1)
    return CdfOracle('truncated-exponential', lambda x: one_minus_exp_neg(x) / mass, support_end=1)


def maxwell_cdf():
    return CdfOracle('maxwell', lambda x: one_minus_exp_neg(x * x / 2))


@lru_cache(maxsize=None)
def builtin_laws():
    """Continuous laws addressable by name"""
    return {
        'uniform': ContinuousLaw('uniform', uniform_quantile(), uniform_cdf(), True, 'uniform'),
        'exponential': ContinuousLaw('exponential', exponential_quantile(), exponential_cdf(), True, 'exponential'),
        'truncated-exponential': ContinuousLaw(
            'truncated-exponential', truncated_exponential_quantile(), truncated_exponential_cdf(),
            True, 'truncated-exponential',
        ),
        'maxwell': ContinuousLaw(
            'maxwell', maxwell_quantile(), maxwell_cdf(), False, 'maxwell',
            pieces=(maxwell_left_quantile(), maxwell_right_quantile()),
        ),
    }

