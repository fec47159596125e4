"""
Partition sampling in one dimension

The half-line [0, inf) is cut into cells [2 eps (i-1), 2 eps i). A cell is
chosen exactly by a discrete sampler over the cell masses and its center
is returned, so the output is within eps of a variate in that cell.
"""

from fractions import Fraction
from functools import lru_cache

from src.continuous.inversion import EpsilonSample, parse_epsilon
from src.discrete.distribution import DiscreteDistribution
from src.discrete.han_hoshi import hh_sample
from src.discrete.knuth_yao import ky_sample

CELL_SELECTORS = {'hh': hh_sample, 'ky': ky_sample}


@lru_cache(maxsize=64)
def partition_cells(cdf, eps):
    """
    Countable distribution over the cells of width 2 eps anchored at 0

    Atom i is the cell [2 eps (i-1), 2 eps i) with mass F(2 eps i) - F(2 eps (i-1));
    its label is the center 2 eps (i-1) + eps.
    """
    eps = parse_epsilon(eps)
    width = 2 * eps
    return DiscreteDistribution(
        name=f"cells({cdf.name}, {eps})",
        atom_fn=lambda i: cdf(width * i) - cdf(width * (i - 1)),
        cumulative_fn=lambda i: cdf(width * i),
        label_fn=lambda i: cell_center(eps, i),
    )


def cell_center(eps, i):
    eps = Fraction(eps)
    return 2 * eps * (i - 1) + eps


def partition_sample_1d(cdf, eps, src, method='hh'):
    """
    Sample a cell center with the cell's exact probability

    Args:
        cdf: CdfOracle of a law supported on [0, inf)
        eps: Positive rational accuracy
        src: BitSource
        method: 'hh' (Han-Hoshi, E[T] <= cell entropy + 3) or 'ky' (Knuth-Yao, + 2)

    Returns:
        EpsilonSample with y the center of the chosen cell
    """
    if method not in CELL_SELECTORS:
        raise ValueError(f"Unknown cell selector {method!r}; expected 'hh' or 'ky'")
    eps = parse_epsilon(eps)
    cells = partition_cells(cdf, eps)
    outcome = CELL_SELECTORS[method](cells, src)
    width = 2 * eps
    return EpsilonSample(
        outcome.label, outcome.bits_used, eps,
        lower=width * (outcome.value - 1), upper=width * outcome.value,
    )
