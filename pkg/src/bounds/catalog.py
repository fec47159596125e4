"""
Differential entropy catalog

Each density carries its entropy in bits as a computable real, an mpmath
pdf for quadrature cross-checks, and a cell-mass routine for cubic
partitions of side h (anchored at 0).
"""

import math
from dataclasses import dataclass

import numpy as np
from mpmath import mp
from scipy import stats

from src.numerics.computable import ExactReal, IntervalReal, LOG2_E
from src.utils.exceptions import UnknownLaw

# Past this many standard units the remaining mass is below 1e-300
_FAR_TAIL = 40.0
_EXP_TAIL = 700.0


@dataclass(frozen=True)
class DensityModel:
    name: str
    entropy: object        # ComputableReal, bits
    pdf: object            # mpmath callable
    support: tuple         # (a, b) for mp.quad, infinities allowed
    dimension: int = 1
    monotone: bool = False

    def numeric_entropy(self, dps=30):
        """-integral f log2 f by adaptive quadrature"""
        with mp.workdps(dps):
            def integrand(x):
                f = self.pdf(x)
                return -f * mp.log(f) if f > 0 else mp.mpf(0)

            return float(mp.quad(integrand, list(self.support)) / mp.log(2))

    def cell_masses(self, h):
        return cell_masses(self.name, h)


def _normal_pdf(x):
    return mp.exp(-x * x / 2) / mp.sqrt(2 * mp.pi)


def _truncated_exponential_pdf(x):
    return mp.exp(-x) / (1 - mp.exp(-1))


def _maxwell_pdf(x):
    return x * mp.exp(-x * x / 2)


_CATALOG = {
    'uniform': DensityModel('uniform', ExactReal(0), lambda x: mp.mpf(1), (0, 1), monotone=True),
    'exponential': DensityModel('exponential', LOG2_E, lambda x: mp.exp(-x), (0, mp.inf), monotone=True),
    'normal': DensityModel(
        'normal',
        IntervalReal(lambda ctx: ctx.ln(2 * ctx.pi * ctx.e) / (2 * ctx.ln2), 'log2 sqrt(2 pi e)'),
        _normal_pdf, (-mp.inf, 0, mp.inf),
    ),
    'maxwell': DensityModel(
        'maxwell',
        IntervalReal(lambda ctx: (1 - (ctx.ln2 - ctx.euler) / 2) / ctx.ln2, 'H(maxwell)'),
        _maxwell_pdf, (0, 1, mp.inf),
    ),
    'truncated-exponential': DensityModel(
        'truncated-exponential',
        IntervalReal(lambda ctx: ctx.ln(ctx.e - 1) / ctx.ln2 - 1 / (ctx.ln2 * (ctx.e - 1)), 'H(truncated exponential)'),
        _truncated_exponential_pdf, (0, 1), monotone=True,
    ),
    'normal-pair': DensityModel(
        'normal-pair',
        IntervalReal(lambda ctx: ctx.ln(2 * ctx.pi * ctx.e) / ctx.ln2, 'log2(2 pi e)'),
        None, (), dimension=2,
    ),
}


def diff_entropy_catalog(name):
    """Differential entropy in bits of a catalog density"""
    return density_model(name).entropy


def density_model(name):
    if name not in _CATALOG:
        raise UnknownLaw(f"No catalog entry for {name}")
    return _CATALOG[name]


def catalog_names():
    return list(_CATALOG)


def _edges(h, stop):
    count = int(math.ceil(stop / h))
    return np.arange(count + 1, dtype=float) * h


def cell_masses(name, h):
    """
    Probabilities of the cells [ih, (i+1)h) of a one-dimensional catalog law

    Returns:
        tuple: (masses as a float ndarray, mass left outside the listed cells)
    """
    h = float(h)
    if h <= 0:
        raise ValueError("Cell width must be positive")
    if name == 'uniform':
        edges = np.minimum(_edges(h, 1.0), 1.0)
        return np.diff(edges), 0.0
    if name == 'exponential':
        edges = _edges(h, _EXP_TAIL)
        masses = -np.expm1(-h) * np.exp(-edges[:-1])
        return masses, float(np.exp(-edges[-1]))
    if name == 'truncated-exponential':
        edges = np.minimum(_edges(h, 1.0), 1.0)
        masses = -np.expm1(-np.diff(edges)) * np.exp(-edges[:-1]) / -math.expm1(-1.0)
        return masses, 0.0
    if name == 'maxwell':
        edges = _edges(h, _FAR_TAIL)
        masses = np.exp(-edges[:-1] ** 2 / 2) * -np.expm1(-(edges[1:] ** 2 - edges[:-1] ** 2) / 2)
        return masses, float(np.exp(-edges[-1] ** 2 / 2))
    if name == 'normal':
        edges = _edges(h, _FAR_TAIL)
        survival = stats.norm.sf(edges)
        half = survival[:-1] - survival[1:]
        return np.concatenate([half[::-1], half]), float(2 * survival[-1])
    raise UnknownLaw(f"No cell masses for {name}")
