"""
Kolmogorov-Smirnov checks of sampler output against reference laws
"""

from dataclasses import dataclass

import numpy as np
from scipy import stats

from src.utils.exceptions import UnknownLaw

# The Maxwell law here has density r e^(-r^2/2), which scipy calls Rayleigh
REFERENCE_CDFS = {
    'uniform': stats.uniform.cdf,
    'exponential': stats.expon.cdf,
    'truncated-exponential': stats.truncexpon(b=1).cdf,
    'maxwell': stats.rayleigh.cdf,
    'normal': stats.norm.cdf,
}


@dataclass(frozen=True)
class KsResult:
    statistic: float
    pvalue: float
    critical: float
    n: int

    def passed(self, slack=0.0):
        """Statistic within the critical value plus slack (eps for quantized output)"""
        return self.statistic <= self.critical + slack


def reference_cdf(name):
    if name not in REFERENCE_CDFS:
        raise UnknownLaw(f"No reference CDF for {name}")
    return REFERENCE_CDFS[name]


def kolmogorov_smirnov(samples, cdf, alpha=0.01):
    """
    One-sample KS test

    Args:
        samples: EpsilonSamples or numbers
        cdf: Law name from REFERENCE_CDFS or a vectorized callable
        alpha: Level of the critical value

    Returns:
        KsResult
    """
    values = np.asarray([float(s) for s in samples], dtype=float)
    if values.size == 0:
        raise ValueError("Kolmogorov-Smirnov test needs at least one sample")
    function = reference_cdf(cdf) if isinstance(cdf, str) else cdf
    result = stats.kstest(values, function)
    critical = float(stats.kstwo.ppf(1 - alpha, values.size))
    return KsResult(float(result.statistic), float(result.pvalue), critical, int(values.size))
