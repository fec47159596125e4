"""
Batch generation with bit recycling

Every sample is drawn through FetchBit (recycled bits first, then fresh
ones); its (symbol, exit leaf) pair is fed to the extractor and the
recovered bits join the queue for the following samples.
"""

import sys
import os
from dataclasses import dataclass, field

sys.path.append(os.path.dirname(os.path.dirname(os.path.dirname(__file__))))

from src.discrete.han_hoshi import hh_sample
from src.discrete.knuth_yao import ky_sample
from src.recycle.conditional_model import build_conditional_model
from src.recycle.extractor import ExtractorState, extractor_feed
from src.source.bit_source import FetchBitSource, push_recycled
from src.utils.exceptions import SamplingError
from src.utils.logger import setup_logger

logger = setup_logger('recycle_batch')

SAMPLERS = {'ky': ky_sample, 'hh': hh_sample}


@dataclass
class BatchResult:
    values: list
    fresh_bits: int          # N_n
    max_queue: int
    emitted: int = 0         # R_n
    fetched: int = 0         # sum of T_j
    queue_left: int = 0      # Q_n
    per_sample: list = field(default_factory=list)

    @property
    def bits_per_sample(self):
        return self.fresh_bits / len(self.values) if self.values else 0.0


class BatchEngine:
    """
    Single-owner batch sampler over one fresh source

    Args:
        dist: Finite exact DiscreteDistribution
        algorithm: 'ky' or 'hh'
        fresh: BitSource supplying fresh bits
        model: ConditionalModel, built from the sampler's tree when omitted
        depth_cap: Tree depth for the model
    """

    def __init__(self, dist, algorithm, fresh, model=None, depth_cap=None):
        if algorithm not in SAMPLERS:
            raise ValueError(f"Unknown algorithm {algorithm!r}; expected 'ky' or 'hh'")
        self.dist = dist
        self.algorithm = algorithm
        self._sample = SAMPLERS[algorithm]
        self.model = model or build_conditional_model(dist, algorithm, depth_cap)
        self.source = FetchBitSource(fresh)
        self.state = ExtractorState()
        self.n = 0
        self.fetched = 0

    @property
    def fresh_bits(self):
        return self.source.fresh_consumed

    @property
    def queue_size(self):
        return len(self.source.queue)

    @property
    def max_queue(self):
        return self.source.queue.max_depth

    def step(self):
        """
        Draw one sample, then recycle what its exit leaf reveals

        Returns:
            SampleOutcome
        """
        outcome = self._sample(self.dist, self.source)
        self.fetched += outcome.bits_used
        recovered = extractor_feed(self.state, outcome.value, outcome.leaf, self.model)
        push_recycled(self.source.queue, recovered)
        self.n += 1
        self.check_identity()
        return outcome

    def check_identity(self):
        """N_n = sum T_j - R_n + Q_n"""
        expected = self.fetched - self.state.emitted_count + self.queue_size
        if self.fresh_bits != expected:
            raise SamplingError(
                f"Bit accounting broken after {self.n} samples: "
                f"N={self.fresh_bits}, sum T - R + Q = {expected}"
            )


def batch_generate(dist, algorithm, n, fresh, depth_cap=None, model=None):
    """
    Generate n values of dist with bit recycling

    Returns:
        BatchResult: values, fresh bits N_n and the deepest the queue got
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    engine = BatchEngine(dist, algorithm, fresh, model=model, depth_cap=depth_cap)
    values = []
    per_sample = []
    for _ in range(n):
        outcome = engine.step()
        values.append(outcome.label)
        per_sample.append(outcome.bits_used)
    return BatchResult(
        values,
        engine.fresh_bits,
        engine.max_queue,
        emitted=engine.state.emitted_count,
        fetched=engine.fetched,
        queue_left=engine.queue_size,
        per_sample=per_sample,
    )
