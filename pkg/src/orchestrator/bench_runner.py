"""
Bench runner
Runs seeded trial chunks (optionally across worker processes) and
aggregates bit counts into report rows
"""

import math
import sys
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import polars as pl
from tqdm import tqdm

sys.path.append(os.path.dirname(os.path.dirname(os.path.dirname(__file__))))

from src.orchestrator.law_registry import build_sampler, theoretical_bounds
from src.source.bit_source import ReplaySource, SeededBitSource
from src.utils.exceptions import TapeExhausted
from src.utils.logger import setup_logger
from src.utils.settings import load_settings

logger = setup_logger('bench_runner')


def run_chunk(spec, seed, chunk_index, count):
    """
    Run `count` trials on the chunk's own seeded stream

    Module-level so worker processes can unpickle it.

    Returns:
        list: bits used per trial
    """
    sampler = build_sampler(spec)
    src = SeededBitSource(seed, stream=chunk_index)
    return [sampler(src).bits_used for _ in range(count)]


def chunk_plan(trials, chunk_size):
    """[(chunk_index, count), ...] covering `trials`; independent of the worker count"""
    plan = []
    index = 0
    remaining = trials
    while remaining > 0:
        count = min(chunk_size, remaining)
        plan.append((index, count))
        remaining -= count
        index += 1
    return plan


@dataclass
class ReportRow:
    law: str
    method: str
    d: int
    p: str
    eps: str
    trials: int
    mean_T: float
    std_T: float
    lower: float
    upper: float
    passed: bool
    seconds: float = None

    def as_record(self):
        return {
            'law': self.law, 'method': self.method, 'd': self.d, 'p': self.p, 'eps': self.eps,
            'trials': self.trials, 'mean_T': self.mean_T, 'std_T': self.std_T,
            'lower': self.lower, 'upper': self.upper, 'pass': self.passed, 'seconds': self.seconds,
        }


class BenchRunner:
    """Seeded, chunked trial execution with bound checks"""

    def __init__(self, config_path=None, workers=None, record_wall_time=None, progress_bar=None):
        settings = load_settings('bench', config_path)
        defaults = settings['defaults']
        self.chunk_size = defaults['chunk_size']
        self.workers = workers or defaults['workers']
        self.record_wall_time = defaults['record_wall_time'] if record_wall_time is None else record_wall_time
        self.progress_bar = defaults['progress_bar'] if progress_bar is None else progress_bar
        self.slack = settings['slack']
        logger.info(f"BenchRunner initialized (chunk size {self.chunk_size}, workers {self.workers})")

    def collect_bits(self, spec, trials, seed):
        """Bits used by each trial, in chunk order"""
        plan = chunk_plan(trials, self.chunk_size)
        if self.workers > 1 and len(plan) > 1:
            with ProcessPoolExecutor(max_workers=self.workers) as pool:
                futures = [pool.submit(run_chunk, spec, seed, index, count) for index, count in plan]
                results = [f.result() for f in tqdm(futures, desc=spec.law, disable=not self.progress_bar)]
        else:
            results = [
                run_chunk(spec, seed, index, count)
                for index, count in tqdm(plan, desc=spec.law, disable=not self.progress_bar)
            ]
        return [bits for chunk in results for bits in chunk]

    def replay_bits(self, spec, tape):
        """Bits used by trials run back to back on one tape until it runs out"""
        sampler = build_sampler(spec)
        src = ReplaySource(tape)
        counts = []
        while src.remaining > 0:
            try:
                counts.append(sampler(src).bits_used)
            except TapeExhausted:
                break
        return counts

    def slack_for(self, method):
        return self.slack.get(method, self.slack['default'])

    def bench(self, spec, trials, seed):
        """
        Run trials and compare the mean bit count with the theoretical bounds

        pass <=> lower - slack - 3 sd / sqrt(n) <= mean <= upper + slack + 3 sd / sqrt(n)

        Returns:
            ReportRow
        """
        try:
            logger.info(f"Benchmarking {spec.law} / {spec.method} at eps={spec.eps} ({trials:,} trials)")
            started = time.perf_counter()
            bits = self.collect_bits(spec, trials, seed)
            seconds = time.perf_counter() - started
            row = self.summarize(spec, bits)
            if self.record_wall_time:
                row.seconds = round(seconds, 3)
            status = "✓" if row.passed else "✗"
            logger.info(f"{status} mean T = {row.mean_T:.4f} in [{row.lower:.4f}, {row.upper:.4f}]")
            return row
        except Exception as e:
            logger.error(f"✗ Bench of {spec.law} / {spec.method} failed: {e}")
            raise

    def summarize(self, spec, bits):
        frame = pl.DataFrame({'bits': bits}, schema={'bits': pl.Int64})
        summary = frame.select(
            pl.col('bits').mean().alias('mean'),
            pl.col('bits').std(ddof=1).alias('std'),
        ).row(0)
        mean = float(summary[0])
        std = float(summary[1]) if summary[1] is not None else 0.0
        lower, upper = theoretical_bounds(spec)
        slack = self.slack_for(spec.method)
        band = 3 * std / math.sqrt(len(bits))
        passed = lower - slack['lower'] - band <= mean <= upper + slack['upper'] + band
        return ReportRow(
            law=spec.law, method=spec.method, d=spec.d, p=format_norm(spec.p),
            eps=str(spec.eps) if spec.eps is not None else '', trials=len(bits),
            mean_T=mean, std_T=std, lower=lower, upper=upper, passed=passed,
        )


def format_norm(p):
    return 'inf' if isinstance(p, float) and math.isinf(p) else str(p)
