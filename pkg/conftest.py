"""
Shared fixtures for the test suite
"""

import os
import sys

# Keep test runs from writing daily log files
os.environ.setdefault('BITSAMPLER_LOG_TO_FILE', 'false')
os.environ.setdefault('BITSAMPLER_LOG_LEVEL', 'WARNING')

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import pytest

from src.discrete.distribution import DiscreteDistribution, load_distribution
from src.source.bit_source import ReplaySource, SeededBitSource

DISTRIBUTIONS_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'config', 'distributions')


@pytest.fixture
def seeded():
    """Factory for deterministic sources: seeded(seed, stream=None)"""
    return lambda seed=0x5eed, stream=None: SeededBitSource(seed, stream=stream)


@pytest.fixture
def tape():
    """Factory for replay sources over a '0'/'1' string"""
    return ReplaySource


@pytest.fixture
def three_atom():
    return DiscreteDistribution.from_fractions(['1/2', '1/4', '1/4'], name='three-atom')


@pytest.fixture
def skewed_pair():
    return load_distribution(os.path.join(DISTRIBUTIONS_DIR, 'skewed_pair.json'))


@pytest.fixture
def seven_atom():
    return load_distribution(os.path.join(DISTRIBUTIONS_DIR, 'seven_atom.json'))
