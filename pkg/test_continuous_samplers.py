"""
Tests for the epsilon-accurate continuous samplers
"""

from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from mpmath import mp

from src.continuous.bernoulli import bernoulli_sample
from src.continuous.exponential import (
    convolution_terms, convolution_weights, exp_frac_convolution, exp_sample,
)
from src.continuous.goodness_of_fit import kolmogorov_smirnov
from src.continuous.inversion import EpsilonSample, invert_eps, parse_epsilon, uniform_bits
from src.continuous.maxwell import LEFT_PIECE_MASS, maxwell_sample
from src.continuous.normal_pair import angle_accuracy, normal_pair
from src.continuous.partition import cell_center, partition_sample_1d
from src.continuous.quantiles import builtin_laws
from src.discrete.distribution import convolution_vector, geometric_one_over_e
from src.discrete.han_hoshi import hh_sample
from src.discrete.knuth_yao import ky_sample
from src.numerics.computable import logistic_weight
from src.source.bit_source import RecordingSource, ReplaySource, SeededBitSource
from src.utils.exceptions import InvalidEpsilon

EPS = Fraction(1, 256)


def _laws():
    return builtin_laws()


def test_parse_epsilon_rejects_nonpositive():
    assert parse_epsilon('1/16') == Fraction(1, 16)
    for bad in ('0', '-1/4', 'abc'):
        with pytest.raises(InvalidEpsilon):
            parse_epsilon(bad)


def test_uniform_inversion_bit_count_is_fixed(seeded):
    src = seeded(11)
    eps = Fraction(1, 100)
    for _ in range(20):
        assert invert_eps(_laws()['uniform'].quantile, eps, src).bits_used == 6
    assert uniform_bits(eps) == 6


def test_uniform_inversion_hand_trace(tape):
    sample = invert_eps(_laws()['uniform'].quantile, Fraction(1, 16), tape("011"))
    assert sample.bits_used == 3
    assert (sample.u_interval.lower, sample.u_interval.upper) == (Fraction(3, 8), Fraction(1, 2))
    assert sample.y == Fraction(7, 16)
    assert float(sample) == 0.4375


@pytest.mark.parametrize('k', range(2, 21))
def test_uniform_inversion_sweep(k, seeded):
    eps = Fraction(1, 1 << k)
    src = seeded(k)
    quantile = _laws()['uniform'].quantile
    for _ in range(3):
        sample = invert_eps(quantile, eps, src)
        assert sample.bits_used == k - 1
        assert sample.upper - sample.lower == 2 * eps
    assert uniform_bits(eps) == k - 1


def _extended(bits, seed):
    """Point of [0, 1) read from the consumed bits followed by 64 more"""
    digits = list(bits) + SeededBitSource(seed + 10_000).next_bits(64)
    return Fraction(int(''.join(map(str, digits)), 2), 1 << len(digits))


def _exit_bits(interval):
    return [(interval.lo >> (interval.depth - 1 - j)) & 1 for j in range(interval.depth)]


def _mpf(q):
    q = Fraction(q)
    return mp.mpf(q.numerator) / q.denominator


def _truncated_exponential(u):
    return -mp.log(1 - _mpf(u) * (1 - mp.exp(-1)))


def _maxwell_piece(piece, u):
    if piece == 'left':
        return mp.sqrt(-2 * mp.log(1 - _mpf(u) * (1 - mp.exp(mp.mpf(-1) / 2))))
    return mp.sqrt(1 - 2 * mp.log(1 - _mpf(u)))


def test_exponential_inversion_coupling():
    """Extending the consumed prefix by 64 bits gives a variate within eps of y"""
    quantile = _laws()['exponential'].quantile
    with mp.workdps(60):
        for seed in range(40):
            src = RecordingSource(SeededBitSource(seed))
            sample = invert_eps(quantile, EPS, src)
            x = -mp.log(1 - _mpf(_extended(src.record, seed)))
            assert abs(x - _mpf(sample.y)) <= _mpf(EPS)
            assert sample.lower <= sample.y <= sample.upper
            assert sample.upper - sample.lower <= 2 * EPS


def test_partition_hh_coupling():
    """The chosen cell holds the exponential variate of the extended tape"""
    cdf = _laws()['exponential'].cdf
    with mp.workdps(60):
        for seed in range(40):
            src = RecordingSource(SeededBitSource(seed))
            sample = partition_sample_1d(cdf, EPS, src, method='hh')
            x = -mp.log(1 - _mpf(_extended(src.record, seed)))
            assert _mpf(sample.lower) <= x < _mpf(sample.upper)
            assert abs(x - _mpf(sample.y)) <= _mpf(EPS)


@pytest.mark.parametrize('draw', [
    lambda src: partition_sample_1d(_laws()['exponential'].cdf, EPS, src, method='ky'),
    lambda src: exp_sample(EPS, src, route='convolution', integer_method='ky', variant='ky'),
    lambda src: exp_sample(EPS, src, route='inversion', integer_method='ky'),
    lambda src: maxwell_sample(EPS, src),
], ids=['partition-ky', 'convolution-ky', 'split-ky', 'maxwell'])
def test_output_depends_only_on_consumed_bits(draw):
    for seed in range(20):
        src = RecordingSource(SeededBitSource(seed))
        sample = draw(src)
        assert sample.bits_used == len(src.record)
        extension = SeededBitSource(seed + 10_000).next_bits(64)
        replay = draw(ReplaySource(src.record + extension))
        assert (replay.y, replay.bits_used) == (sample.y, sample.bits_used)


def test_exponential_split_inversion_coupling():
    """Integer part from the geometric prefix, fraction from the inversion bits"""
    with mp.workdps(60):
        for seed in range(40):
            src = RecordingSource(SeededBitSource(seed))
            sample = exp_sample(EPS, src, route='inversion')
            integer_bits = sample.bits_used - sample.u_interval.depth
            n = int(sample.piece)
            assert mp.floor(-mp.log(1 - _mpf(_extended(src.record[:integer_bits], seed)))) == n
            fraction_bits = src.record[integer_bits:]
            assert fraction_bits == _exit_bits(sample.u_interval)
            x = n + _truncated_exponential(_extended(fraction_bits, seed + 1))
            assert abs(x - _mpf(sample.y)) <= _mpf(EPS)
            assert _mpf(sample.lower) <= x <= _mpf(sample.upper)


@pytest.mark.parametrize('variant', ['raw', 'ky'])
def test_exponential_split_convolution_coupling(variant):
    """Replaying the bits rebuilds the digits; later digits stay within the tail"""
    k = convolution_terms(EPS)
    for seed in range(40):
        src = RecordingSource(SeededBitSource(seed))
        sample = exp_sample(EPS, src, route='convolution', variant=variant)
        replay = ReplaySource(src.record)
        integer = hh_sample(geometric_one_over_e(), replay)
        assert integer.label == int(sample.piece)
        if variant == 'ky':
            fraction = ky_sample(convolution_vector(k), replay).label
        else:
            digits = [bernoulli_sample(logistic_weight(j), replay)[0] for j in range(1, k + 1)]
            fraction = sum((Fraction(bit, 1 << j) for j, bit in enumerate(digits, start=1)), Fraction(0))
        assert replay.remaining == 0
        assert sample.y == integer.label + fraction
        later = SeededBitSource(seed + 10_000)
        tail = sum(
            (Fraction(bernoulli_sample(logistic_weight(j), later)[0], 1 << j) for j in range(k + 1, k + 17)),
            Fraction(0),
        )
        assert sample.lower <= sample.y + tail < sample.upper
        assert tail <= EPS


def test_maxwell_coupling():
    """The coin prefix picks the piece; the piece quantile of the extended tape is within eps"""
    with mp.workdps(60):
        for seed in range(40):
            src = RecordingSource(SeededBitSource(seed))
            sample = maxwell_sample(EPS, src)
            coin_bits = sample.bits_used - sample.u_interval.depth
            bit, used = bernoulli_sample(LEFT_PIECE_MASS, ReplaySource(src.record[:coin_bits]))
            assert used == coin_bits
            assert sample.piece == ('left' if bit else 'right')
            x = _maxwell_piece(sample.piece, _extended(_exit_bits(sample.u_interval), seed))
            assert abs(x - _mpf(sample.y)) <= _mpf(EPS)


def test_normal_pair_pathwise_coupling():
    """Each coordinate stays within eps of M sin 2 pi V and M cos 2 pi V"""
    worst = 0
    with mp.workdps(60):
        for seed in range(1000):
            src = RecordingSource(SeededBitSource(seed))
            pair = normal_pair(EPS, src)
            radius, turn = pair.radius, pair.angle
            assert pair.bits_used == len(src.record)
            m = _maxwell_piece(radius.piece, _extended(_exit_bits(radius.u_interval), seed))
            assert abs(m - _mpf(radius.y)) <= _mpf(EPS) / 2
            v = _mpf(_extended(_exit_bits(turn.u_interval), seed + 1))
            for coordinate, trig in ((pair.first, mp.sin), (pair.second, mp.cos)):
                worst = max(worst, abs(m * trig(2 * mp.pi * v) - _mpf(coordinate.y)) / _mpf(EPS))
    assert worst <= 1


def test_scaled_quantile_doubles_values(tape):
    law = _laws()['uniform'].scaled(2)
    sample = invert_eps(law.quantile, Fraction(1, 8), tape("011"))
    assert sample.y == Fraction(7, 8)


def test_partition_uniform_two_cells(seeded):
    cdf = _laws()['uniform'].cdf
    src = seeded(5)
    counts = Counter()
    for _ in range(400):
        sample = partition_sample_1d(cdf, Fraction(1, 4), src, method='hh')
        assert sample.bits_used == 1
        counts[sample.y] += 1
    assert set(counts) == {Fraction(1, 4), Fraction(3, 4)}
    assert abs(counts[Fraction(1, 4)] - 200) < 60


def test_partition_uniform_single_cell(tape):
    for method in ('hh', 'ky'):
        sample = partition_sample_1d(_laws()['uniform'].cdf, Fraction(1, 2), tape(""), method=method)
        assert (sample.y, sample.bits_used) == (Fraction(1, 2), 0)


def test_partition_ky_matches_cells(tape):
    sample = partition_sample_1d(_laws()['uniform'].cdf, Fraction(1, 4), tape("1"), method='ky')
    assert sample.y == Fraction(3, 4)
    assert (sample.lower, sample.upper) == (Fraction(1, 2), Fraction(1))
    assert cell_center(Fraction(1, 4), 2) == Fraction(3, 4)


def test_partition_exponential_cells_bracket_output(seeded):
    src = seeded(9)
    for _ in range(50):
        sample = partition_sample_1d(_laws()['exponential'].cdf, Fraction(1, 64), src)
        assert sample.lower < sample.y < sample.upper
        assert sample.y - sample.lower == Fraction(1, 64)


def test_bernoulli_examples(tape, seeded):
    assert bernoulli_sample(Fraction(1, 2), tape("0")) == (1, 1)
    assert bernoulli_sample(Fraction(1), tape("")) == (1, 0)
    assert bernoulli_sample(Fraction(0), tape("")) == (0, 0)
    src = seeded(21)
    draws = [bernoulli_sample(logistic_weight(1), src) for _ in range(4000)]
    assert abs(np.mean([bit for bit, _ in draws]) - 0.377541) < 0.03
    assert abs(np.mean([used for _, used in draws]) - 2) < 0.1


def test_convolution_weights_and_vector():
    assert convolution_terms(Fraction(1, 4)) == 2
    weights = convolution_weights(2)
    assert [w.name for w in weights] == ['p_1', 'p_2']
    vector = convolution_vector(2)
    assert [vector.label(i) for i in vector.indices()] == [0, Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)]
    top = float(vector.atom(4).enclose(40))
    assert top == pytest.approx(float(logistic_weight(1).enclose(40)) * float(logistic_weight(2).enclose(40)))


@pytest.mark.parametrize('variant', ['raw', 'ky'])
def test_convolution_support(variant, seeded):
    src = seeded(4)
    for _ in range(100):
        sample = exp_frac_convolution(Fraction(1, 4), src, variant)
        assert sample.y in {0, Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)}
        assert sample.upper - sample.lower == Fraction(1, 4)


def test_convolution_raw_costs_two_bits_per_term():
    eps = Fraction(1, 1 << 12)
    src = SeededBitSource(0x77)
    used = np.array([exp_frac_convolution(eps, src, 'raw').bits_used for _ in range(2000)])
    # every digit comparison costs exactly 2 bits in expectation
    band = 3 * used.std(ddof=1) / np.sqrt(len(used))
    assert used.mean() <= 2 * convolution_terms(eps) + band
    assert used.mean() >= 2 * convolution_terms(eps) - band


def test_convolution_matches_truncated_exponential():
    eps = Fraction(1, 1 << 12)
    src = SeededBitSource(0x99)
    samples = [exp_frac_convolution(eps, src, 'raw') for _ in range(600)]
    result = kolmogorov_smirnov(samples, 'truncated-exponential', alpha=0.001)
    assert result.passed(slack=float(eps))


def test_exponential_whole_sampler_cost():
    eps = Fraction(1, 256)
    src = SeededBitSource(0x31)
    samples = [exp_sample(eps, src, route='convolution', integer_method='ky', variant='ky') for _ in range(200)]
    assert np.mean([s.bits_used for s in samples]) <= 8 + 7.360698 + 0.5
    assert all(s.lower <= s.y < s.upper for s in samples)
    assert all(s.y - int(s.piece) < 1 for s in samples)


@pytest.mark.parametrize('route', ['inversion', 'convolution'])
def test_exponential_split_distribution(route):
    src = SeededBitSource(0x123)
    samples = [exp_sample(EPS, src, route=route) for _ in range(400)]
    assert kolmogorov_smirnov(samples, 'exponential', alpha=0.001).passed(slack=float(EPS))


def test_exponential_inversion_distribution():
    src = SeededBitSource(0x456)
    samples = [invert_eps(_laws()['exponential'].quantile, EPS, src) for _ in range(400)]
    assert kolmogorov_smirnov(samples, 'exponential', alpha=0.001).passed(slack=float(EPS))


def test_maxwell_pieces_and_distribution():
    src = SeededBitSource(0x888)
    samples = [maxwell_sample(EPS, src) for _ in range(500)]
    left = [s for s in samples if s.piece == 'left']
    assert abs(len(left) / len(samples) - 0.393469) < 0.1
    assert all(s.y <= 1 + EPS for s in left)
    assert all(s.y >= 1 - EPS for s in samples if s.piece == 'right')
    assert kolmogorov_smirnov(samples, 'maxwell', alpha=0.001).passed(slack=float(EPS))


def test_angle_accuracy_formula():
    assert angle_accuracy(Fraction(1, 4), 1) == Fraction(1, 9)


def test_normal_pair_shapes_and_distribution():
    src = SeededBitSource(0xbeef)
    pairs = [normal_pair(EPS, src) for _ in range(300)]
    for pair in pairs[:20]:
        first, second = pair
        assert isinstance(first, EpsilonSample)
        assert first.upper - first.lower <= EPS / 64
        assert pair.bits_used == pair.radius.bits_used + pair.angle.bits_used
    firsts = [pair.first for pair in pairs]
    seconds = [pair.second for pair in pairs]
    assert kolmogorov_smirnov(firsts, 'normal', alpha=0.001).passed(slack=float(EPS))
    assert kolmogorov_smirnov(seconds, 'normal', alpha=0.001).passed(slack=float(EPS))


def test_ks_rejects_wrong_law():
    samples = np.linspace(0.0, 0.5, 200)
    assert not kolmogorov_smirnov(samples, 'uniform').passed()
