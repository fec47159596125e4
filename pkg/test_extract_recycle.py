"""
Tests for conditional models, interval-nesting extraction and batch recycling
"""

from fractions import Fraction

import numpy as np
import pytest

from src.discrete.distribution import DiscreteDistribution, ExitLeaf
from src.discrete.han_hoshi import hh_sample
from src.recycle.batch import BatchEngine, batch_generate
from src.recycle.bit_tests import extractor_output_tests
from src.recycle.conditional_model import ConditionalModel, build_conditional_model
from src.recycle.extractor import ExtractorState, extract_stream, extractor_feed
from src.source.bit_source import ReplaySource, SeededBitSource
from src.source.tape_io import read_tape
from src.utils.exceptions import DepthCapTooSmall, InvalidLeaf, TooFewBits


def test_fair_coin_hand_trace():
    model = ConditionalModel.fair_coin()
    state = ExtractorState()
    assert extractor_feed(state, 1, 1, model) == []
    assert state.interval == (Fraction(0), Fraction(1, 2))
    assert extractor_feed(state, 1, 2, model) == []
    assert state.interval == (Fraction(1, 4), Fraction(1, 2))
    assert extractor_feed(state, 1, 1, model) == [0, 1]
    assert state.interval == (Fraction(1, 4), Fraction(3, 8))
    assert state.emitted_count == 2
    assert state.emitted == [0, 1]


def test_state_size_stays_bounded(skewed_pair):
    model = build_conditional_model(skewed_pair, 'hh')
    src = SeededBitSource(0x51e)
    state = ExtractorState()
    widest = 0
    for _ in range(10_000):
        x, y, _ = model.draw(src)
        extractor_feed(state, x, y, model)
        widest = max(widest, state.scale, state.hi.bit_length())
    assert state.emitted_count > 5_000
    assert widest <= state.precision_bits + 48


def test_tiny_slice_keeps_a_nonempty_interval():
    state = ExtractorState(precision_bits=16)
    state.narrow(Fraction(1, 3), Fraction(1, 3) + Fraction(1, 1 << 80))
    low, high = state.interval
    assert low < high
    assert state.emitted_count >= 70
    assert Fraction(1, 3) - Fraction(1, 1 << 16) <= low <= Fraction(1, 3)


def test_first_emitted_bit_is_independent_of_first_symbol(skewed_pair):
    model = build_conditional_model(skewed_pair, 'hh')
    src = SeededBitSource(0x1d1)
    counts = np.zeros((2, 2))
    for _ in range(4000):
        state = ExtractorState()
        first = None
        for _ in range(200):
            x, y, _ = model.draw(src)
            first = first or x
            if extractor_feed(state, x, y, model):
                break
        if state.emitted:
            counts[first - 1, state.emitted[0]] += 1
    n = counts.sum()
    assert n >= 3990
    expected = np.outer(counts.sum(axis=1), counts.sum(axis=0)) / n
    cell = expected / n
    sigma = np.sqrt(n * cell * (1 - cell))
    assert (np.abs(counts - expected) <= 3 * sigma).all()
    assert abs(counts[0].sum() / n - 0.25) <= 0.03


def test_unknown_leaf_is_rejected():
    model = ConditionalModel.fair_coin()
    with pytest.raises(InvalidLeaf):
        extractor_feed(ExtractorState(), 1, 3, model)
    with pytest.raises(InvalidLeaf):
        extractor_feed(ExtractorState(), 2, 1, model)
    with pytest.raises(InvalidLeaf):
        model.leaf_index(1, ExitLeaf(5, 0))


def test_ky_model_of_dyadic_vector_is_degenerate(three_atom):
    model = build_conditional_model(three_atom, 'ky')
    for symbol in (1, 2, 3):
        assert model.leaf_count(symbol) == 1
        assert model.cdf(symbol, 1) == 1
    assert model.conditional_entropy() == 0


def test_hh_model_of_skewed_pair(skewed_pair):
    model = build_conditional_model(skewed_pair, 'hh')
    assert model.leaf_count(1) == 1
    assert model.leaf_count(2) == 2
    assert model.cdf(2, 1) == Fraction(2, 3)
    assert model.leaf_index(2, ExitLeaf(1, 1)) == 1
    assert model.leaf_index(2, ExitLeaf(2, 1)) == 2
    assert model.conditional_entropy() == pytest.approx(0.688722, abs=1e-6)


def test_model_accepts_sampled_leaves(skewed_pair, seeded):
    model = build_conditional_model(skewed_pair, 'hh')
    src = seeded(12)
    state = ExtractorState()
    for _ in range(200):
        outcome = hh_sample(skewed_pair, src)
        extractor_feed(state, outcome.value, outcome.leaf, model)
    low, high = state.interval
    assert 0 <= low < high <= 1


def test_depth_cap_too_small():
    dist = DiscreteDistribution.from_fractions(['1/3', '2/3'])
    with pytest.raises(DepthCapTooSmall):
        build_conditional_model(dist, 'ky', depth_cap=8)
    model = build_conditional_model(dist, 'ky', depth_cap=48)
    assert model.leaf_index(1, ExitLeaf(60, 24)) == model.leaf_count(1)


def test_fair_coin_extraction_rate():
    n = 100_000
    state = extract_stream(ConditionalModel.fair_coin(), SeededBitSource(0x1001), n)
    assert abs(state.emitted_count / n - 1) <= 0.01
    assert extractor_output_tests(state.emitted).passed()


def test_uniform_four_extraction_rate():
    n = 100_000
    state = extract_stream(ConditionalModel.uniform_leaves(4), SeededBitSource(0x1002), n)
    assert abs(state.emitted_count / n - 2) <= 0.02


def test_skewed_pair_extraction_rate(skewed_pair):
    model = build_conditional_model(skewed_pair, 'hh')
    n = 100_000
    state = extract_stream(model, SeededBitSource(0x1003), n)
    assert abs(state.emitted_count / n - model.conditional_entropy()) <= 0.02


def test_degenerate_model_emits_nothing():
    state = extract_stream(ConditionalModel.degenerate(3), SeededBitSource(4), 1000)
    assert state.emitted_count == 0


def test_dump_emitted_round_trips(tmp_path):
    state = extract_stream(ConditionalModel.fair_coin(), SeededBitSource(8), 300)
    path = tmp_path / 'emitted.txt'
    state.dump_emitted(path)
    replay = ReplaySource(read_tape(path))
    assert replay.next_bits(len(state.emitted)) == state.emitted


def test_bit_tests_extremes():
    zeros = extractor_output_tests([0] * 10_000)
    assert abs(zeros.monobit_z) == pytest.approx(100)
    assert not zeros.passed()
    alternating = extractor_output_tests([0, 1] * 5_000)
    assert alternating.monobit_z == 0
    assert alternating.runs_z == pytest.approx(99.98, abs=0.05)
    assert not alternating.passed()


def test_bit_tests_need_enough_bits():
    with pytest.raises(TooFewBits):
        extractor_output_tests([0, 1] * 100)


def test_bit_tests_pass_seeded_bits():
    bits = SeededBitSource(0x2024).next_bits(50_000)
    assert extractor_output_tests(np.array(bits)).passed()


def test_batch_without_recycling(seeded):
    fair = DiscreteDistribution.from_fractions(['1/2', '1/2'])
    for n in (1, 10, 500):
        result = batch_generate(fair, 'ky', n, seeded(n))
        assert result.fresh_bits == n
        assert result.bits_per_sample == 1
        assert len(result.values) == n


def test_batch_of_zero_samples(skewed_pair, seeded):
    result = batch_generate(skewed_pair, 'hh', 0, seeded())
    assert result.values == []
    assert result.fresh_bits == 0


def test_batch_identity_holds_every_step(skewed_pair, seeded):
    engine = BatchEngine(skewed_pair, 'hh', seeded(77))
    for _ in range(2000):
        engine.step()
        assert engine.fresh_bits == engine.fetched - engine.state.emitted_count + engine.queue_size
    assert engine.max_queue >= engine.queue_size


def test_batch_converges_to_entropy(skewed_pair):
    result = batch_generate(skewed_pair, 'hh', 100_000, SeededBitSource(0x5eed))
    assert abs(result.bits_per_sample - 0.811278) <= 0.05
    assert result.fetched - result.emitted + result.queue_left == result.fresh_bits


def test_recycled_bit_skews_third_draw(skewed_pair):
    model = build_conditional_model(skewed_pair, 'hh')
    hits = 0
    for m in range(1 << 12):
        tape = [(m >> (11 - j)) & 1 for j in range(12)]
        result = batch_generate(skewed_pair, 'hh', 3, ReplaySource(tape), model=model)
        hits += result.values[2] == 1
    assert Fraction(hits, 1 << 12) == Fraction(9, 32)
