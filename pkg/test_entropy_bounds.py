"""
Tests for the differential entropy catalog and the bit-cost bounds
"""

import math
from fractions import Fraction

import numpy as np
import pytest

from src.bounds.bounds import (
    convolution_vector_entropy, exponential_convolution_upper_bound, inversion_upper_bound, log2_real,
    lower_bound_bits, maxwell_upper_bound, normal_pair_lower_bound, normal_pair_upper_bound, partition_entropy,
    partition_gap, partition_gap_stirling, partition_upper_bound, scale_entropy, unit_ball_volume,
)
from src.bounds.catalog import catalog_names, cell_masses, density_model, diff_entropy_catalog
from src.numerics.computable import ExactReal, LOG2_E
from src.utils.exceptions import UnknownLaw


def value(real, k=40):
    return float(real.enclose(k))


def test_unit_ball_volumes():
    for p in (1, 2, Fraction(3, 2), math.inf):
        assert value(unit_ball_volume(1, p)) == 2
    assert value(unit_ball_volume(2, 2)) == pytest.approx(math.pi)
    assert value(unit_ball_volume(2, 1)) == pytest.approx(2)
    for d in (1, 2, 5):
        assert value(unit_ball_volume(d, math.inf)) == 2 ** d


def test_lower_bound_of_uniform_is_exact():
    for k in (1, 4, 10):
        bound = lower_bound_bits(ExactReal(0), 1, Fraction(1, 1 << k))
        assert isinstance(bound, ExactReal)
        assert bound.value == k - 1


def test_log2_real_of_powers_of_two():
    assert log2_real(Fraction(1, 8)).value == -3
    assert value(log2_real(3)) == pytest.approx(math.log2(3))


def test_catalog_entropies():
    assert value(diff_entropy_catalog('uniform')) == 0
    assert value(diff_entropy_catalog('exponential')) == pytest.approx(1.442695, abs=1e-6)
    assert value(diff_entropy_catalog('normal')) == pytest.approx(2.047095, abs=1e-6)
    assert value(diff_entropy_catalog('maxwell')) == pytest.approx(1.359068, abs=1e-6)
    assert value(diff_entropy_catalog('truncated-exponential')) == pytest.approx(-0.058648, abs=1e-5)
    assert value(diff_entropy_catalog('normal-pair')) == pytest.approx(4.094191, abs=1e-6)
    with pytest.raises(UnknownLaw):
        diff_entropy_catalog('cauchy')


@pytest.mark.parametrize('name', ['exponential', 'normal', 'maxwell', 'truncated-exponential'])
def test_catalog_matches_quadrature(name):
    model = density_model(name)
    assert model.numeric_entropy() == pytest.approx(value(model.entropy), abs=1e-6)


def test_scale_rule():
    assert value(scale_entropy(LOG2_E, 1)) == pytest.approx(1.442695, abs=1e-6)
    assert value(scale_entropy(LOG2_E, 2)) == pytest.approx(2.442695, abs=1e-6)
    assert value(scale_entropy(ExactReal(0), Fraction(1, 2))) == -1


def test_partition_entropy_of_uniform_cells():
    masses, tail = cell_masses('uniform', 0.5)
    assert float(partition_entropy(masses, tail)) == pytest.approx(1)
    for k in (3, 7):
        masses, tail = cell_masses('uniform', 2.0 ** -k)
        assert float(partition_entropy(masses, tail)) == pytest.approx(k)


def test_partition_entropy_of_exact_masses():
    enclosure = partition_entropy([Fraction(1, 4), Fraction(3, 4)])
    assert float(enclosure) == pytest.approx(0.811278, abs=1e-6)
    assert partition_entropy([Fraction(1)]).hi == 0


def test_exponential_cell_entropy_converges():
    gaps = []
    for k in range(2, 9):
        h = 2.0 ** -k
        masses, tail = cell_masses('exponential', h)
        assert np.sum(masses) + tail == pytest.approx(1)
        gaps.append(float(partition_entropy(masses, tail)) - k - math.log2(math.e))
    assert all(later < earlier for earlier, later in zip(gaps, gaps[1:]))
    assert abs(gaps[-1]) < 1e-4


@pytest.mark.parametrize('name', ['uniform', 'exponential', 'normal', 'maxwell', 'truncated-exponential'])
def test_cell_entropy_is_at_least_entropy_plus_resolution(name):
    entropy = value(diff_entropy_catalog(name))
    for k in range(4, 13):
        masses, tail = cell_masses(name, 2.0 ** -k)
        assert float(partition_entropy(masses, tail)) >= entropy + k - 1e-9


@pytest.mark.parametrize('name', ['normal', 'maxwell'])
def test_cell_entropy_converges(name):
    entropy = value(diff_entropy_catalog(name))
    gaps = []
    for k in range(4, 13):
        masses, tail = cell_masses(name, 2.0 ** -k)
        assert np.sum(masses) + tail == pytest.approx(1)
        gaps.append(float(partition_entropy(masses, tail)) - k - entropy)
    assert all(later < earlier + 1e-10 for earlier, later in zip(gaps, gaps[1:]))
    assert gaps[0] > gaps[-1]
    assert abs(gaps[-1]) < 1e-5


def test_normal_cell_masses_sum_to_one():
    masses, tail = cell_masses('normal', 0.25)
    assert np.sum(masses) + tail == pytest.approx(1)


def test_partition_gap_examples():
    for p in (1, 2, math.inf):
        assert value(partition_gap(1, p, 'ky')) == 2
        assert value(partition_gap(1, p, 'hh')) == 3
    assert value(partition_gap(3, math.inf)) == 2


@pytest.mark.parametrize('d, p', [(2, 2), (3, Fraction(3, 2)), (4, 1)])
def test_partition_gap_is_upper_minus_lower(d, p):
    eps = Fraction(1, 64)
    entropy = ExactReal(Fraction(1, 3))
    difference = value(partition_upper_bound(entropy, d, eps, p)) - value(lower_bound_bits(entropy, d, eps, p))
    assert difference == pytest.approx(value(partition_gap(d, p)), abs=1e-9)


@pytest.mark.parametrize('d, p', [(2, 2), (10, 3), (5, 1)])
def test_stirling_form_bounds_the_gap(d, p):
    assert value(partition_gap(d, p, 'hh')) <= value(partition_gap_stirling(d, p, 'hh')) + 1e-12


def test_stirling_form_needs_finite_norm():
    with pytest.raises(ValueError):
        partition_gap_stirling(2, math.inf)


def test_inversion_bounds():
    eps = Fraction(1, 1 << 10)
    assert value(inversion_upper_bound(LOG2_E, eps, monotone=True)) == pytest.approx(11.442695, abs=1e-6)
    assert value(inversion_upper_bound(LOG2_E, eps)) == pytest.approx(13.442695, abs=1e-6)
    assert value(maxwell_upper_bound(eps)) == pytest.approx(11 + 1.359068 + 2, abs=1e-6)


def test_normal_pair_bounds():
    eps = Fraction(1, 256)
    assert value(normal_pair_upper_bound(eps)) == pytest.approx(16 + 6.094191, abs=1e-6)
    assert value(normal_pair_lower_bound(eps)) == pytest.approx(16 + 4.094191 - 2, abs=1e-6)


def test_convolution_bounds():
    assert value(convolution_vector_entropy(0)) == 0
    k = 12
    assert value(convolution_vector_entropy(k)) == pytest.approx(k - 0.058, abs=0.01)
    eps = Fraction(1, 1 << k)
    raw = value(exponential_convolution_upper_bound(eps, 'hh', 'raw'))
    assert raw == pytest.approx(1.501343 + 3 + 2 * k, abs=1e-5)
    optimal = value(exponential_convolution_upper_bound(eps, 'ky', 'ky'))
    assert optimal <= k + 7.360698
    with pytest.raises(ValueError):
        exponential_convolution_upper_bound(eps, 'ky', 'table')


def test_bounds_are_ordered():
    eps = Fraction(1, 1 << 8)
    for name in catalog_names():
        model = density_model(name)
        d = model.dimension
        lower = value(lower_bound_bits(model.entropy, d, eps))
        assert lower <= value(partition_upper_bound(model.entropy, d, eps, method='ky'))
        assert lower <= value(partition_upper_bound(model.entropy, d, eps, method='hh'))
