import math

import numpy as np
import pytest
from scipy.special import ndtr

from ordept.channel import (ChannelParams, compute_llr, frame_from_soft,
                            frame_rng, gaussian, hard_decision,
                            reliability_permutation, transmit)


def q_func(x):
    return float(ndtr(-x))


def test_sigma_formula():
    p = ChannelParams.from_ebn0(3.0, rate=0.5)
    assert p.sigma == pytest.approx(math.sqrt(1.0 / (2 * 0.5 * 10 ** 0.3)))
    assert p.ebn0_db == 3.0 and p.rate == 0.5


def test_symbol_energy_conversion_round_trip():
    rate = 239 / 256
    p = ChannelParams.from_ebn0(5.0, rate)
    assert p.esn0_db == pytest.approx(5.0 + 10 * math.log10(rate))
    q = ChannelParams.from_esn0(p.esn0_db, rate)
    assert q.sigma == pytest.approx(p.sigma)
    assert q.ebn0_db == pytest.approx(5.0)


def test_gaussian_flip_rate_matches_q_function():
    """P(1 + noise < 0) = Q(1/sigma); checked at sigma = 1."""
    rng = frame_rng(77, 0)
    noise = gaussian(rng, 200_000, 1.0)
    rate = float((1.0 + noise < 0).mean())
    p = q_func(1.0)
    assert abs(rate - p) < 3 * math.sqrt(p * (1 - p) / noise.size)


def test_gaussian_moments():
    rng = frame_rng(78, 0)
    z = gaussian(rng, 400_000, 0.7)
    assert float(z.mean()) == pytest.approx(0.0, abs=0.005)
    assert float(z.std()) == pytest.approx(0.7, abs=0.005)


def test_hard_decision_ber_at_4db_rate1():
    params = ChannelParams.from_ebn0(4.0, rate=1.0)
    bits = np.zeros(250_000, dtype=np.uint8)
    fr = transmit(bits, params, frame_rng(79, 0))
    ber = float((fr.w != bits).mean())
    p = q_func(math.sqrt(2 * 10 ** 0.4))
    assert abs(ber - p) < 3 * math.sqrt(p * (1 - p) / bits.size)


def test_frame_streams_are_deterministic_and_distinct():
    a = gaussian(frame_rng(5, 7), 64, 1.0)
    b = gaussian(frame_rng(5, 7), 64, 1.0)
    c = gaussian(frame_rng(5, 8), 64, 1.0)
    d = gaussian(frame_rng(6, 7), 64, 1.0)
    np.testing.assert_array_equal(a, b)
    assert (a != c).any() and (a != d).any()


def test_transmit_field_consistency():
    params = ChannelParams.from_ebn0(2.0, rate=0.5)
    c = np.array([0, 1, 1, 0, 1, 0, 0, 1], dtype=np.uint8)
    fr = transmit(c, params, frame_rng(1, 0))
    np.testing.assert_array_equal(fr.x, 2.0 * c - 1.0)
    np.testing.assert_array_equal(fr.w, hard_decision(fr.y))
    np.testing.assert_allclose(fr.llr, compute_llr(fr.y, params.sigma))
    np.testing.assert_array_equal(fr.pi, reliability_permutation(fr.llr))


def test_zero_output_decides_bit_one():
    np.testing.assert_array_equal(hard_decision(np.array([0.0, -0.0, -1e-12])),
                                  [1, 1, 0])


def test_reliability_permutation_is_zero_based_ascending():
    llr = np.array([0.5, -0.1, 0.3, -0.7])
    np.testing.assert_array_equal(reliability_permutation(llr), [1, 2, 0, 3])


def test_reliability_permutation_breaks_ties_by_position():
    llr = np.array([0.2, -0.2, 0.1])
    np.testing.assert_array_equal(reliability_permutation(llr), [2, 0, 1])


def test_llr_scaling():
    y = np.array([-1.0, 0.5])
    np.testing.assert_allclose(compute_llr(y, 0.5), [-8.0, 4.0])


def test_frame_from_soft_uses_values_as_llrs():
    y = np.array([0.4, -0.2, 0.0, -1.5])
    fr = frame_from_soft(y)
    np.testing.assert_array_equal(fr.llr, y)
    np.testing.assert_array_equal(fr.w, [1, 0, 1, 0])
    np.testing.assert_array_equal(fr.pi, [2, 1, 0, 3])
    assert fr.c is None and fr.x is None
    ref = np.array([1, 0, 1, 0], dtype=np.uint8)
    assert frame_from_soft(y, reference=ref).c is ref
