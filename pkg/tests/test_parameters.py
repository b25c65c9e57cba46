import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from blackwell_kit import (
    Channel,
    Code,
    DimensionMismatch,
    JointPrior,
    TooLarge,
    bec,
    bhattacharyya,
    bsc,
    capacity,
    channel_product,
    code_error,
    compose,
    constant_channel,
    correct_guess_prob,
    identity_channel,
    map_error,
    mutual_information,
    optimal_code_error,
    random_channel,
    symmetric_capacity,
)

from conftest import channels, distributions, h2


def _mi_oracle(p, M):
    # plain double loop, no vectorization
    q = [sum(p[x] * M[x][y] for x in range(len(p))) for y in range(len(M[0]))]
    total = 0.0
    for x in range(len(p)):
        for y in range(len(q)):
            if p[x] > 0 and M[x][y] > 0:
                total += p[x] * M[x][y] * math.log(M[x][y] / q[y])
    return total


def test_mi_bsc_closed_form():
    assert mutual_information([0.5, 0.5], bsc(0.11)) == pytest.approx(math.log(2) - h2(0.11), abs=1e-14)


def test_mi_bec_closed_form():
    assert mutual_information([0.5, 0.5], bec(0.3)) == pytest.approx(0.7 * math.log(2), abs=1e-14)


@given(channels(), st.data())
def test_mi_matches_loop(W, data):
    p = data.draw(distributions(W.input_size))
    assert mutual_information(p, W) == pytest.approx(_mi_oracle(p, W.matrix.tolist()), abs=1e-12)


@given(channels(), st.data(), st.integers(1, 4), st.integers(0, 2**31))
def test_data_processing(W, data, nz, seed):
    p = data.draw(distributions(W.input_size))
    V = random_channel(W.output_size, nz, seed)
    assert mutual_information(p, compose(V, W)) <= mutual_information(p, W) + 1e-12


def test_capacity_bsc():
    r = capacity(bsc(0.11))
    expected = math.log(2) - h2(0.11)
    assert abs(r.value - expected) <= 1e-9
    assert r.lower_bound <= expected + 1e-12 <= r.upper_bound + 2e-12


@pytest.mark.parametrize("k", [2, 3, 4])
def test_capacity_identity(k):
    assert capacity(identity_channel(k)).value == pytest.approx(math.log(k), abs=1e-9)


def test_capacity_zero_for_constant():
    assert capacity(constant_channel(3, [0.2, 0.8])).value == pytest.approx(0.0, abs=1e-12)


def test_capacity_z_channel():
    # Z channel with crossover q: C = log(1 + (1-q) q^{q/(1-q)}), here log(5/4)
    W = Channel([[1.0, 0.0], [0.5, 0.5]])
    assert capacity(W).value == pytest.approx(math.log(1.25), abs=1e-8)


@given(channels(max_in=3, max_out=4))
def test_capacity_bracket(W):
    r = capacity(W, tol=1e-9)
    assert r.lower_bound <= r.value <= r.upper_bound
    assert r.gap <= 1e-9
    assert r.value >= symmetric_capacity(W) - 1e-9
    assert mutual_information(r.maximizing_input, W) == pytest.approx(r.lower_bound, abs=1e-12)


def test_map_error_closed_forms():
    assert map_error([0.5, 0.5], bsc(0.11)) == pytest.approx(0.11, abs=1e-15)
    assert map_error([0.5, 0.5], bec(0.4)) == pytest.approx(0.2, abs=1e-15)
    assert map_error([0.2, 0.8], constant_channel(2, [0.5, 0.5])) == pytest.approx(0.2, abs=1e-15)


def test_bhattacharyya_closed_forms():
    assert bhattacharyya(bsc(0.11)) == pytest.approx(2 * math.sqrt(0.11 * 0.89), abs=1e-15)
    assert bhattacharyya(bec(0.3)) == pytest.approx(0.3, abs=1e-15)
    assert bhattacharyya(identity_channel(3)) == 0.0
    assert bhattacharyya(constant_channel(3, [0.1, 0.2, 0.7])) == pytest.approx(1.0, abs=1e-15)


@given(channels(min_in=2))
def test_z_bounds_pe(W):
    n = W.input_size
    Z = bhattacharyya(W)
    pe = map_error(np.full(n, 1 / n), W)
    assert 0.25 * Z**2 <= pe + 1e-12
    assert pe <= (n - 1) * Z + 1e-12


def test_guess_prob_point_prior_and_identity():
    assert correct_guess_prob(np.array([[1.0, 0.0]]), bsc(0.3)) == 1.0
    p = JointPrior(np.eye(3) / 3)
    assert correct_guess_prob(p, identity_channel(3)) == pytest.approx(1.0, abs=1e-15)
    assert correct_guess_prob(p, constant_channel(3, [1, 0, 0])) == pytest.approx(1 / 3, abs=1e-15)


def test_guess_prob_bsc():
    p = JointPrior([[0.5, 0.0], [0.0, 0.5]])
    assert correct_guess_prob(p, bsc(0.11)) == pytest.approx(0.89, abs=1e-15)


def test_guess_prob_dimension_check():
    with pytest.raises(DimensionMismatch):
        correct_guess_prob(JointPrior(np.eye(3) / 3), bsc(0.1))


@given(channels(max_in=3), st.integers(1, 4), st.integers(0, 2**31))
def test_guess_prob_monotone_under_garbling(W, nz, seed):
    rng = np.random.default_rng(seed)
    m = int(rng.integers(1, 4))
    prior = rng.exponential(size=(m, W.input_size))
    prior /= prior.sum()
    V = random_channel(W.output_size, nz, seed)
    assert correct_guess_prob(prior, compose(V, W)) <= correct_guess_prob(prior, W) + 1e-12


def test_repetition_code_bsc():
    d = 0.11
    # majority decoding fails on two or three flips
    expected = 3 * d**2 * (1 - d) + d**3
    code = Code.from_words([(0, 0, 0), (1, 1, 1)])
    assert code_error(code, bsc(d)) == pytest.approx(expected, abs=1e-15)


def test_single_use_code_is_map_error():
    W = random_channel(3, 4, 5)
    code = Code.from_words([(0,), (1,), (2,)])
    assert code_error(code, W) == pytest.approx(map_error(np.full(3, 1 / 3), W), abs=1e-15)


def test_code_error_product_channel():
    # a length-2 code over W is a length-1 code over W x W (symbol x1*2 + x2)
    W = random_channel(2, 3, 1)
    two_letter = Code.from_words([(0, 1), (1, 0)])
    one_letter = Code.from_words([(1,), (2,)])
    assert code_error(two_letter, W) == pytest.approx(code_error(one_letter, channel_product(W, W)), abs=1e-14)


def test_optimal_code_error_bsc():
    d = 0.2
    brute = min(
        code_error(Code.from_words(list(c)), bsc(d))
        for c in itertools.combinations(list(itertools.product(range(2), repeat=2)), 2))
    assert optimal_code_error(2, 2, bsc(d)) == pytest.approx(brute, abs=1e-15)
    assert optimal_code_error(2, 1, bsc(d)) == 0.0


def test_code_error_caps():
    with pytest.raises(TooLarge):
        code_error(Code.from_words([(0,) * 30, (1,) * 30]), bsc(0.1))
    with pytest.raises(ValueError):
        optimal_code_error(1, 3, bsc(0.1))
