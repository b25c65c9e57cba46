import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from blackwell_kit import (
    DimensionMismatch,
    NoisinessBudget,
    bec,
    bsc,
    channel_distance,
    compose,
    continuity_probe,
    equivalent,
    identity_channel,
    is_degraded,
    noisiness_lower_bound,
    random_channel,
    tv_class_distance,
)
from blackwell_kit.analysis import compose_witnesses, equivalent_by_lp, perturb, project_to_simplex
from blackwell_kit.simplex import phase_one

from conftest import channels


def test_phase_one_feasible_and_infeasible():
    A = np.array([[1.0, 1.0], [1.0, -1.0]])
    r = phase_one(A, np.array([1.0, 0.0]))
    assert r.infeasibility <= 1e-12
    assert np.allclose(r.x, [0.5, 0.5])
    # x1 + x2 = 1 and x1 + x2 = 2 cannot both hold
    r = phase_one(np.array([[1.0, 1.0], [1.0, 1.0]]), np.array([1.0, 2.0]))
    assert r.infeasibility == pytest.approx(1.0)


def test_bsc_degradation():
    res = is_degraded(bsc(0.2), bsc(0.1))
    assert res.degraded and res.residual <= 1e-8
    # (1-2*0.2) = (1-2*0.1)(1-2*v) gives v = 0.125
    assert res.intermediate.allclose(bsc(0.125), atol=1e-8)
    assert not is_degraded(bsc(0.1), bsc(0.2)).degraded


def test_bec_is_degraded_from_less_erasing_bec():
    assert is_degraded(bec(0.6), bec(0.3)).degraded
    assert not is_degraded(bec(0.3), bec(0.6)).degraded


@given(channels(max_in=3, max_out=4), st.integers(1, 4), st.integers(0, 2**31))
def test_garbling_is_degraded(W, nz, seed):
    V = random_channel(W.output_size, nz, seed)
    res = is_degraded(compose(V, W), W)
    assert res.degraded
    assert np.abs(compose(res.intermediate, W).matrix - compose(V, W).matrix).max() <= 1e-8


@given(channels(max_in=3, max_out=4), st.integers(1, 4), st.integers(0, 2**31))
def test_lp_agrees_with_measures(W, ny, seed):
    W2 = random_channel(W.input_size, ny, seed)
    assert equivalent_by_lp(W, W2) == equivalent(W, W2)


def test_witnesses_compose():
    a = is_degraded(bsc(0.3), bsc(0.2))
    b = is_degraded(bsc(0.2), bsc(0.1))
    V = compose_witnesses(a, b)
    assert compose(V, bsc(0.1)).allclose(bsc(0.3), atol=1e-8)


def test_degraded_dimension_check():
    with pytest.raises(DimensionMismatch):
        is_degraded(bsc(0.1), identity_channel(3))


def test_noisiness_bsc_extremes():
    est = noisiness_lower_bound(bsc(0.0), bsc(0.5))
    assert est.lower_bound >= 0.5 - 1e-12


def test_noisiness_symmetric_and_zero_on_self():
    W1, W2 = random_channel(2, 3, 1), random_channel(2, 2, 2)
    b = NoisinessBudget(samples=30, seed=5)
    assert noisiness_lower_bound(W1, W2, b).lower_bound == noisiness_lower_bound(W2, W1, b).lower_bound
    assert noisiness_lower_bound(W1, W1, b).lower_bound == 0.0


def test_noisiness_deterministic_per_seed():
    W1, W2 = random_channel(3, 3, 1), random_channel(3, 2, 2)
    b = NoisinessBudget(m_max=3, samples=20, seed=9)
    assert noisiness_lower_bound(W1, W2, b).lower_bound == noisiness_lower_bound(W1, W2, b).lower_bound


def test_noisiness_below_channel_distance():
    W1, W2 = random_channel(2, 3, 3), random_channel(2, 3, 4)
    est = noisiness_lower_bound(W1, W2, NoisinessBudget(samples=50))
    assert est.lower_bound <= channel_distance(W1, W2) + 1e-12


def test_metric_contrast():
    W1, W2 = bsc(0.1), bsc(0.1 + 1e-6)
    assert tv_class_distance(W1, W2) == 1.0
    assert noisiness_lower_bound(W1, W2).lower_bound <= 1e-5


def test_projection_lands_on_simplex():
    v = np.random.default_rng(0).normal(size=(5, 4))
    p = project_to_simplex(v)
    assert np.all(p >= 0)
    assert np.allclose(p.sum(axis=1), 1.0)


@given(channels(), st.floats(0, 0.5), st.integers(0, 2**31))
def test_perturb_stays_in_ball(W, radius, seed):
    W2 = perturb(W, radius, np.random.default_rng(seed))
    assert channel_distance(W, W2) <= radius + 1e-12


def test_probe_shrinks_with_radius():
    W = random_channel(2, 3, 0)
    devs = [continuity_probe(W, "symmetric_capacity", 1e-2 / 2**k, 20, seed=1).max_param_deviation
            for k in range(4)]
    assert all(a >= b for a, b in zip(devs, devs[1:]))
    assert devs[-1] > 0


def test_probe_rejects_unknown_param():
    with pytest.raises(ValueError):
        continuity_probe(bsc(0.1), "entropy")
