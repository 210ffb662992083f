import numpy as np
import pytest
from hypothesis import given, strategies as st

from isosym import (QuantileFunction, SampledFunction, distribution, gradient_integral_above,
                    maximal_average, median, rearrange, rearrange_by_definition)
from isosym.rearrangement import lebesgue_rearrangement, step_rearrangement

from conftest import random_sampled


@st.composite
def sampled_functions(draw, max_size=40):
    n = draw(st.integers(1, max_size))
    vals = draw(st.lists(st.floats(-5, 5, allow_nan=False), min_size=n, max_size=n))
    grads = draw(st.lists(st.floats(0, 3, allow_nan=False), min_size=n, max_size=n))
    w = draw(st.lists(st.floats(0.01, 1.0), min_size=n, max_size=n))
    return SampledFunction.normalized(vals, grads, w)


def test_validation():
    with pytest.raises(ValueError):
        SampledFunction([1.0], [1.0], [0.5])
    with pytest.raises(ValueError):
        SampledFunction([1.0, 2.0], [-1.0, 0.0], [0.5, 0.5])
    with pytest.raises(ValueError):
        SampledFunction([np.nan], [0.0], [1.0])
    with pytest.raises(ValueError):
        QuantileFunction([0.0, 0.5, 1.0], [1.0, 2.0])
    with pytest.raises(ValueError):
        QuantileFunction([0.1, 1.0], [1.0])


def test_normalized_drops_zero_weights():
    f = SampledFunction.normalized([1, 2, 3], [0, 0, 0], [1, 0, 3])
    assert len(f) == 2
    np.testing.assert_allclose(f.weights, [0.25, 0.75])


def test_hand_example():
    f = SampledFunction([3.0, -1.0, 2.0, -3.0], [0, 0, 0, 0], [0.1, 0.2, 0.3, 0.4])
    q = rearrange(f)
    np.testing.assert_allclose(q.breaks, [0, 0.5, 0.8, 1.0])
    np.testing.assert_allclose(q.values, [3, 2, 1])
    assert q(0.0) == 3 and q(0.5) == 2 and q(0.99) == 1 and q(1.0) == 0
    assert distribution(f, 2.0) == pytest.approx(0.5)
    assert distribution(f, 0.0) == pytest.approx(1.0)
    assert q.total() == pytest.approx(0.5 * 3 + 0.3 * 2 + 0.2 * 1)
    assert maximal_average(q, 0.8) == pytest.approx((1.5 + 0.6) / 0.8)


def test_random_functions_against_definition(rng):
    probes = np.linspace(1e-3, 1.0, 1000)
    for _ in range(200):
        f = random_sampled(rng, ties=bool(rng.integers(2)))
        np.testing.assert_array_equal(rearrange(f)(probes), rearrange_by_definition(f, probes))


@given(sampled_functions())
def test_equimeasurable(f):
    q = rearrange(f)
    a = np.abs(f.values)
    assert q.total() == pytest.approx(np.dot(f.weights, a), rel=1e-12, abs=1e-14)
    assert np.dot(q.values ** 2, q.lengths) == pytest.approx(np.dot(f.weights, a ** 2),
                                                             rel=1e-12, abs=1e-14)
    for t in np.unique(a):
        assert distribution(f, t) == pytest.approx(f.weights[a > t].sum(), abs=1e-12)


@given(sampled_functions(), st.floats(0.1, 10))
def test_positive_homogeneity(f, c):
    np.testing.assert_allclose(rearrange(f.scaled(c)).values, c * rearrange(f).values, rtol=1e-12)
    np.testing.assert_allclose(rearrange(f.scaled(-c)).values, c * rearrange(f).values,
                               rtol=1e-12)


@given(sampled_functions())
def test_maximal_average_dominates_and_decreases(f):
    q = rearrange(f)
    t = np.linspace(1e-3, 1, 200)
    ss = maximal_average(q, t)
    assert np.all(ss >= q(t) - 1e-12)
    assert np.all(np.diff(ss) <= 1e-12)


@given(sampled_functions())
def test_median_definition(f):
    m = median(f)
    assert f.weights[f.values >= m].sum() >= 0.5 - 1e-12
    assert f.weights[f.values <= m].sum() >= 0.5 - 1e-12
    assert m in f.values


@given(sampled_functions(), st.floats(0, 5))
def test_gradient_integral_above(f, level):
    ref = np.dot(f.weights, f.grads * (np.abs(f.values) > level))
    assert gradient_integral_above(f, level) == pytest.approx(ref, abs=1e-12)


def test_maximal_average_rejects_zero():
    with pytest.raises(ValueError):
        maximal_average(QuantileFunction.constant(1.0), 0.0)


def test_distribution_rejects_negative():
    with pytest.raises(ValueError):
        distribution(SampledFunction.uniform([1.0], [0.0]), -1.0)


def test_step_rearrangement_unnormalized():
    q = step_rearrangement([1.0, 2.0], [0.25, 0.25])
    assert q.breaks[-1] == pytest.approx(0.5)
    assert q(0.75) == 0.0


def test_lebesgue_rearrangement_of_linear():
    q = lebesgue_rearrangement(lambda s: s, np.linspace(0, 1, 101))
    # f* of s on (0,1) is 1 - s; Gauss-Legendre integrates polynomials exactly
    assert q.total() == pytest.approx(0.5, rel=1e-12)
    assert np.dot(q.values ** 2, q.lengths) == pytest.approx(1 / 3, rel=1e-12)
    assert q(0.25) == pytest.approx(0.75, abs=0.01)


def test_integral_and_scaling():
    q = QuantileFunction([0.0, 0.2, 1.0], [5.0, 1.0])
    assert q.integral(0.1) == pytest.approx(0.5)
    assert q.integral(2.0) == pytest.approx(1.8)
    assert q.scaled(2).total() == pytest.approx(3.6)
    assert q.scaled(0).total() == 0.0
    with pytest.raises(ValueError):
        q.scaled(-1)
