import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from isosym import (DiscreteMetricSpace, ModelMeasure, continuum_crosscheck, density, extension,
                    grid_space, iso_profile, iso_profile_bruteforce, laplace_profile, lip_modulus,
                    perimeter_h)
from isosym.discrete_oracle import closed_extension


def path_space(n, h=1.0):
    x = np.arange(n, dtype=float)
    return DiscreteMetricSpace(weights=np.full(n, 1 / n), h=h, coords=x)


def test_space_validation():
    with pytest.raises(ValueError):
        DiscreteMetricSpace(weights=np.array([0.5, 0.6]), h=1.0, coords=np.arange(2.0))
    with pytest.raises(ValueError):
        DiscreteMetricSpace(weights=np.array([0.5, 0.5]), h=0.0, coords=np.arange(2.0))


def test_extension_and_perimeter_on_path():
    sp = path_space(5)
    assert sorted(np.flatnonzero(closed_extension(sp, [0], 1.0))) == [0, 1]
    assert sorted(np.flatnonzero(extension(sp, [2], 1.0))) == [2]
    assert perimeter_h(sp, [0, 1]) == pytest.approx(0.2)
    assert perimeter_h(sp, [1, 2]) == pytest.approx(0.4)
    assert perimeter_h(sp, []) == 0.0
    assert perimeter_h(sp, range(5)) == 0.0


def test_bruteforce_matches_direct_enumeration():
    rng = np.random.default_rng(4)
    pts = rng.standard_normal((7, 2))
    w = rng.random(7)
    sp = DiscreteMetricSpace(weights=w / w.sum(), h=0.8, coords=pts)
    rows = iso_profile_bruteforce(sp, buckets=8)
    best = {}
    for mask in range(1 << 7):
        subset = [i for i in range(7) if mask >> i & 1]
        m = sp.weights[subset].sum() if subset else 0.0
        b = min(int(m * 8), 7) if mask != (1 << 7) - 1 else 7
        p = perimeter_h(sp, subset)
        best[b] = min(best.get(b, math.inf), p)
    for row in rows:
        assert row["perimeter"] == pytest.approx(best[row["bucket"]], abs=1e-12)
        assert perimeter_h(sp, row["subset"]) == pytest.approx(row["perimeter"], abs=1e-12)
        if row["envelope_subset"] is not None:
            assert perimeter_h(sp, row["envelope_subset"]) == pytest.approx(
                row["envelope_perimeter"], abs=1e-12)


def test_dist_matrix_space_agrees_with_coords():
    x = np.array([0.0, 0.5, 1.4, 2.0])
    w = np.array([0.1, 0.2, 0.3, 0.4])
    a = DiscreteMetricSpace(weights=w, h=0.6, coords=x)
    b = DiscreteMetricSpace(weights=w, h=0.6, dist=np.abs(x[:, None] - x[None, :]))
    for subset in ([0], [1, 2], [3], [0, 3]):
        assert perimeter_h(a, subset) == pytest.approx(perimeter_h(b, subset))
    vals = np.array([0.0, 1.0, 1.0, 4.0])
    np.testing.assert_allclose(lip_modulus(a, vals, 0.6), lip_modulus(b, vals, 0.6))


def test_enumeration_limit():
    with pytest.raises(ValueError, match="limited"):
        iso_profile_bruteforce(path_space(23))


def test_single_point():
    rows = iso_profile_bruteforce(path_space(1))
    assert [r["perimeter"] for r in rows] == [0.0, 0.0]


def test_lip_modulus():
    sp = path_space(4)
    np.testing.assert_allclose(lip_modulus(sp, [0, 1, 3, 3], 1.0), [1, 2, 2, 0])
    with pytest.raises(ValueError):
        lip_modulus(sp, [0, 1], 1.0)


@given(st.floats(-1.0, 1.0))
def test_grid_weights_match_measure(c):
    sp = grid_space(2.0, 15, 0.3, center=c)
    assert sp.weights.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.all(sp.weights > 0)


def test_grid_half_line_perimeter_close_to_density():
    m = ModelMeasure(2.0)
    sp = grid_space(2.0, 8001, 1e-3)
    x = sp.coords[:, 0]
    for a in (0.0, 0.5, 1.0):
        subset = np.flatnonzero(x <= a + 1e-9)
        assert perimeter_h(sp, subset) == pytest.approx(density(m, a), rel=0.02)


def test_crosscheck_on_laplace_grid():
    sp = grid_space(1.0, 12, 0.1)
    rows = iso_profile_bruteforce(sp)
    cc = continuum_crosscheck(rows, laplace_profile(), sp.weights.min())
    assert cc
    ratios = np.array([c[4] for c in cc])
    assert np.all(np.abs(ratios - 1) <= 0.1)
    # a grid half-line in the exponential tail gains one cell of mass per step
    h = 0.1
    assert ratios.min() >= (1 - math.exp(-h)) / h - 1e-9
    assert ratios.max() <= (math.exp(h) - 1) / h + 1e-9
