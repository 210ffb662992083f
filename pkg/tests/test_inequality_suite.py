import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from isosym import (InequalityReport, ModelMeasure, QuantileFunction, RINormSpec, SampledFunction,
                    Tolerance, check_concentration, check_hardy_condition, check_ledoux,
                    check_linfty_embedding, check_lp_loglq, check_ls_poincare, check_main,
                    check_perdida_and_harhar, check_poincare_median, check_polya_szego,
                    check_talenti_mazya, iso_profile, laplace_profile, power_testers,
                    quadrature_nodes)
from isosym import testfunctions as tfl

HARD = ("pass", "pass (statistical)")


def quad_sampled(tf, r, count=20000):
    x, w = quadrature_nodes(ModelMeasure(r), count)
    return tfl.sampled(tf, x[:, None], w)


@pytest.fixture(scope="module")
def mc_bump():
    pts, w = tfl.sample_points(1.5, 2, 20000, 11)
    return tfl.sampled(tfl.radial_bump(), pts, w)


def all_hard_checks(f, prof):
    yield check_ledoux(f, prof)
    yield check_talenti_mazya(f, prof)
    yield check_polya_szego(f, prof, grid=1024)
    yield check_main(f, prof, grid=1024)
    yield check_poincare_median(f, prof)
    for X in (RINormSpec.L1(), RINormSpec.Lp(2), RINormSpec.Linf()):
        yield check_ls_poincare(f, prof, X, grid=1024)


@pytest.mark.parametrize("r", [1.0, 1.5, 2.0])
def test_deterministic_family_passes(r):
    prof = iso_profile(ModelMeasure(r))
    for tf in (tfl.coordinate(0), tfl.smoothed_half_line(0.05), tfl.clamped_ramp(),
               tfl.radial_bump()):
        f = quad_sampled(tf, r)
        for rep in all_hard_checks(f, prof):
            assert rep.status in HARD, (tf.name, rep.name, rep.lhs, rep.rhs)


def test_monte_carlo_bump_passes(mc_bump):
    prof = iso_profile(ModelMeasure(1.5))
    for rep in all_hard_checks(mc_bump, prof):
        assert rep.status in HARD, (rep.name, rep.lhs, rep.rhs)


def test_half_line_is_near_equality_for_ledoux():
    f = quad_sampled(tfl.smoothed_half_line(1e-2), 2.0, 50000)
    rep = check_ledoux(f, iso_profile(ModelMeasure(2.0)))
    assert rep.status == "pass" and rep.realized_constant > 0.95


def test_zeroed_gradients_fail(mc_bump):
    bad = SampledFunction(mc_bump.values, np.zeros_like(mc_bump.grads), mc_bump.weights)
    prof = iso_profile(ModelMeasure(1.5))
    for check in (check_main, check_ledoux, check_talenti_mazya, check_poincare_median):
        rep = check(bad, prof)
        assert rep.status == "fail" and rep.hard_failure and not rep.passed


def test_halved_gradients_fail_for_sharp_function():
    f = quad_sampled(tfl.smoothed_half_line(1e-2), 2.0, 50000)
    bad = SampledFunction(f.values, 0.5 * f.grads, f.weights)
    assert check_ledoux(bad, iso_profile(ModelMeasure(2.0))).status == "fail"


def test_diagonal_projection_beats_one_dimensional_profile():
    # the level sets of (x1 + x2)/sqrt(2) under mu_1.2 x mu_1.2 have less
    # boundary than the one-dimensional profile allows
    pts, w = tfl.sample_points(1.2, 2, 100000, 7)
    f = tfl.sampled(tfl.smoothed_half_line(0.02), (pts.sum(axis=1) / math.sqrt(2))[:, None], w)
    assert check_ledoux(f, iso_profile(ModelMeasure(1.2))).status == "fail"


def test_constant_function():
    f = SampledFunction.uniform(np.full(50, 3.0), np.zeros(50))
    prof = iso_profile(ModelMeasure(2.0))
    for rep in all_hard_checks(f, prof):
        assert rep.status == "pass" and rep.lhs == 0.0
    m = ModelMeasure(1.5)
    assert check_lp_loglq(f.scaled(1 / 3), m).realized_constant == pytest.approx(
        math.gamma(1 + 2 / m.q), rel=1e-9)
    assert check_concentration(f, m).realized_constant == 0.0


def test_median_ramp_is_equality_on_laplace():
    x, w = quadrature_nodes(ModelMeasure(1.0), 200000)
    f = tfl.sampled(tfl.clamped_ramp(), x[:, None], w)
    rep = check_poincare_median(f, laplace_profile())
    assert rep.status == "pass"
    assert rep.lhs == pytest.approx(1 - math.exp(-1), rel=1e-4)
    assert rep.rhs == pytest.approx(1 - math.exp(-1), rel=1e-4)


@settings(max_examples=15)
@given(st.floats(0.1, 20.0))
def test_ledoux_is_scale_invariant(c):
    f = quad_sampled(tfl.radial_bump(), 1.5, 2000)
    prof = iso_profile(ModelMeasure(1.5))
    a, b = check_ledoux(f, prof), check_ledoux(f.scaled(c), prof)
    assert b.lhs == pytest.approx(c * a.lhs, rel=1e-9)
    assert b.rhs == pytest.approx(c * a.rhs, rel=1e-9)
    assert b.status == a.status


@settings(max_examples=15)
@given(st.floats(-5.0, 5.0))
def test_median_poincare_is_shift_invariant(c):
    f = quad_sampled(tfl.clamped_ramp(), 1.5, 2000)
    prof = iso_profile(ModelMeasure(1.5))
    a, b = check_poincare_median(f, prof), check_poincare_median(f.shifted(c), prof)
    assert b.lhs == pytest.approx(a.lhs, rel=1e-9, abs=1e-12)


def test_statistical_verdict_is_reproducible(mc_bump):
    prof = iso_profile(ModelMeasure(1.5))
    a = check_main(mc_bump, prof, grid=512)
    b = check_main(mc_bump, prof, grid=512)
    assert a.to_dict() == b.to_dict()


def test_tolerance_controls_verdict():
    # about 1400 nodes in the strip: a 15% deficit is well beyond 3 standard errors
    f = quad_sampled(tfl.smoothed_half_line(5e-2), 2.0, 50000)
    bad = SampledFunction(f.values, 0.85 * f.grads, f.weights)
    prof = iso_profile(ModelMeasure(2.0))
    assert check_ledoux(bad, prof).status == "fail"
    assert check_ledoux(bad, prof, Tolerance(rel_tol=0.3)).status == "pass"


def test_recorded_checkers():
    m = ModelMeasure(2.0)
    f = quad_sampled(tfl.coordinate(0), 2.0, 5000)
    lin = check_linfty_embedding(f, m)
    assert lin.status == "recorded" and "rhs-diverges" in lin.flags
    assert lin.diagnostics["rhs_at_lower_squared"] > lin.rhs
    con = check_concentration(f, m)
    assert con.status == "recorded" and 0 < con.realized_constant < 5
    lp = check_lp_loglq(f, m)
    assert lp.status == "recorded" and 0 < lp.realized_constant <= 1.0
    ph = check_perdida_and_harhar(f, iso_profile(m), RINormSpec.Lp(2), RINormSpec.LpLogL(2, 0.5))
    assert ph.status == "recorded" and ph.realized_constant > 0


def test_checkers_needing_finite_q():
    f = quad_sampled(tfl.coordinate(0), 1.0, 100)
    with pytest.raises(ValueError):
        check_concentration(f, ModelMeasure(1.0))
    with pytest.raises(ValueError):
        check_lp_loglq(f, ModelMeasure(1.0))


def test_concentration_rejects_inconsistent_gradients():
    f = SampledFunction.uniform([0.0, 1.0], [0.0, 0.0])
    with pytest.raises(ValueError):
        check_concentration(f, ModelMeasure(2.0))


def test_hardy_condition_laplace_indicator():
    rep = check_hardy_condition(laplace_profile(), RINormSpec.L1(), RINormSpec.L1(),
                                [QuantileFunction.constant(1.0, support=0.5)])
    assert rep.lhs == pytest.approx(0.5, abs=1e-6)
    assert rep.realized_constant == pytest.approx(1.0, abs=1e-5)


def test_hardy_condition_errors():
    prof = laplace_profile()
    with pytest.raises(ValueError, match="support"):
        check_hardy_condition(prof, RINormSpec.L1(), RINormSpec.L1(),
                              [QuantileFunction.constant(1.0)])
    with pytest.raises(ValueError, match="admissible"):
        check_hardy_condition(prof, RINormSpec.L1(), RINormSpec.L1(),
                              [QuantileFunction.constant(0.0, support=0.25)])
    rep = check_hardy_condition(iso_profile(ModelMeasure(2.0)), RINormSpec.Lp(2),
                                RINormSpec.LpLogL(2, 0.5), power_testers(2.0), grid=512)
    assert math.isfinite(rep.realized_constant) and rep.diagnostics["testers"] == 6


def test_report_serializes():
    rep = InequalityReport("x", "y", math.inf, 1.0, -math.inf, math.nan, "fail", {"a": np.inf})
    text = json.dumps(rep.to_dict())
    assert '"inf"' in text and '"nan"' in text
