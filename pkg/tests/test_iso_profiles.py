import math

import numpy as np
import pytest
from scipy import integrate

from isosym import (IsoProfile, ModelMeasure, ProfileWeightedOperator, QuantileFunction,
                    RINormSpec, estimate_operator_norm, iso_profile, kernel_integral,
                    laplace_profile, power_tester, power_testers, q_operator)
from isosym.iso_profiles import maximal_function_ratio


def no_primitive(profile):
    return IsoProfile(func=profile.func, name="quad", q=profile.q, r=profile.r)


@pytest.mark.parametrize("r", [1.0, 1.5, 2.0])
def test_kernel_integral_matches_quadrature(r):
    prof = iso_profile(ModelMeasure(r))
    op = ProfileWeightedOperator(prof)
    f = QuantileFunction([0.0, 0.1, 0.3, 1.0], [3.0, 1.0, 0.0])
    for t in (0.01, 0.1, 0.2, 0.29):
        ref = integrate.quad(lambda s: f(s) / prof(s), t, 0.3, epsrel=1e-12, points=[0.1])[0]
        assert kernel_integral(op, f, t) == pytest.approx(ref, rel=1e-8)
    assert kernel_integral(op, f, 0.5) == 0.0


def test_kernel_integral_without_primitive_agrees():
    prof = iso_profile(ModelMeasure(1.5))
    f = QuantileFunction([0.0, 0.2, 0.45, 1.0], [2.0, 1.0, 0.0])
    t = np.array([0.05, 0.2, 0.3])
    a = kernel_integral(ProfileWeightedOperator(prof), f, t)
    b = kernel_integral(ProfileWeightedOperator(no_primitive(prof)), f, t)
    np.testing.assert_allclose(a, b, rtol=1e-8)


def test_q_operator_of_one_diverges():
    op = ProfileWeightedOperator(laplace_profile())
    assert math.isinf(kernel_integral(op, QuantileFunction.constant(1.0), 0.3))
    assert math.isinf(q_operator(op, QuantileFunction.constant(1.0), 0.3))


def test_q_operator_laplace_closed_form():
    # I(s) = s on (0, 1/2): Q_I chi_(0,1/2)(t) = log(1/(2t))
    op = ProfileWeightedOperator(laplace_profile())
    f = QuantileFunction.constant(1.0, support=0.5)
    t = np.array([1e-6, 0.01, 0.25])
    np.testing.assert_allclose(q_operator(op, f, t), np.log(1 / (2 * t)), rtol=1e-10)
    with pytest.raises(ValueError):
        kernel_integral(op, f, 0.0)


def test_operator_norm_lower_bound_on_l1():
    # ||Q_I chi_(0,a)||_1 / ||chi_(0,a)||_1 = 1 for I(s) = s and a <= 1/2
    op = ProfileWeightedOperator(laplace_profile(), grid=2048)
    est = estimate_operator_norm(op, RINormSpec.L1(),
                                 [QuantileFunction.constant(1.0, support=0.5)])
    assert est == pytest.approx(1.0, rel=1e-6)
    with pytest.raises(ValueError):
        estimate_operator_norm(op, RINormSpec.L1(), [QuantileFunction.constant(0.0)])


def test_power_testers():
    f = power_tester(0.25)
    assert f.breaks[-1] == 1.0 and f(0.75) == 0.0
    assert np.all(np.diff(f.values) <= 0)
    # approximates s^{-1/4} from below
    assert f(0.1) <= 0.1 ** -0.25
    assert len(power_testers(2.0)) == 6
    assert len(power_testers(math.inf)) == 1
    with pytest.raises(ValueError):
        power_tester(-1.0)


def test_maximal_function_ratio_lp():
    # chi_(0,1/2): ||f**||_2^2 = 1/2 + int_{1/2}^1 dt/(4t^2) = 3/4 against ||f||_2^2 = 1/2
    ratio = maximal_function_ratio(RINormSpec.Lp(2), [QuantileFunction.constant(1.0, 0.5)],
                                   grid=2048)
    assert ratio == pytest.approx(math.sqrt(1.5), rel=1e-4)
