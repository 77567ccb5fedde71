import math

import mpmath
import numpy as np
import pytest

from fracvar.errors import DomainError, GridTooCoarse, OrderOutOfRange
from fracvar.grid import GridFunction
from fracvar.operators import PowerPath, rl_left
from fracvar.sensitivity import (
    Method,
    dalpha_at_one,
    dalpha_at_zero,
    dalpha_rl,
    expansion_check,
    f1_kernel,
)


def power_rl(nu, alpha, t):
    return mpmath.gamma(nu + 1) / mpmath.gamma(nu + 1 - alpha) * mpmath.mpf(t) ** (nu - alpha)


def g_oracle(nu, alpha, t):
    # order derivative of the Euler formula, by numerical differentiation in mpmath
    return float(mpmath.diff(lambda a: power_rl(nu, a, t), alpha))


@pytest.mark.parametrize("nu, alpha", [(2.0, 0.2), (2.0, 0.8), (1.5, 0.5), (1.0, 0.3)])
def test_dalpha_rl_powers(nu, alpha):
    n = 1024
    y = GridFunction.sample(lambda t: t**nu, n)
    g = dalpha_rl(y, alpha)
    assert g.method is Method.KERNEL_FORMULA
    for t in (0.125, 0.5, 1.0):
        i = int(t * n)
        assert g.values.values[i] == pytest.approx(g_oracle(nu, alpha, t), abs=2e-4)


def test_dalpha_rl_with_boundary_value():
    # y = 1 + t: the y(0) t^-alpha / Gamma(1 - alpha) term contributes as well
    alpha, n = 0.4, 1024
    y = GridFunction.sample(lambda t: 1.0 + t, n)
    g = dalpha_rl(y, alpha).values
    assert math.isinf(g.values[0])
    for t in (0.25, 0.75):
        ref = g_oracle(0.0, alpha, t) + g_oracle(1.0, alpha, t)
        assert g.values[int(t * n)] == pytest.approx(ref, abs=2e-4)


def test_dalpha_rl_matches_finite_difference():
    alpha, eps = 0.6, 1e-4
    y = GridFunction.sample(lambda t: np.sin(3 * t), 512)
    fd = (rl_left(y, alpha + eps).values - rl_left(y, alpha - eps).values) / (2 * eps)
    g = dalpha_rl(y, alpha).values.values
    np.testing.assert_allclose(g[51:], fd[51:], atol=1e-6)


def test_f1_kernel():
    alpha, t = 0.3, 0.7
    ref = (mpmath.digamma(1 - alpha) - mpmath.log(t)) / (t**alpha * mpmath.gamma(1 - alpha))
    assert f1_kernel(t, alpha) == pytest.approx(float(ref), rel=1e-14)
    np.testing.assert_allclose(f1_kernel(np.array([t, 1.0]), alpha)[0], float(ref), rtol=1e-14)
    with pytest.raises(DomainError):
        f1_kernel(0.0, alpha)
    with pytest.raises(OrderOutOfRange):
        f1_kernel(1.0, 1.0)


def test_order_range():
    y = GridFunction.sample(lambda t: t, 32)
    for a in (0.0, 1.0):
        with pytest.raises(OrderOutOfRange):
            dalpha_rl(y, a)


def test_limit_at_zero():
    # d/dalpha of 2 t^(2 - alpha) / Gamma(3 - alpha) at alpha = 0
    y = GridFunction.sample(lambda t: t**2, 1024)
    g = dalpha_at_zero(y)
    t = y.t[1:]
    ref = t**2 * (float(mpmath.digamma(3)) - np.log(t))
    np.testing.assert_allclose(g.values.values[1:], ref, atol=1e-5)
    assert g.alternate is not None


def test_limit_at_one():
    y = GridFunction.sample(lambda t: t**2, 1024)
    g = dalpha_at_one(y, 0.0, 0.0)
    m = y.t >= 0.1
    t = y.t[m]
    ref = 2 * t * (float(mpmath.digamma(2)) - np.log(t))
    np.testing.assert_allclose(g.values.values[m], ref, atol=5e-4)
    np.testing.assert_allclose(g.alternate.values[m], ref, atol=5e-4)
    with pytest.raises(GridTooCoarse):
        dalpha_at_one(GridFunction.sample(lambda t: t**2, 8))


def test_limits_continue_interior_values():
    y = GridFunction.sample(lambda t: t**2, 1024)
    near0 = dalpha_rl(y, 1e-3).values.values
    near1 = dalpha_rl(y, 1 - 1e-3).values.values
    m = y.mask(0.1, 1.0)
    assert np.max(np.abs(near0 - dalpha_at_zero(y).values.values)[m]) < 5e-3
    assert np.max(np.abs(near1 - dalpha_at_one(y).values.values)[m]) < 5e-3


@pytest.mark.parametrize("eps", [1e-2, 1e-3])
def test_expansion_is_second_order(eps):
    d = expansion_check(1.0, 0.4, eps)
    assert abs(d) < 2 * eps**2
    with pytest.raises(DomainError):
        expansion_check(1.0, 1.0, eps)
    with pytest.raises(DomainError):
        expansion_check(1.0, 0.5, 0.5)


def test_power_path_input():
    y = PowerPath(1.0, 0.5).sample(1024)
    g = dalpha_rl(y, 0.3).values
    assert g.values[512] == pytest.approx(g_oracle(0.5, 0.3, 0.5), abs=1e-4)
