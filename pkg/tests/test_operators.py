import math

import mpmath
import numpy as np
import pytest

from fracvar.errors import NotRepresentable, OrderOutOfRange, SingularEndpointError
from fracvar.grid import GridFunction
from fracvar.operators import (
    FractionalOrder,
    PowerPath,
    caputo_left,
    caputo_right,
    gl_check,
    power_law_deriv,
    rl_integral,
    rl_left,
    rl_right,
)


def euler(nu, alpha, t):
    return math.gamma(nu + 1) / math.gamma(nu + 1 - alpha) * t ** (nu - alpha)


def sup_err(y, ref, lo=0.05, hi=1.0):
    m = y.mask(lo, hi)
    return float(np.max(np.abs(y.values[m] - ref[m])))


@pytest.mark.parametrize("nu, alpha", [(0.7, 0.3), (2.0, 0.5), (1.0, 0.9), (0.5, 0.25), (3.5, 0.6)])
def test_euler_formula(nu, alpha):
    y = PowerPath(1.0, nu).sample(1024)
    d = rl_left(y, alpha)
    assert sup_err(d, euler(nu, alpha, y.t)) < 2e-4


def test_caputo_against_quadrature():
    # Caputo derivative of sin, computed directly from its definition
    alpha = 0.4
    y = GridFunction.sample(np.sin, 1024)
    d = caputo_left(y, alpha)
    for t in (0.25, 0.5, 1.0):
        ref = mpmath.quad(lambda s: mpmath.cos(t - s) * s ** (-alpha), [0, t]) / mpmath.gamma(1 - alpha)
        i = int(round(t * 1024))
        assert d.values[i] == pytest.approx(float(ref), abs=1e-5)


def test_rl_caputo_identity():
    alpha = 0.5
    y = GridFunction.sample(lambda t: 1 + t**2, 512)
    diff = (rl_left(y, alpha) - caputo_left(y, alpha)).values
    t = y.t
    with np.errstate(divide="ignore"):
        ref = 1.0 / (math.gamma(1 - alpha) * t**alpha)
    np.testing.assert_allclose(diff[1:], ref[1:], rtol=1e-13)
    assert math.isinf(diff[0])


def test_right_operators_mirror():
    alpha = 0.35
    y = PowerPath(1.0, 1.5, "right").sample(1024)
    d = rl_right(y, alpha)
    ref = euler(1.5, alpha, 1.0 - y.t)
    assert sup_err(d, ref, 0.0, 0.95) < 1e-4
    np.testing.assert_allclose(caputo_right(y, alpha).values, d.values, atol=1e-14)


def test_limits_in_alpha():
    y = GridFunction.sample(np.sin, 256)
    np.testing.assert_array_equal(rl_left(y, 0.0).values, y.values)
    np.testing.assert_allclose(rl_left(y, 1.0).values, np.cos(y.t), atol=1e-4)
    np.testing.assert_allclose(rl_right(y, 1.0).values, -np.cos(y.t), atol=1e-4)
    assert rl_left(y, FractionalOrder(0.5)).values[10] == rl_left(y, 0.5).values[10]


def test_order_validation():
    y = GridFunction.sample(np.sin, 32)
    with pytest.raises(OrderOutOfRange):
        rl_left(y, 1.5)
    with pytest.raises(OrderOutOfRange):
        caputo_left(y, -0.1)
    with pytest.raises(OrderOutOfRange):
        FractionalOrder(0.6, domain_max=0.5)
    with pytest.raises(SingularEndpointError):
        rl_left(GridFunction.sample(lambda t: 1.0 / t, 32), 0.5)


def test_rl_integral_euler():
    # I^alpha t^nu = Gamma(nu + 1) / Gamma(nu + 1 + alpha) t^(nu + alpha)
    alpha, nu = 0.6, 1.0
    y = PowerPath(1.0, nu).sample(512)
    i = rl_integral(y, alpha)
    ref = math.gamma(nu + 1) / math.gamma(nu + 1 + alpha) * y.t ** (nu + alpha)
    np.testing.assert_allclose(i.values, ref, atol=1e-6)


def test_rl_left_inverts_integral():
    alpha = 0.3
    y = GridFunction.sample(lambda t: np.exp(t) - 1.0, 1024)
    back = rl_left(rl_integral(y, alpha), alpha)
    assert sup_err(back, y.values, 0.05, 1.0) < 1e-3


def test_power_law_deriv():
    p = power_law_deriv(PowerPath(2.0, 1.5), 0.5)
    assert p.exponent == 1.0
    assert p.coefficient == pytest.approx(2.0 * math.gamma(2.5) / math.gamma(2.0))
    # t^(alpha - 1) lies in the kernel of the derivative
    assert power_law_deriv(PowerPath(1.0, -0.7), 0.3).coefficient == 0.0
    assert power_law_deriv(PowerPath(1.0, 0.3 - 1.0), 0.3).coefficient == 0.0
    # constants are annihilated only at alpha = 1
    assert power_law_deriv(PowerPath(1.0, 0.0), 1.0).coefficient == 0.0
    with pytest.raises(NotRepresentable):
        power_law_deriv(PowerPath(1.0, -0.5), 0.6)


def test_gl_check_first_order():
    alpha = 0.5
    errs = []
    for n in (128, 256, 512):
        y = GridFunction.sample(lambda t: t**2, n)
        errs.append(sup_err(gl_check(y, alpha), euler(2.0, alpha, y.t), 0.1, 1.0))
    assert errs[0] / errs[1] > 1.7 and errs[1] / errs[2] > 1.7
    assert errs[2] < 5e-3


def test_euler_convergence():
    # without an edge hint the error at least halves when the grid is refined
    errs = []
    for n in (256, 512, 1024):
        y = GridFunction.sample(lambda t: t**0.7, n)
        errs.append(sup_err(rl_left(y, 0.3), euler(0.7, 0.3, y.t)))
    assert errs[0] >= 2 * errs[1] and errs[1] >= 2 * errs[2]
