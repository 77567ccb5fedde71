import math

import mpmath
import numpy as np
import pytest

from fracvar.errors import GridTooCoarse, NonIntegrableError, SingularEndpointError
from fracvar.grid import (
    GridFunction,
    QuadratureRule,
    derivative,
    estimate_endpoint_exponent,
    integrate,
    integrate_singular,
    product_weights,
)


def test_gridfunction_invariants():
    y = GridFunction.sample(np.sin, 8, b=2.0)
    assert y.n_intervals == 8
    assert y.h == 0.25
    np.testing.assert_allclose(y.t, np.linspace(0, 2, 9))
    with pytest.raises(ValueError):
        y.values[0] = 1.0
    with pytest.raises(ValueError):
        GridFunction(np.array([0.0, np.nan, 1.0, 2.0]))
    with pytest.raises(ValueError):
        GridFunction(np.zeros(2))
    with pytest.raises(ValueError):
        GridFunction(np.zeros(5), b=0.0)


def test_endpoint_flags_and_norms():
    y = GridFunction.sample(lambda t: 1.0 / t, 10)
    assert y.endpoint_flags == (False, True)
    assert y.sup_norm() == pytest.approx(10.0)
    assert y.interior_sup_norm(0.25) == pytest.approx(1.0 / 0.3)


def test_reflect_and_arithmetic():
    y = GridFunction.sample(lambda t: t**2, 4, edge_exponents=(0.5, None))
    r = y.reflect()
    np.testing.assert_array_equal(r.values, y.values[::-1])
    assert r.edge_exponents == (None, 0.5)
    np.testing.assert_allclose((2.0 * y - y).values, y.values)
    np.testing.assert_allclose((1.0 - y).values, 1.0 - y.values)


def test_product_weights_exact_for_linear():
    # int_0^{nh} (nh - s)^(-a) f(s) ds is exact for piecewise-linear f
    a, n, h = 0.35, 7, 0.1
    far, near = product_weights(a, n, h)
    w = np.zeros(n + 1)
    m = np.arange(1, n + 1)
    w[n - m] += far
    w[n - m + 1] += near
    f = 1.0 + 3.0 * np.arange(n + 1) * h
    T = n * h
    exact = T ** (1 - a) / (1 - a) + 3.0 * T ** (2 - a) / ((1 - a) * (2 - a))
    assert np.dot(w, f) == pytest.approx(exact, rel=1e-13)


def test_trapezoid_and_flagged_end():
    y = GridFunction.sample(np.exp, 512)
    assert integrate(y) == pytest.approx(math.e - 1.0, rel=1e-6)
    with pytest.raises(SingularEndpointError):
        integrate(GridFunction.sample(lambda t: 1.0 / t, 16))


@pytest.mark.parametrize("e", [0.0, 0.3, 0.8])
def test_product_abel_rule(e):
    # int_0^1 cos(t) (1 - t)^(-e) dt
    with mpmath.workdps(30):
        ref = float(mpmath.quad(lambda s: mpmath.cos(1 - s) * s ** (-e), [0, 1]))
    y = GridFunction.sample(np.cos, 256)
    assert integrate(y, QuadratureRule.product_abel(e)) == pytest.approx(ref, rel=1e-5)


def test_product_log_rule():
    # -int_0^1 t^(-0.2) ln(t) e^t dt with the kernel at the left end
    ref = float(mpmath.quad(lambda t: -t ** (-0.2) * mpmath.log(t) * mpmath.exp(t), [0, 1]))
    y = GridFunction.sample(np.exp, 256)
    assert integrate(y, QuadratureRule.product_log(0.2, "left")) == pytest.approx(ref, rel=1e-5)


def test_rule_validation():
    with pytest.raises(NonIntegrableError):
        QuadratureRule.product_abel(1.0)
    with pytest.raises(ValueError):
        QuadratureRule(end="middle")


def test_integrate_singular_two_ends():
    f = lambda t: t ** (-0.3) * (1 - t) ** (-0.45) * np.cos(t)  # noqa: E731
    ref = float(mpmath.quad(lambda t: t ** (-0.3) * (1 - t) ** (-0.45) * mpmath.cos(t), [0, 0.5, 1]))
    y = GridFunction.sample(f, 1024)
    assert integrate_singular(y, (0.3, 0.45)) == pytest.approx(ref, rel=1e-5)
    # exponents estimated from the samples
    assert integrate_singular(y) == pytest.approx(ref, rel=1e-3)


def test_integrate_singular_weights():
    # int_0^1 (1 - t)^(-0.25) t^2 dt = B(3, 0.75)
    ref = float(mpmath.beta(3, 0.75))
    errs = [
        abs(integrate_singular(GridFunction.sample(lambda t: t**2, n), weights=(0.0, 0.25)) - ref)
        for n in (128, 256)
    ]
    assert errs[1] < 1e-5 * ref
    # second order in h for a smooth factor
    assert errs[0] / errs[1] > 3.5


def test_integrate_singular_divergent():
    y = GridFunction.sample(lambda t: 1.0 / (1.0 - t), 64)
    with pytest.raises(NonIntegrableError):
        integrate_singular(y, (None, 1.0))


def test_estimate_endpoint_exponent():
    y = GridFunction.sample(lambda t: (1 - t) ** -0.4, 128)
    assert estimate_endpoint_exponent(y, "right") == pytest.approx(0.4, abs=1e-12)
    assert estimate_endpoint_exponent(y, "left") == 0.0


def test_derivative():
    y = GridFunction.sample(np.sin, 256)
    np.testing.assert_allclose(derivative(y).values, np.cos(y.t), atol=2e-5)
    z = GridFunction.sample(lambda t: 1.0 / (1.0 - t), 64)
    assert np.isnan(derivative(z).values[-1])
    with pytest.raises(GridTooCoarse):
        derivative(GridFunction(np.zeros(4)))
