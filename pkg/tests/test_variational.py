import math

import mpmath
import numpy as np
import pytest

from fracvar.errors import BoundaryViolation, NonIntegrableError, StationarityViolation
from fracvar.grid import GridFunction
from fracvar.operators import PowerPath
from fracvar.scenarios import (
    constant_force_lagrangian,
    ex3_path,
    primary_constraint_lagrangian,
    quadratic_lagrangian,
)
from fracvar.variational import (
    LagrangianSpec,
    action,
    alpha_condition,
    beta_action,
    dI_dalpha,
    el_residual_y,
    int_by_parts_defect,
    sampled_monotone,
    stationarity_report,
)

UNIT = LagrangianSpec(evaluate=lambda t, y, d, a: np.ones_like(np.asarray(t, float)))


@pytest.mark.parametrize("L", [
    quadratic_lagrangian(), quadratic_lagrangian(0.3), constant_force_lagrangian(2.0),
    primary_constraint_lagrangian(1.5),
])
def test_partials_consistent(L):
    assert L.check_partials() < 1e-6


def test_check_partials_detects_wrong_partial():
    bad = LagrangianSpec(evaluate=lambda t, y, d, a: y * d, partial_y=lambda t, y, d, a: y)
    assert bad.check_partials() > 0.1


@pytest.mark.parametrize("alpha", [0.0, 0.1, 0.25, 0.4])
def test_action_closed_form(alpha):
    L = primary_constraint_lagrangian(1.0)
    y = ex3_path(alpha, 1.0, 1024)
    assert action(y, alpha, L, (alpha, 2 * alpha)) == pytest.approx(
        1.0 / (2 * (1 - 2 * alpha)), rel=1e-5)


def test_action_against_quadrature():
    # L = d^2 along t^0.7 with alpha = 0.3: d = Gamma(1.7)/Gamma(1.4) t^0.4
    L = quadratic_lagrangian()
    y = PowerPath(1.0, 0.7).sample(1024)
    ref = (math.gamma(1.7) / math.gamma(1.4)) ** 2 / 1.8
    assert action(y, 0.3, L, check_boundary=False) == pytest.approx(ref, rel=1e-5)


def test_action_boundary_check():
    L = primary_constraint_lagrangian(2.0)
    with pytest.raises(BoundaryViolation):
        action(ex3_path(0.2, 1.0, 64), 0.2, L)


def test_action_divergent():
    # d^2 ~ t^(-1.2) is not integrable
    y = PowerPath(1.0, 0.2).sample(256)
    with pytest.raises(NonIntegrableError):
        action(y, 0.8, quadratic_lagrangian(), (1.2, None), check_boundary=False)


def test_beta_action():
    y = ex3_path(0.25, 1.0, 512)
    L = primary_constraint_lagrangian(1.0)
    assert beta_action(y, 0.25, 1.0, L, (0.25, 0.5)) == action(y, 0.25, L, (0.25, 0.5))
    one = GridFunction.sample(lambda t: t, 512)
    for beta in (0.75, 1.5, 2.5):
        assert beta_action(one, 0.5, beta, UNIT) == pytest.approx(
            1.0 / math.gamma(beta + 1), rel=1e-10)
    with pytest.raises(ValueError):
        beta_action(one, 0.5, 0.0, UNIT)


def test_beta_action_against_quadrature():
    y = ex3_path(0.2, 1.0, 2048)
    L = primary_constraint_lagrangian(1.0)
    # the integrand of the action along y* is d/dt of int_0^t ((1-s)(t-s))^-a ds
    a, beta = 0.2, 1.5

    def integrand(t):
        dt = mpmath.diff(lambda x: mpmath.quad(
            lambda s: ((1 - s) * (x - s)) ** (-a), [0, x]), t)
        return (1 - t) ** (beta - 1) * (dt - 0.5 * (1 - t) ** (-2 * a))

    with mpmath.workdps(20):
        ref = float(mpmath.quad(integrand, [0, 0.5, 1]) / mpmath.gamma(beta))
    assert beta_action(y, a, beta, L, (a, 2 * a)) == pytest.approx(ref, rel=1e-3)


def test_el_residual_stationary_path():
    L = primary_constraint_lagrangian(1.0)
    r = el_residual_y(ex3_path(0.3, 1.0, 256), 0.3, L)
    assert r.interior_sup_norm() < 1e-12


def test_el_residual_nonstationary_path():
    L = constant_force_lagrangian(1.0)
    y = GridFunction.sample(lambda t: t, 256)
    r = el_residual_y(y, 0.5, L)
    assert r.interior_sup_norm() > 0.5


def test_alpha_condition_is_order_derivative():
    # at fixed y the condition is the partial derivative of the action in alpha
    L = quadratic_lagrangian()
    y = GridFunction.sample(lambda t: t**2 + t, 1024)
    a, eps = 0.4, 1e-4
    fd = (action(y, a + eps, L, check_boundary=False)
          - action(y, a - eps, L, check_boundary=False)) / (2 * eps)
    assert alpha_condition(y, a, L) == pytest.approx(fd, rel=1e-4)


@pytest.mark.parametrize("alpha", [0.1, 0.3])
def test_dI_dalpha_matches_total_derivative(alpha):
    L = primary_constraint_lagrangian(1.0)
    exact = 1.0 / (1 - 2 * alpha) ** 2
    got = dI_dalpha(lambda a: ex3_path(a, 1.0, 2048), alpha, L, (alpha, 2 * alpha))
    assert got == pytest.approx(exact, rel=2e-2)


def test_dI_dalpha_rejects_nonstationary():
    L = constant_force_lagrangian(1.0)
    with pytest.raises(StationarityViolation):
        dI_dalpha(lambda a: GridFunction.sample(lambda t: t, 128), 0.5, L)


def test_integration_by_parts():
    f = GridFunction.sample(lambda t: t * (1 - t), 1024)
    g = GridFunction.sample(lambda t: 1 - t, 1024)
    assert abs(int_by_parts_defect(f, g, 0.4)) < 1e-4
    with pytest.raises(BoundaryViolation):
        int_by_parts_defect(g, f, 0.4)


def test_stationarity_report_fields():
    L = primary_constraint_lagrangian(1.0)
    rep = stationarity_report(ex3_path(0.2, 1.0, 512), 0.2, L, (0.2, 0.4))
    assert rep.action_value == pytest.approx(1 / 1.2, rel=1e-5)
    assert rep.el_residual_norm < 1e-12
    assert rep.alpha_star == 0.2


def test_sampled_monotone():
    assert sampled_monotone([1, 2, 3]) == "increasing"
    assert sampled_monotone([3, 2, 1]) == "decreasing"
    assert sampled_monotone([1, 1, 2]) == "neither"
