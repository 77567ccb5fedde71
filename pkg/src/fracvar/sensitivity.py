r"""Sensitivity of the left Riemann-Liouville derivative to its order.

For :math:`0 < \alpha < 1`,

.. math::

    G(y, \alpha) = \frac{\partial}{\partial\alpha} {}_0D_t^\alpha y
    = \psi(1 - \alpha)\, {}_0D_t^\alpha y - \frac{1}{\Gamma(1 - \alpha)}
    \left[ \frac{y(0) \ln t}{t^\alpha}
        + \int_0^t \frac{\ln(t - \tau)\, y'(\tau)}{(t - \tau)^\alpha} \,\mathrm{d}\tau \right],

which is evaluated with the same interpolant as the derivative itself, so the
discrete :math:`G` is the exact :math:`\alpha`-derivative of the discrete
:math:`{}_0D_t^\alpha y`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from fracvar.errors import DomainError, GridTooCoarse, OrderOutOfRange
from fracvar.grid import GridFunction, abel_sum, derivative
from fracvar.operators import FractionalOrder, _caputo_sum, as_order, rl_left
from fracvar.special import EULER_GAMMA, digamma, rgamma


class Method(enum.Enum):
    KERNEL_FORMULA = "kernel_formula"
    LIMIT_ZERO = "limit_zero"
    LIMIT_ONE = "limit_one"
    FINITE_DIFFERENCE = "finite_difference"


@dataclass(frozen=True)
class SensitivityField:
    """Samples of :math:`G(y, \\alpha)` and how they were obtained."""

    values: GridFunction
    alpha: float
    method: Method
    alternate: GridFunction | None = None
    """A second evaluation reported alongside (see the individual functions)."""


def f1_kernel(t, alpha: float | FractionalOrder):
    r"""The kernel :math:`f_1(t, \alpha) = \frac{\psi(1 - \alpha) - \ln t}{t^\alpha \Gamma(1 - \alpha)}`,
    whose time derivative convolved with :math:`y` gives :math:`G`.
    """
    alpha = as_order(alpha)
    if not 0.0 <= alpha < 1.0:
        raise OrderOutOfRange(f"f1_kernel: alpha must lie in [0, 1), got {alpha}")

    t_arr = np.asarray(t, dtype=np.float64)
    if np.any(t_arr <= 0.0):
        raise DomainError("f1_kernel is defined for t > 0 only")

    value = (digamma(1.0 - alpha) - np.log(t_arr)) * t_arr**-alpha * rgamma(1.0 - alpha)
    return float(value) if np.ndim(t) == 0 else value


def _singular_start(y0: float) -> float:
    return math.copysign(math.inf, y0) if y0 != 0.0 else 0.0


def dalpha_rl(
    y: GridFunction, alpha: float | FractionalOrder, y_at_0: float | None = None
) -> SensitivityField:
    """Order sensitivity :math:`G(y, \\alpha)` for :math:`0 < \\alpha < 1`."""
    alpha = as_order(alpha)
    if not 0.0 < alpha < 1.0:
        raise OrderOutOfRange(
            f"dalpha_rl needs 0 < alpha < 1 (got {alpha}); use the limit functions"
        )

    y0 = float(y.values[0]) if y_at_0 is None else float(y_at_0)
    d = rl_left(y, alpha, y0).values
    conv = _caputo_sum(y, alpha, log=True)

    t = y.t
    with np.errstate(divide="ignore", invalid="ignore"):
        boundary = y0 * np.log(t) * t**-alpha if y0 != 0.0 else 0.0
        g = digamma(1.0 - alpha) * d - rgamma(1.0 - alpha) * (boundary + conv)
    g[0] = _singular_start(y0)

    return SensitivityField(y.with_values(g), alpha, Method.KERNEL_FORMULA)


def _log_difference_quotient(v: np.ndarray, h: float) -> np.ndarray:
    r"""Evaluate :math:`\int_0^{t_i} \frac{v(t_i) - v(u)}{t_i - u} du` with
    :math:`v` piecewise linear; the integrand is bounded since the
    singularity is removable.
    """
    n = v.size - 1
    m = np.arange(1, n + 1, dtype=np.float64)
    ell = np.zeros(n)
    ell[1:] = np.log(m[1:] / m[:-1])

    s = np.diff(v) / h
    i = np.arange(n + 1)
    out = np.zeros(n + 1)
    with np.errstate(divide="ignore"):
        out[1:] = (
            v[1:] * np.log(i[1:])
            - np.convolve(v, ell)[:n]
            - h * np.convolve(s, m * ell)[:n]
            + (v[1:] - v[0])
        )
    return out


def dalpha_at_zero(y: GridFunction, y_at_0: float | None = None) -> SensitivityField:
    r"""Limit of :math:`G` at :math:`\alpha = 0^+`,

    .. math::

        -(\gamma + \ln t) y(t) + \int_0^t \frac{y(t) - y(t - \tau)}{\tau} d\tau.

    The expression :math:`-(\gamma + \ln t) y(0) - \int_0^t (\gamma + \ln \tau)
    y(t - \tau) d\tau` is evaluated as well and stored in
    :attr:`SensitivityField.alternate`; it is not a derivative of the same
    quantity for general :math:`y` and serves as documentation only.
    """
    if not all(y.endpoint_flags):
        raise ValueError("dalpha_at_zero needs finite endpoint samples")

    y0 = float(y.values[0]) if y_at_0 is None else float(y_at_0)
    t, h, v = y.t, y.h, y.values
    with np.errstate(divide="ignore", invalid="ignore"):
        g = -(EULER_GAMMA + np.log(t)) * v + _log_difference_quotient(v, h)
        alt = (
            -(EULER_GAMMA + np.log(t)) * y0
            - EULER_GAMMA * abel_sum(v, 0.0, h)
            - abel_sum(v, 0.0, h, log=True)
        )
    g[0] = _singular_start(y0)
    alt[0] = _singular_start(y0)

    return SensitivityField(
        y.with_values(g), 0.0, Method.LIMIT_ZERO, alternate=y.with_values(alt)
    )


def dalpha_at_one(
    y: GridFunction, y_at_0: float | None = None, y1_at_0: float | None = None
) -> SensitivityField:
    r"""Limit of :math:`G` at :math:`\alpha = 1^-`,

    .. math::

        -\frac{y(0)}{t} - y'(0) \ln t - \gamma y'(t)
            - \int_0^t y''(\tau) \ln(t - \tau) d\tau.

    For :math:`y(0) = 0` the equivalent form
    :math:`-(\gamma + \ln t) y'(t) + \int_0^t \frac{y'(t) - y'(\tau)}{t - \tau} d\tau`,
    which does not need :math:`y''`, is stored in
    :attr:`SensitivityField.alternate`.
    """
    n = y.n_intervals
    if n < 16:
        raise GridTooCoarse(f"dalpha_at_one needs at least 16 intervals, got {n}")

    dy = derivative(y)
    ddy = derivative(dy)
    y0 = float(y.values[0]) if y_at_0 is None else float(y_at_0)
    y1 = float(dy.values[0]) if y1_at_0 is None else float(y1_at_0)

    t, h = y.t, y.h
    with np.errstate(divide="ignore", invalid="ignore"):
        g = (
            -y0 / t
            - y1 * np.log(t)
            - EULER_GAMMA * dy.values
            - abel_sum(ddy.values, 0.0, h, log=True)
        )
    g[0] = -math.copysign(math.inf, y0) if y0 != 0.0 else (
        -math.copysign(math.inf, -y1) if y1 != 0.0 else -EULER_GAMMA * dy.values[0]
    )

    alternate = None
    if y0 == 0.0:
        v = dy.values
        with np.errstate(divide="ignore", invalid="ignore"):
            alt = -(EULER_GAMMA + np.log(t)) * v + _log_difference_quotient(v, h)
        alt[0] = g[0]
        alternate = y.with_values(alt)

    return SensitivityField(y.with_values(g), 1.0, Method.LIMIT_ONE, alternate=alternate)


def expansion_check(t: float, tau: float, eps: float) -> float:
    r"""Defect :math:`\frac{(t - \tau)^\varepsilon}{\Gamma(1 + \varepsilon)}
    - [1 + \varepsilon(\gamma + \ln(t - \tau))]` of the first-order expansion."""
    if not 0.0 < tau < t:
        raise DomainError(f"expansion_check needs 0 < tau < t, got tau={tau}, t={t}")
    if abs(eps) > 0.1:
        raise DomainError(f"expansion_check needs |eps| <= 0.1, got {eps}")

    s = t - tau
    return s**eps * rgamma(1.0 + eps) - (1.0 + eps * (EULER_GAMMA + math.log(s)))
