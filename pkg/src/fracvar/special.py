r"""Gamma, log-gamma and digamma.

:func:`gamma_fn` and :func:`lgamma_fn` wrap the standard library (adding pole
detection); :func:`digamma` is evaluated by upward recurrence to
:math:`x \ge 10` followed by the asymptotic series

.. math::

    \psi(x) \sim \ln x - \frac{1}{2x} - \sum_{k=1}^{7} \frac{B_{2k}}{2k\,x^{2k}},

and by the reflection formula :math:`\psi(1 - x) - \psi(x) = \pi\cot(\pi x)`
for negative arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from fracvar.errors import PoleError

EULER_GAMMA = 0.57721566490153286061
"""Euler's constant :math:`\\gamma = -\\psi(1)`."""

# B_{2k} / (2k) for k = 1..7 (B_2 through B_14)
_ASYMPTOTIC = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)
_RECURRENCE_THRESHOLD = 10.0


@dataclass(frozen=True)
class SpecialFnResult:
    """A special-function value together with a bound on its absolute error."""

    value: float
    abs_error_bound: float


def _check_pole(x: float, name: str) -> None:
    if x <= 0.0 and x == math.floor(x):
        raise PoleError(f"{name} has a pole at x = {x!r}")


def gamma_fn(x: float) -> float:
    """Euler gamma function.

    :raises PoleError: at non-positive integers.
    :raises OverflowError: when the result is not representable.
    """
    x = float(x)
    _check_pole(x, "gamma")
    return math.gamma(x)


def lgamma_fn(x: float) -> float:
    r""":math:`\ln|\Gamma(x)|`."""
    x = float(x)
    _check_pole(x, "lgamma")
    return math.lgamma(x)


def rgamma(x: float) -> float:
    r"""Reciprocal gamma :math:`1 / \Gamma(x)`, which is entire (zero at poles)."""
    x = float(x)
    if x <= 0.0 and x == math.floor(x):
        return 0.0
    return 1.0 / math.gamma(x)


def _digamma_positive(x: float) -> float:
    shift = 0.0
    while x < _RECURRENCE_THRESHOLD:
        shift += 1.0 / x
        x += 1.0

    inv2 = 1.0 / (x * x)
    series = 0.0
    power = inv2
    for coeff in _ASYMPTOTIC:
        series += coeff * power
        power *= inv2

    return math.log(x) - 0.5 / x - series - shift


def _digamma_scalar(x: float) -> float:
    x = float(x)
    _check_pole(x, "digamma")
    if math.isnan(x):
        return math.nan
    if x > 0.0:
        return _digamma_positive(x)

    # reduce the argument of cot to [-1/2, 1/2] before evaluating it
    r = x - round(x)
    return _digamma_positive(1.0 - x) - math.pi / math.tan(math.pi * r)


def digamma(x):
    r"""Digamma function :math:`\psi(x) = \frac{d}{dx} \ln \Gamma(x)`.

    Accepts scalars or arrays; arrays are evaluated elementwise.

    :raises PoleError: at non-positive integers.
    """
    if np.ndim(x) == 0:
        return _digamma_scalar(x)

    x = np.asarray(x, dtype=np.float64)
    return np.vectorize(_digamma_scalar, otypes=[np.float64])(x)


def digamma_result(x: float) -> SpecialFnResult:
    """Digamma with an error bound.

    The bound combines the first omitted asymptotic term (the :math:`B_{16}`
    term at :math:`x \\ge 10`) with rounding in the recurrence and reflection.
    """
    value = _digamma_scalar(x)
    x = float(x)
    xs = max(abs(x), 1.0 - x if x < 0 else x, _RECURRENCE_THRESHOLD)
    truncation = (3617.0 / 510.0) / 16.0 / xs**16
    steps = max(0.0, _RECURRENCE_THRESHOLD - x) + 8.0
    rounding = 4.0 * np.finfo(float).eps * steps * max(1.0, abs(value))
    return SpecialFnResult(value, float(truncation + rounding))
