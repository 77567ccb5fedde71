r"""Riemann-Liouville and Caputo derivatives, the fractional integral and the
power-law (Euler) formula.

Left derivatives are evaluated in Caputo form,

.. math::

    {}_0D_t^\alpha y = \frac{1}{\Gamma(1 - \alpha)} \left[
        \frac{y(0)}{t^\alpha} + \int_0^t \frac{y'(\tau)}{(t - \tau)^\alpha} \,\mathrm{d}\tau
    \right],

with the product-trapezoid rule applied to the sampled derivative. Right
operators are obtained by reflecting :math:`t \mapsto b - t`.

Paths that behave like :math:`A + B d^\nu` next to an endpoint (recorded in
:attr:`~fracvar.grid.GridFunction.edge_exponents`) are interpolated with that
profile on the :data:`EDGE_LAYER` subintervals closest to the endpoint, which
keeps the accuracy of the convolution when :math:`y'` is unbounded there.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad
from scipy.special import roots_jacobi

from fracvar.errors import (
    NotRepresentable,
    OrderOutOfRange,
    SingularEndpointError,
)
from fracvar.grid import (
    GridFunction,
    _gauss_legendre,
    abel_sum,
    derivative,
    product_weights,
)
from fracvar.special import gamma_fn, rgamma

EDGE_LAYER = 32
"""Number of subintervals next to an endpoint that use the power-law profile."""


# {{{ types


@dataclass(frozen=True)
class FractionalOrder:
    r"""Order :math:`\alpha \in [0, \alpha_0]` with :math:`\alpha_0 \le 1`."""

    alpha: float
    domain_max: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.domain_max <= 1.0:
            raise OrderOutOfRange(f"domain_max must lie in [0, 1]: {self.domain_max}")
        if not 0.0 <= self.alpha <= self.domain_max:
            raise OrderOutOfRange(
                f"alpha = {self.alpha} outside the admissible set [0, {self.domain_max}]"
            )

    def __float__(self) -> float:
        return float(self.alpha)


def as_order(alpha: float | FractionalOrder) -> float:
    return float(alpha.alpha if isinstance(alpha, FractionalOrder) else alpha)


@dataclass(frozen=True)
class PowerPath:
    r"""Exact path :math:`C t^\nu` (``side="left"``) or :math:`C (b - t)^\nu`
    (``side="right"``)."""

    coefficient: float
    exponent: float
    side: str = "left"
    b: float = 1.0

    def __post_init__(self) -> None:
        if not self.exponent > -1.0:
            raise ValueError(f"exponent must be > -1 to be integrable: {self.exponent}")
        if self.side not in ("left", "right"):
            raise ValueError(f"unknown side: {self.side!r}")

    def distance(self, t):
        t = np.asarray(t, dtype=np.float64)
        return t if self.side == "left" else self.b - t

    def __call__(self, t):
        d = self.distance(t)
        if self.coefficient == 0.0:
            return np.zeros_like(d)
        with np.errstate(divide="ignore"):
            return self.coefficient * d**self.exponent

    def sample(self, n: int) -> GridFunction:
        nu = self.exponent
        smooth = nu >= 0 and nu == round(nu)
        edge = None if smooth or self.coefficient == 0.0 else nu
        exps = (edge, None) if self.side == "left" else (None, edge)
        return GridFunction.sample(self, n, self.b, exps)


# }}}


# {{{ interpolation weights


def l12_weights(
    a: float, n: int, h: float, log: bool = False
) -> tuple[np.ndarray, np.ndarray]:
    r"""Weights for the derivative of the piecewise-quadratic interpolant.

    On :math:`[t_j, t_{j+1}]` the interpolant through :math:`t_{j-1}, t_j, t_{j+1}`
    has derivative :math:`s_j + e_j (\tau - t_{j+1/2}) / h` with chord slope
    :math:`s_j` and :math:`e_j = (y_{j+1} - 2 y_j + y_{j-1}) / h`. Returns ``(A, B)``
    with :math:`S_i = \sum_{j < i} s_j A_{i-j} + e_j B_{i-j}`.
    """
    far, near = product_weights(a, n, h, log=log)
    whole = far + near
    return whole, 0.5 * whole - far


def _interval_data(v: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray]:
    with np.errstate(invalid="ignore"):
        s = np.diff(v) / h
        e = np.zeros_like(s)
        e[1:] = np.diff(s)
    return s, e


# }}}


# {{{ edge-layer correction


def _is_profile(nu: float | None) -> bool:
    return nu is not None and not (nu >= 0.0 and nu == round(nu))


def _layer_size(n: int) -> int:
    return min(EDGE_LAYER, n // 4)


@lru_cache(maxsize=64)
def _left_edge_moments(
    n: int, b: float, a: float, log: bool, nu: float, nlayer: int
) -> np.ndarray:
    r"""Moments :math:`\int_{t_j}^{t_{j+1}} \phi'(\tau) k(t_i - \tau) d\tau` for the
    first *nlayer* subintervals, with :math:`\phi = (\tau / b)^\nu`.

    Returns an array of shape ``(nlayer, n + 1)`` (zero for :math:`i \le j`).
    """
    h = b / n
    t = np.linspace(0.0, b, n + 1)
    out = np.zeros((nlayer, n + 1))
    scale = nu * b**-nu
    xg, wg = _gauss_legendre(24)
    xj, wj = roots_jacobi(24, 0.0, nu - 1.0)
    weight = "alg-logb" if log else "alg"

    for j in range(nlayer):
        lo, hi = t[j], t[j + 1]
        singular = j == 0 and nu < 1.0

        # adjacent node: the kernel is singular at hi, phi' (for j = 0) at lo
        if singular:
            val, _ = quad(lambda x: scale, lo, hi, weight=weight,
                          wvar=(nu - 1.0, -a), epsabs=0.0, epsrel=1.0e-13, limit=200)
        else:
            val, _ = quad(lambda x: scale * x ** (nu - 1.0), lo, hi, weight=weight,
                          wvar=(0.0, -a), epsabs=0.0, epsrel=1.0e-13, limit=200)
        out[j, j + 1] = val

        ti = t[j + 2 :, None]
        if ti.size == 0:
            continue
        if singular:
            tau = 0.5 * h * (1.0 + xj)
            out[j, j + 2 :] = scale * (0.5 * h) ** nu * (_kernel(ti - tau, a, log) @ wj)
        else:
            tau = lo + 0.5 * h * (1.0 + xg)
            phip = scale * tau ** (nu - 1.0)
            out[j, j + 2 :] = 0.5 * h * (_kernel(ti - tau, a, log) @ (wg * phip))

    out.flags.writeable = False
    return out


@lru_cache(maxsize=64)
def _right_edge_moments(
    n: int, b: float, a: float, log: bool, nu: float, nlayer: int
) -> np.ndarray:
    r"""Like :func:`_left_edge_moments` for the last *nlayer* subintervals and
    :math:`\phi = ((b - \tau) / b)^\nu`; row ``k`` is subinterval ``n - nlayer + k``.

    On the subinterval touching :math:`b` both factors are singular at :math:`b`
    and the moment exists only for :math:`\nu > a` (otherwise it is ``nan``).
    """
    h = b / n
    t = np.linspace(0.0, b, n + 1)
    out = np.zeros((nlayer, n + 1))
    scale = -nu * b**-nu
    xg, wg = _gauss_legendre(24)
    weight = "alg-logb" if log else "alg"

    for k, j in enumerate(range(n - nlayer, n)):
        lo, hi = t[j], t[j + 1]
        if j == n - 1:
            val = np.nan
            if nu > a:
                val, _ = quad(lambda x: scale, lo, hi, weight=weight,
                              wvar=(0.0, nu - 1.0 - a), epsabs=0.0, epsrel=1.0e-13,
                              limit=200)
            out[k, n] = val
            continue

        val, _ = quad(lambda x: scale * (b - x) ** (nu - 1.0), lo, hi, weight=weight,
                      wvar=(0.0, -a), epsabs=0.0, epsrel=1.0e-13, limit=200)
        out[k, j + 1] = val

        ti = t[j + 2 :, None]
        tau = lo + 0.5 * h * (1.0 + xg)
        phip = scale * (b - tau) ** (nu - 1.0)
        out[k, j + 2 :] = 0.5 * h * (_kernel(ti - tau, a, log) @ (wg * phip))

    out.flags.writeable = False
    return out


def _kernel(s: np.ndarray, a: float, log: bool) -> np.ndarray:
    k = np.exp(-a * np.log(s))
    return k * np.log(s) if log else k


def _replace_layer(
    out: np.ndarray,
    v: np.ndarray,
    s: np.ndarray,
    e: np.ndarray,
    A: np.ndarray,
    B: np.ndarray,
    intervals: range,
    phi: np.ndarray,
    moments: np.ndarray,
) -> None:
    """Swap the interpolant contribution of each layer subinterval for the
    power-law profile contribution, in place."""
    n = v.size - 1
    for k, j in enumerate(intervals):
        dphi = phi[k + 1] - phi[k]
        with np.errstate(invalid="ignore"):
            slope = (v[j + 1] - v[j]) / dphi
        if not np.isfinite(slope):
            continue
        m = np.arange(1, n - j + 1)
        out[j + 1 :] += slope * moments[k, j + 1 :] - (
            s[j] * A[m - 1] + e[j] * B[m - 1]
        )


# }}}


# {{{ core convolution


def _caputo_sum(y: GridFunction, a: float, log: bool = False) -> np.ndarray:
    r"""Left sums :math:`\int_0^{t_i} \hat y'(\tau) k(t_i - \tau) d\tau`."""
    finite0, finiteb = y.endpoint_flags
    if not finite0:
        raise SingularEndpointError(
            "left operators need a finite y(0); use power_law_deriv for singular powers"
        )

    n, h, b = y.n_intervals, y.h, y.b
    v = y.values
    s, e = _interval_data(v, h)
    s[~np.isfinite(s)] = 0.0
    e[~np.isfinite(e)] = 0.0

    A, B = l12_weights(a, n, h, log=log)
    out = np.zeros(n + 1)
    out[1:] = np.convolve(s, A)[:n] + np.convolve(e, B)[:n]

    nu_left, nu_right = y.edge_exponents
    nlayer = _layer_size(n)
    if _is_profile(nu_left):
        phi = (y.t[: nlayer + 1] / b) ** nu_left
        moments = _left_edge_moments(n, b, a, log, float(nu_left), nlayer)
        _replace_layer(out, v, s, e, A, B, range(nlayer), phi, moments)

    if _is_profile(nu_right):
        with np.errstate(divide="ignore"):
            phi = ((b - y.t[n - nlayer :]) / b) ** nu_right
        moments = _right_edge_moments(n, b, a, log, float(nu_right), nlayer)
        _replace_layer(out, v, s, e, A, B, range(n - nlayer, n), phi, moments)

    if not finiteb:
        out[-1] = np.nan
    return out


def boundary_power(t: np.ndarray, alpha: float) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return t**-alpha


# }}}


# {{{ operators


def _check_order(alpha: float, name: str) -> float:
    alpha = as_order(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise OrderOutOfRange(f"{name}: alpha must lie in [0, 1], got {alpha}")
    return alpha


def caputo_left(y: GridFunction, alpha: float | FractionalOrder) -> GridFunction:
    r"""Left Caputo derivative :math:`{}^C_0D_t^\alpha y`."""
    alpha = _check_order(alpha, "caputo_left")
    if alpha == 0.0:
        return y.with_values(y.values - y.values[0])
    if alpha == 1.0:
        return derivative(y)

    values = _caputo_sum(y, alpha) * rgamma(1.0 - alpha)
    return y.with_values(values)


def caputo_right(y: GridFunction, alpha: float | FractionalOrder) -> GridFunction:
    r"""Right Caputo derivative :math:`{}^C_tD_b^\alpha y`."""
    return caputo_left(y.reflect(), alpha).reflect()


def rl_left(
    y: GridFunction, alpha: float | FractionalOrder, y_at_0: float | None = None
) -> GridFunction:
    r"""Left Riemann-Liouville derivative :math:`{}_0D_t^\alpha y`.

    The boundary term :math:`y(0) / (\Gamma(1 - \alpha) t^\alpha)` is added
    analytically; the sample at :math:`t = 0` is flagged (infinite) when
    :math:`y(0) \ne 0`. ``alpha = 1`` returns the classical derivative.

    :arg y_at_0: value of :math:`y(0)`, taken from the samples when omitted.
    """
    alpha = _check_order(alpha, "rl_left")
    if alpha == 0.0:
        return y.with_values(y.values, y.edge_exponents)
    if alpha == 1.0:
        return derivative(y)

    y0 = float(y.values[0]) if y_at_0 is None else float(y_at_0)
    values = caputo_left(y, alpha).values.copy()
    if y0 != 0.0:
        values += y0 * boundary_power(y.t, alpha) * rgamma(1.0 - alpha)
    return y.with_values(values)


def rl_right(
    y: GridFunction, alpha: float | FractionalOrder, y_at_b: float | None = None
) -> GridFunction:
    r"""Right Riemann-Liouville derivative :math:`{}_tD_b^\alpha y`
    (classical limit :math:`-y'` at ``alpha = 1``)."""
    alpha = _check_order(alpha, "rl_right")
    if alpha == 1.0:
        return -derivative(y)
    return rl_left(y.reflect(), alpha, y_at_b).reflect()


def rl_integral(y: GridFunction, alpha: float | FractionalOrder) -> GridFunction:
    r"""Left fractional integral
    :math:`{}_0I_t^\alpha y = \frac{1}{\Gamma(\alpha)} \int_0^t (t - \tau)^{\alpha - 1} y(\tau) d\tau`.
    """
    alpha = as_order(alpha)
    if not 0.0 < alpha <= 1.0:
        raise OrderOutOfRange(f"rl_integral: alpha must lie in (0, 1], got {alpha}")
    if not y.endpoint_flags[0]:
        raise SingularEndpointError("rl_integral needs a finite sample at t = 0")

    values = abel_sum(y.values, 1.0 - alpha, y.h) / gamma_fn(alpha)
    if not y.endpoint_flags[1]:
        values[-1] = np.nan
    return y.with_values(values)


def power_law_deriv(p: PowerPath, alpha: float | FractionalOrder) -> PowerPath:
    r"""Exact Euler formula
    :math:`{}_0D_t^\alpha (C t^\nu) = C \frac{\Gamma(\nu + 1)}{\Gamma(\nu + 1 - \alpha)} t^{\nu - \alpha}`
    (mirrored for right paths under the right derivative).

    :raises NotRepresentable: if the result is not an integrable power.
    """
    alpha = _check_order(alpha, "power_law_deriv")
    if alpha == 0.0:
        return p

    nu = p.exponent
    shifted = nu + 1.0 - alpha
    # t^(alpha - 1) built in floating point lands within rounding of the pole
    if abs(shifted - round(shifted)) <= 8 * np.finfo(float).eps and round(shifted) <= 0:
        shifted = float(round(shifted))
    factor = gamma_fn(nu + 1.0) * rgamma(shifted)
    if factor == 0.0 or p.coefficient == 0.0:
        return PowerPath(0.0, 0.0, p.side, p.b)
    if not nu - alpha > -1.0:
        raise NotRepresentable(
            f"derivative t^{nu - alpha:g} is not an integrable power path"
        )
    return PowerPath(p.coefficient * factor, nu - alpha, p.side, p.b)


def gl_check(y: GridFunction, alpha: float | FractionalOrder) -> GridFunction:
    r"""Grünwald-Letnikov approximation
    :math:`h^{-\alpha} \sum_k (-1)^k \binom{\alpha}{k} y(t - k h)`, first order.
    """
    alpha = as_order(alpha)
    if not 0.0 < alpha < 1.0:
        raise OrderOutOfRange(f"gl_check: alpha must lie in (0, 1), got {alpha}")
    if not y.endpoint_flags[0]:
        raise SingularEndpointError("gl_check needs a finite sample at t = 0")

    n = y.n_intervals
    k = np.arange(1, n + 1)
    w = np.empty(n + 1)
    w[0] = 1.0
    w[1:] = np.cumprod(1.0 - (alpha + 1.0) / k)

    with np.errstate(invalid="ignore"):
        values = np.convolve(y.values, w)[: n + 1] * y.h**-alpha
    return y.with_values(values)


# }}}

# vim: fdm=marker
