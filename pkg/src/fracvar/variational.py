r"""Lagrangians, the action and the two stationarity conditions.

For the action

.. math::

    I[y, \alpha] = \int_0^b L(t, y, {}_0D_t^\alpha y, \alpha) \,\mathrm{d}t,

a stationary pair satisfies the Euler-Lagrange equation

.. math::

    \frac{\partial L}{\partial y} + {}_tD_b^\alpha \frac{\partial L}{\partial d} = 0,

and the order condition

.. math::

    \int_0^b \left( \frac{\partial L}{\partial d} G(y, \alpha)
        + \frac{\partial L}{\partial \alpha} \right) \mathrm{d}t = 0,

where :math:`d = {}_0D_t^\alpha y` and :math:`G` is the order sensitivity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from fracvar.errors import BoundaryViolation, StationarityViolation
from fracvar.grid import GridFunction, integrate_singular
from fracvar.operators import FractionalOrder, as_order, rl_left, rl_right
from fracvar.sensitivity import dalpha_at_one, dalpha_at_zero, dalpha_rl
from fracvar.special import gamma_fn

Evaluator = Callable[[np.ndarray, np.ndarray, np.ndarray, float], np.ndarray]
Exponents = tuple[float | None, float | None]


# {{{ lagrangian


def _zero(t, y, d, alpha):
    return np.zeros_like(np.asarray(t, dtype=np.float64))


@dataclass(frozen=True)
class LagrangianSpec:
    r"""A Lagrangian :math:`L(t, y, d, \alpha)` with its analytic partials.

    All evaluators must be stateless and vectorized over the first three
    arguments.
    """

    evaluate: Evaluator
    partial_y: Evaluator = _zero
    partial_d: Evaluator = _zero
    partial_alpha: Evaluator = _zero
    boundary_conditions: tuple[tuple[str, float], ...] = ()
    """Pairs ``(endpoint, value)`` with endpoint ``"left"`` or ``"right"``."""
    alpha_domain: tuple[float, float] = (0.0, 1.0)
    name: str = ""

    def values(self, t, y, d, alpha) -> dict[str, np.ndarray]:
        with np.errstate(all="ignore"):
            return {
                "L": np.asarray(self.evaluate(t, y, d, alpha), dtype=np.float64),
                "y": np.asarray(self.partial_y(t, y, d, alpha), dtype=np.float64),
                "d": np.asarray(self.partial_d(t, y, d, alpha), dtype=np.float64),
                "alpha": np.asarray(self.partial_alpha(t, y, d, alpha), dtype=np.float64),
            }

    def check_partials(
        self,
        rng: np.random.Generator | None = None,
        npoints: int = 64,
        b: float = 1.0,
        step: float = 1.0e-5,
    ) -> float:
        """Largest relative mismatch between the supplied partials and central
        differences of :attr:`evaluate` at random points."""
        if rng is None:
            rng = np.random.default_rng(42)

        lo, hi = self.alpha_domain
        t = rng.uniform(0.05 * b, 0.95 * b, npoints)
        y = rng.choice([-1.0, 1.0], npoints) * rng.uniform(0.5, 2.0, npoints)
        d = rng.uniform(-2.0, 2.0, npoints)
        a = rng.uniform(lo + 0.05 * (hi - lo), hi - 0.05 * (hi - lo), npoints)

        def fd(k):
            args_p = [t, y, d, a]
            args_m = [t, y, d, a]
            args_p[k] = args_p[k] + step
            args_m[k] = args_m[k] - step
            return (self._eval(*args_p) - self._eval(*args_m)) / (2.0 * step)

        worst = 0.0
        for k, partial in ((1, self.partial_y), (2, self.partial_d), (3, self.partial_alpha)):
            exact = np.array([partial(t[i], y[i], d[i], a[i]) for i in range(npoints)],
                             dtype=np.float64)
            approx = fd(k)
            err = np.abs(exact - approx) / np.maximum(1.0, np.abs(exact))
            worst = max(worst, float(np.max(err)))
        return worst

    def _eval(self, t, y, d, a):
        return np.array(
            [self.evaluate(t[i], y[i], d[i], a[i]) for i in range(np.size(t))],
            dtype=np.float64,
        )

    def check_boundary(self, y: GridFunction, rtol: float = 1.0e-8) -> None:
        """:raises BoundaryViolation: if *y* misses a boundary condition."""
        for end, value in self.boundary_conditions:
            sample = y.values[0] if end == "left" else y.values[-1]
            if not abs(sample - value) <= rtol * max(1.0, abs(value)):
                raise BoundaryViolation(
                    f"y({'0' if end == 'left' else 'b'}) = {sample!r}, expected {value!r}"
                )


# }}}


# {{{ report


@dataclass
class Claim:
    """A checked statement: what is asserted, what was measured, and the verdict."""

    name: str
    assertion: str
    measured: Any
    status: str
    """One of ``"pass"``, ``"fail"`` or ``"contested"``."""


@dataclass
class StationarityReport:
    action_value: float
    el_residual: GridFunction | None
    el_residual_norm: float
    alpha_condition_value: float
    alpha_star: float | None = None
    diagnostics: dict[str, Any] = field(default_factory=dict)
    claims: list[Claim] = field(default_factory=list)
    rows: list[dict[str, float]] = field(default_factory=list)
    """Tabulated scans, one mapping per sampled order."""


# }}}


# {{{ evaluation


def _fields(y: GridFunction, alpha: float, L: LagrangianSpec):
    d = rl_left(y, alpha)
    return d, L.values(y.t, y.values, d.values, alpha)


def _as_grid(y: GridFunction, values: np.ndarray) -> GridFunction:
    values = np.array(values, dtype=np.float64)
    if values.ndim == 0:
        values = np.full(y.values.shape, float(values))
    return y.with_values(values)


def action(
    y: GridFunction,
    alpha: float | FractionalOrder,
    L: LagrangianSpec,
    exponents: Exponents = (None, None),
    check_boundary: bool = True,
) -> float:
    """Action :math:`I[y, \\alpha]`.

    :arg exponents: known blow-up exponents of the integrand at the two ends;
        they are estimated from the samples when omitted.
    :raises NonIntegrableError: if an endpoint singularity is too strong.
    """
    alpha = as_order(alpha)
    if check_boundary:
        L.check_boundary(y)

    _, f = _fields(y, alpha, L)
    return integrate_singular(_as_grid(y, f["L"]), exponents)


def beta_action(
    y: GridFunction,
    alpha: float | FractionalOrder,
    beta: float,
    L: LagrangianSpec,
    exponents: Exponents = (None, None),
    check_boundary: bool = True,
) -> float:
    r"""Action weighted by the fractional-integral kernel,
    :math:`\frac{1}{\Gamma(\beta)} \int_0^b (b - t)^{\beta - 1} L \,\mathrm{d}t`.

    For :math:`\beta = 1` this performs exactly the computation of :func:`action`.
    """
    if not beta > 0.0:
        raise ValueError(f"beta must be positive: {beta}")

    alpha = as_order(alpha)
    if check_boundary:
        L.check_boundary(y)

    _, f = _fields(y, alpha, L)
    value = integrate_singular(_as_grid(y, f["L"]), exponents, weights=(0.0, 1.0 - beta))
    return value / gamma_fn(beta)


def el_residual_y(
    y: GridFunction,
    alpha: float | FractionalOrder,
    L: LagrangianSpec,
    partial_d_exponents: Exponents = (None, None),
) -> GridFunction:
    r"""Pointwise residual :math:`\partial L / \partial y + {}_tD_b^\alpha \partial L / \partial d`.

    :arg partial_d_exponents: optional endpoint profile exponents of the field
        :math:`\partial L / \partial d` (see :class:`~fracvar.grid.GridFunction`).
    """
    alpha = as_order(alpha)
    _, f = _fields(y, alpha, L)

    p = GridFunction(_as_grid(y, f["d"]).values, y.b, partial_d_exponents)
    dp = rl_right(p, alpha)
    with np.errstate(invalid="ignore"):
        return y.with_values(f["y"] + dp.values)


def _sensitivity(y: GridFunction, alpha: float) -> GridFunction:
    if alpha == 0.0:
        return dalpha_at_zero(y).values
    if alpha == 1.0:
        return dalpha_at_one(y).values
    return dalpha_rl(y, alpha).values


def alpha_condition(
    y: GridFunction,
    alpha: float | FractionalOrder,
    L: LagrangianSpec,
    exponents: Exponents = (None, None),
) -> float:
    r"""The order condition :math:`\int_0^b (\partial_d L\, G + \partial_\alpha L) dt`."""
    alpha = as_order(alpha)
    _, f = _fields(y, alpha, L)
    g = _sensitivity(y, alpha).values

    with np.errstate(invalid="ignore"):
        integrand = f["d"] * g + f["alpha"]
    return integrate_singular(_as_grid(y, integrand), exponents)


def dI_dalpha(
    y_of_alpha: Callable[[float], GridFunction],
    alpha: float | FractionalOrder,
    L: LagrangianSpec,
    exponents: Exponents = (None, None),
    residual_threshold: float = 1.0e-2,
    partial_d_exponents: Exponents = (None, None),
) -> float:
    r"""Total derivative of :math:`\alpha \mapsto I[y(\cdot, \alpha), \alpha]` along
    a family of stationary paths, i.e. the order condition on that family.

    :raises StationarityViolation: if the path is not stationary, measured by
        the interior sup-norm of the Euler-Lagrange residual relative to the
        size of its two terms.
    """
    alpha = as_order(alpha)
    y = y_of_alpha(alpha)

    residual = el_residual_y(y, alpha, L, partial_d_exponents)
    _, f = _fields(y, alpha, L)
    scale = max(1.0, _as_grid(y, f["y"]).interior_sup_norm())
    norm = residual.interior_sup_norm()
    if norm > residual_threshold * scale:
        raise StationarityViolation(
            f"Euler-Lagrange residual {norm:.3e} exceeds {residual_threshold:g} * {scale:.3g}"
        )

    return alpha_condition(y, alpha, L, exponents)


def int_by_parts_defect(
    f: GridFunction, g: GridFunction, alpha: float | FractionalOrder, atol: float = 1.0e-12
) -> float:
    r"""Defect :math:`\int_0^b g\, {}_0D_t^\alpha f \,dt - \int_0^b f\, {}_tD_b^\alpha g \,dt`.

    :raises BoundaryViolation: unless :math:`f(0) = 0` and :math:`g(b) = 0`.
    """
    alpha = as_order(alpha)
    if abs(f.values[0]) > atol or abs(g.values[-1]) > atol:
        raise BoundaryViolation("integration by parts needs f(0) = 0 and g(b) = 0")

    lhs = g.values * rl_left(f, alpha).values
    rhs = f.values * rl_right(g, alpha).values
    return integrate_singular(f.with_values(lhs)) - integrate_singular(f.with_values(rhs))


def stationarity_report(
    y: GridFunction,
    alpha: float | FractionalOrder,
    L: LagrangianSpec,
    exponents: Exponents = (None, None),
    partial_d_exponents: Exponents = (None, None),
    check_boundary: bool = True,
) -> StationarityReport:
    """Evaluate the action and both stationarity conditions for one pair."""
    alpha = as_order(alpha)
    residual = el_residual_y(y, alpha, L, partial_d_exponents)
    return StationarityReport(
        action_value=action(y, alpha, L, exponents, check_boundary),
        el_residual=residual,
        el_residual_norm=residual.interior_sup_norm(),
        alpha_condition_value=alpha_condition(y, alpha, L, exponents),
        alpha_star=alpha,
    )


def sampled_monotone(values: Sequence[float]) -> str:
    """``"increasing"``, ``"decreasing"`` or ``"neither"`` (strict)."""
    v = np.asarray(values, dtype=np.float64)
    dv = np.diff(v)
    if np.all(dv > 0):
        return "increasing"
    if np.all(dv < 0):
        return "decreasing"
    return "neither"


# }}}

# vim: fdm=marker
