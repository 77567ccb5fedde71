r"""Uniform-grid functions, differentiation and product-integration quadrature.

Every weakly singular integral in the package is reduced to sums of the form

.. math::

    S_i = \int_0^{t_i} \hat f(\tau)\, k(t_i - \tau) \,\mathrm{d}\tau,
    \qquad k(s) = s^{-a} \text{ or } s^{-a} \ln s,

where :math:`\hat f` is the piecewise-linear interpolant of the samples. The
kernel moments on each subinterval are computed once per :math:`(a, n)` and the
sums over nodes are discrete convolutions.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.special import roots_legendre

from fracvar.errors import (
    GridTooCoarse,
    NonIntegrableError,
    SingularEndpointError,
)

_GAUSS_POINTS = 24


# {{{ grid function


@dataclass(frozen=True, eq=False)
class GridFunction:
    r"""Samples of a real function at :math:`t_i = i b / n`, :math:`i = 0, \dots, n`.

    Non-finite values are only allowed at the two endpoints, where they mark a
    recorded singularity. Such samples are excluded from norms and are never
    summed directly by the quadrature routines.
    """

    values: np.ndarray
    """Array of ``n + 1`` samples."""
    b: float = 1.0
    """Right end of the domain :math:`[0, b]`."""
    edge_exponents: tuple[float | None, float | None] = (None, None)
    r"""Optional exponents :math:`\nu` describing the endpoint behaviour
    :math:`y \approx A + B d^\nu`, where :math:`d` is the distance to the
    endpoint. Operators use them to resolve non-smooth endpoint layers.
    """

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 1 or values.size < 3:
            raise ValueError("a GridFunction needs at least 2 intervals")
        if not self.b > 0:
            raise ValueError(f"domain end must be positive: b = {self.b!r}")
        if not np.all(np.isfinite(values[1:-1])):
            raise ValueError("non-finite samples are only allowed at the endpoints")

        values.flags.writeable = False
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "edge_exponents", tuple(self.edge_exponents))

    @classmethod
    def sample(
        cls,
        func: Callable[[np.ndarray], np.ndarray],
        n: int,
        b: float = 1.0,
        edge_exponents: tuple[float | None, float | None] = (None, None),
    ) -> GridFunction:
        """Sample a vectorized callable on the uniform grid with *n* intervals."""
        t = np.linspace(0.0, b, n + 1)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            values = np.asarray(func(t), dtype=np.float64)
        if values.ndim == 0:
            values = np.full_like(t, values)
        return cls(values, b, edge_exponents)

    @property
    def n_intervals(self) -> int:
        return self.values.size - 1

    @property
    def h(self) -> float:
        return self.b / self.n_intervals

    @property
    def t(self) -> np.ndarray:
        return np.linspace(0.0, self.b, self.n_intervals + 1)

    @property
    def endpoint_flags(self) -> tuple[bool, bool]:
        """Whether the samples at :math:`t = 0` and :math:`t = b` are finite."""
        return bool(np.isfinite(self.values[0])), bool(np.isfinite(self.values[-1]))

    def with_values(
        self,
        values: np.ndarray,
        edge_exponents: tuple[float | None, float | None] = (None, None),
    ) -> GridFunction:
        return GridFunction(values, self.b, edge_exponents)

    def reflect(self) -> GridFunction:
        r"""The function :math:`t \mapsto y(b - t)`."""
        return GridFunction(self.values[::-1], self.b, self.edge_exponents[::-1])

    def mask(self, lo: float | None = None, hi: float | None = None) -> np.ndarray:
        t = self.t
        lo = -np.inf if lo is None else lo
        hi = np.inf if hi is None else hi
        tol = 1.0e-12 * self.b
        return (t >= lo - tol) & (t <= hi + tol) & np.isfinite(self.values)

    def sup_norm(self, lo: float | None = None, hi: float | None = None) -> float:
        """Maximum absolute finite sample in ``[lo, hi]``."""
        m = self.mask(lo, hi)
        return float(np.max(np.abs(self.values[m]))) if np.any(m) else 0.0

    def interior_sup_norm(self, fraction: float = 0.05) -> float:
        """Sup-norm excluding *fraction* of the nodes at each end."""
        n = self.n_intervals
        k = int(math.ceil(fraction * n))
        inner = self.values[k : n + 1 - k]
        inner = inner[np.isfinite(inner)]
        return float(np.max(np.abs(inner))) if inner.size else 0.0

    def _binary(self, other, op) -> GridFunction:
        if isinstance(other, GridFunction):
            if other.values.shape != self.values.shape or other.b != self.b:
                raise ValueError("grid mismatch")
            other = other.values
        with np.errstate(invalid="ignore"):
            return GridFunction(op(self.values, other), self.b)

    def __add__(self, other) -> GridFunction:
        return self._binary(other, np.add)

    __radd__ = __add__

    def __sub__(self, other) -> GridFunction:
        return self._binary(other, np.subtract)

    def __rsub__(self, other) -> GridFunction:
        return self._binary(other, lambda x, y: y - x)

    def __mul__(self, other) -> GridFunction:
        return self._binary(other, np.multiply)

    __rmul__ = __mul__

    def __neg__(self) -> GridFunction:
        return GridFunction(-self.values, self.b, self.edge_exponents)

    def __repr__(self) -> str:
        return (
            f"GridFunction(n_intervals={self.n_intervals}, b={self.b}, "
            f"endpoint_flags={self.endpoint_flags})"
        )


# }}}


# {{{ quadrature rules


class RuleKind(enum.Enum):
    TRAPEZOID = "trapezoid"
    PRODUCT_ABEL = "product_abel"
    PRODUCT_LOG = "product_log"


@dataclass(frozen=True)
class QuadratureRule:
    r"""Quadrature of :math:`\int_0^b f(t) K(t) \,\mathrm{d}t`.

    For the product rules :math:`f` is the smooth factor and the kernel is
    :math:`K = d^{-e}` (``product_abel``) or :math:`K = -d^{-e} \ln d`
    (``product_log``), with :math:`d` the distance to :attr:`end`. The trapezoid
    rule has :math:`K \equiv 1`.
    """

    kind: RuleKind = RuleKind.TRAPEZOID
    exponent: float = 0.0
    """Kernel exponent :math:`e < 1`; negative values give a bounded weight."""
    end: str = "right"
    """Endpoint ``"left"`` or ``"right"`` at which the kernel is singular."""

    def __post_init__(self) -> None:
        if not self.exponent < 1.0:
            raise NonIntegrableError(f"kernel exponent must be < 1: {self.exponent}")
        if self.end not in ("left", "right"):
            raise ValueError(f"unknown endpoint: {self.end!r}")

    @classmethod
    def trapezoid(cls) -> QuadratureRule:
        return cls()

    @classmethod
    def product_abel(cls, exponent: float, end: str = "right") -> QuadratureRule:
        return cls(RuleKind.PRODUCT_ABEL, float(exponent), end)

    @classmethod
    def product_log(cls, exponent: float = 0.0, end: str = "right") -> QuadratureRule:
        return cls(RuleKind.PRODUCT_LOG, float(exponent), end)


@lru_cache(maxsize=16)
def _gauss_legendre(npoints: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = roots_legendre(npoints)
    return x, w


@lru_cache(maxsize=256)
def _unit_moments(a: float, n: int, log: bool) -> tuple[np.ndarray, np.ndarray]:
    r"""Moments :math:`P_m = \int_{m-1}^m k(v) dv` and
    :math:`Q_m = \int_{m-1}^m (v - m + 1) k(v) dv` for :math:`m = 1, \dots, n`,
    with :math:`k(v) = v^{-a}` or :math:`v^{-a} \ln v`.

    The first interval is done in closed form; the others are smooth and use
    Gauss-Legendre, which keeps the log moments exact derivatives (in
    :math:`a`) of the power moments.
    """
    p, q = 1.0 - a, 2.0 - a
    P = np.empty(n)
    Q = np.empty(n)
    if log:
        P[0], Q[0] = -1.0 / (p * p), -1.0 / (q * q)
    else:
        P[0], Q[0] = 1.0 / p, 1.0 / q

    if n > 1:
        x, w = _gauss_legendre(_GAUSS_POINTS)
        s = 0.5 * (x + 1.0)
        v = np.arange(1, n, dtype=np.float64)[:, None] + s[None, :]
        k = np.exp(-a * np.log(v))
        if log:
            k = k * np.log(v)
        P[1:] = 0.5 * (k @ w)
        Q[1:] = 0.5 * ((k * s) @ w)

    P.flags.writeable = False
    Q.flags.writeable = False
    return P, Q


def product_weights(
    a: float, n: int, h: float, log: bool = False
) -> tuple[np.ndarray, np.ndarray]:
    r"""Weights of the product-trapezoid rule for :math:`k(s) = s^{-a}[\ln s]`.

    Returns arrays ``(far, near)`` of length *n* such that, for node :math:`i`,

    .. math::

        S_i = \sum_{m=1}^{i} \mathrm{far}_m f_{i-m} + \mathrm{near}_m f_{i-m+1}.
    """
    P, Q = _unit_moments(float(a), int(n), False)
    scale = h ** (1.0 - a)
    if not log:
        return scale * Q, scale * (P - Q)

    Pl, Ql = _unit_moments(float(a), int(n), True)
    lh = math.log(h)
    Pk = Pl + lh * P
    Qk = Ql + lh * Q
    return scale * Qk, scale * (Pk - Qk)


def abel_sum(f: np.ndarray, a: float, h: float, log: bool = False) -> np.ndarray:
    r"""Left product-trapezoid sums :math:`S_i` for all nodes (``S_0 = 0``)."""
    f = np.asarray(f, dtype=np.float64)
    n = f.size - 1
    far, near = product_weights(a, n, h, log=log)

    out = np.zeros(n + 1)
    with np.errstate(invalid="ignore"):
        out[1:] = np.convolve(f, far)[: n] + np.convolve(f[1:], near)[: n]
    return out


def product_sum_at_end(f: np.ndarray, a: float, h: float, log: bool = False) -> float:
    """:func:`abel_sum` evaluated at the last node only (a dot product)."""
    f = np.asarray(f, dtype=np.float64)
    n = f.size - 1
    far, near = product_weights(a, n, h, log=log)
    return float(far @ f[n - 1 :: -1] + near @ f[n:0:-1])


# }}}


# {{{ operations


def derivative(y: GridFunction) -> GridFunction:
    """Second-order finite-difference derivative.

    Central differences are used in the interior and second-order one-sided
    formulas at the ends. Flagged (non-finite) endpoint samples are skipped;
    the derivative there is reported as ``nan``.
    """
    n = y.n_intervals
    if n < 4:
        raise GridTooCoarse(f"derivative needs at least 4 intervals, got {n}")

    finite0, finiteb = y.endpoint_flags
    lo = 0 if finite0 else 1
    hi = n + 1 if finiteb else n

    out = np.full(n + 1, np.nan)
    out[lo:hi] = np.gradient(y.values[lo:hi], y.h, edge_order=2)
    return GridFunction(out, y.b)


def _fill_endpoint(g: np.ndarray, end: str) -> np.ndarray:
    g = np.array(g, dtype=np.float64)
    if end == "left":
        if not np.isfinite(g[0]):
            g[0] = 2.0 * g[1] - g[2]
    elif not np.isfinite(g[-1]):
        g[-1] = 2.0 * g[-2] - g[-3]
    return g


def integrate(y: GridFunction, rule: QuadratureRule | None = None) -> float:
    r"""Integrate :math:`\int_0^b y(t) K(t) \,\mathrm{d}t` for the kernel of *rule*.

    A product rule absorbs a flagged sample of the smooth factor at its
    singular end, which is replaced by linear extrapolation.
    """
    if rule is None:
        rule = QuadratureRule.trapezoid()

    finite = y.endpoint_flags
    if rule.kind is RuleKind.TRAPEZOID:
        if not all(finite):
            raise SingularEndpointError(
                "trapezoid rule cannot integrate a flagged endpoint sample"
            )
        return float(np.trapezoid(y.values, dx=y.h))

    other_end_finite = finite[1] if rule.end == "left" else finite[0]
    if not other_end_finite:
        raise SingularEndpointError(
            f"product rule at the {rule.end} end cannot absorb the opposite endpoint"
        )

    g = _fill_endpoint(y.values, rule.end)
    if rule.end == "left":
        g = g[::-1]

    if rule.kind is RuleKind.PRODUCT_ABEL:
        return product_sum_at_end(g, rule.exponent, y.h)
    return -product_sum_at_end(g, rule.exponent, y.h, log=True)


def estimate_endpoint_exponent(y: GridFunction, end: str) -> float:
    r"""Estimate :math:`e` in :math:`y \sim C d^{-e}` from the two samples
    nearest to the endpoint. Returns 0 when no blow-up is detected.
    """
    v = y.values
    f1, f2 = (v[1], v[2]) if end == "left" else (v[-2], v[-3])
    if f1 == 0.0 or f2 == 0.0 or np.sign(f1) != np.sign(f2):
        return 0.0

    e = math.log(abs(f1) / abs(f2)) / math.log(2.0)
    return max(e, 0.0)


END_LAYER = 16
"""Subintervals next to a singular end on which the smooth factor is
interpolated by a power-log profile instead of linearly."""


def _profile(s: np.ndarray, kappa: float) -> np.ndarray:
    r"""Box-Cox profile :math:`(s^\kappa - 1) / \kappa`, :math:`\ln s` at :math:`\kappa = 0`."""
    if kappa == 0.0:
        return np.log(s)
    return np.expm1(kappa * np.log(s)) / kappa


def _profile_moments(E: float, kappa: float, h: float, k: np.ndarray):
    r"""Exact :math:`\int s^{-E}` and :math:`\int s^{-E} \phi_\kappa(s)` over
    :math:`[(k-1)h, kh]`."""
    p = 1.0 - E
    lo, hi = (k - 1) * h, k * h

    def power(q):
        with np.errstate(divide="ignore", invalid="ignore"):
            return (hi**q - np.where(lo > 0, lo**q, 0.0)) / q

    def power_log(q):
        with np.errstate(divide="ignore", invalid="ignore"):
            F = lambda s: np.where(s > 0, s**q / q * (np.log(s) - 1.0 / q), 0.0)
            return F(hi) - F(lo)

    P0 = power(p)
    if abs(kappa) < 1.0e-3:
        # series of (s^kappa - 1)/kappa in kappa to second order
        P1 = power_log(p)
        if kappa != 0.0:
            P1 = P1 + 0.5 * kappa * _power_log2(p, lo, hi)
        return P0, P1
    return P0, (power(p + kappa) - P0) / kappa


def _power_log2(q: float, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    def F(s):
        with np.errstate(divide="ignore", invalid="ignore"):
            L = np.log(s)
            val = s**q / q * (L * L - 2.0 * L / q + 2.0 / (q * q))
        return np.where(s > 0, val, 0.0)

    return F(hi) - F(lo)


def estimate_profile_exponent(gs: np.ndarray, E: float) -> float:
    r"""Estimate :math:`\kappa` in :math:`g \approx A + B s^\kappa` from the samples
    ``gs`` at :math:`s = h, 2h, 4h`. Falls back to 1 (linear) when the samples
    are not monotone."""
    d1 = gs[1] - gs[0]
    d2 = gs[2] - gs[1]
    if d1 == 0.0 or d2 == 0.0 or np.sign(d1) != np.sign(d2):
        return 1.0
    kappa = float(np.log2(d2 / d1))
    return float(np.clip(kappa, -0.5 * (1.0 - E), 2.0))


def _singular_end_sum(g: np.ndarray, E: float, h: float) -> float:
    r"""Product rule for :math:`\int g(s) s^{-E} ds` where the last sample of *g*
    sits at :math:`s = 0` (it may be non-finite and is never used).

    Away from the end :math:`g` is interpolated linearly; on the last
    :data:`END_LAYER` subintervals by :math:`A + B \phi_\kappa(s)`, where
    :math:`\kappa` is estimated from the samples. This resolves endpoint
    behaviour such as :math:`g \sim A + B s^\kappa` or :math:`A + B \ln s`.
    """
    n = g.size - 1
    K = min(END_LAYER, n // 4)
    far, near = product_weights(E, n, h)

    m = np.arange(K + 1, n + 1)
    total = float(far[m - 1] @ g[n - m] + near[m - 1] @ g[n - m + 1])

    k = np.arange(1, K + 1)
    gs = g[n - k]                       # samples at s = k h
    kappa = estimate_profile_exponent(g[[n - 1, n - 2, n - 4]], E)
    phi = _profile(k * h, kappa)
    slope = np.empty(K)
    slope[1:] = (gs[1:] - gs[:-1]) / (phi[1:] - phi[:-1])
    slope[0] = slope[1]
    intercept = gs - slope * phi

    P0, P1 = _profile_moments(E, kappa, h, k.astype(np.float64))
    return total + float(intercept @ P0 + slope @ P1)


def integrate_singular(
    y: GridFunction,
    exponents: tuple[float | None, float | None] = (None, None),
    weights: tuple[float, float] = (0.0, 0.0),
) -> float:
    r"""Integrate :math:`\int_0^b y(t)\, t^{-w_0} (b - t)^{-w_1} \,\mathrm{d}t` for an
    integrand that may blow up at either endpoint.

    At a singular end the integrand is split as :math:`y = g \cdot d^{-e}` and
    the product rule with exponent :math:`e + w` is applied to the smooth factor
    :math:`g`. Exponents not given are estimated for flagged endpoints (and
    taken as 0 otherwise). When both ends are singular the interval is split at
    the midpoint.

    :arg weights: explicit weight exponents :math:`(w_0, w_1)`, zero by default.
    :raises NonIntegrableError: if a total endpoint exponent is :math:`\ge 1`.
    """
    finite = y.endpoint_flags
    e = list(exponents)
    for k, end in enumerate(("left", "right")):
        if e[k] is None:
            e[k] = 0.0 if finite[k] else estimate_endpoint_exponent(y, end)
        if e[k] + weights[k] >= 1.0:
            raise NonIntegrableError(
                f"integrand behaves like d^(-{e[k] + weights[k]:.3g}) at the {end} end"
            )

    singular = [not finite[k] or e[k] != 0.0 or weights[k] != 0.0 for k in range(2)]
    if not any(singular):
        return integrate(y)

    n, h = y.n_intervals, y.h
    t = y.t
    v = y.values
    with np.errstate(divide="ignore", invalid="ignore"):
        if singular[0] and singular[1]:
            k = n // 2
            if k < 2 or n - k < 2:
                raise GridTooCoarse("need at least 4 intervals to split the domain")
            tl, tr = t[: k + 1], t[k:]
            left = v[: k + 1] * tl ** e[0] * (y.b - tl) ** -weights[1]
            right = v[k:] * (y.b - tr) ** e[1] * tr ** -weights[0]
            return _singular_end_sum(left[::-1], e[0] + weights[0], h) + _singular_end_sum(
                right, e[1] + weights[1], h
            )

        # only one end is singular, the other has e = w = 0
        g = v * (t ** e[0] if singular[0] else (y.b - t) ** e[1])

    if singular[0]:
        return _singular_end_sum(g[::-1], e[0] + weights[0], h)
    return _singular_end_sum(g, e[1] + weights[1], h)


def abel_convolution(y: GridFunction, alpha: float, side: str = "left") -> GridFunction:
    r"""Abel convolution :math:`\int_0^t y(\tau) (t - \tau)^{-\alpha} d\tau` (left)
    or :math:`\int_t^b y(\tau) (\tau - t)^{-\alpha} d\tau` (right).

    Uses the product-trapezoid rule, which is :math:`O(h^2)` for smooth *y*.
    """
    from fracvar.operators import as_order

    alpha = as_order(alpha)
    if not 0.0 <= alpha < 1.0:
        from fracvar.errors import OrderOutOfRange

        raise OrderOutOfRange(f"abel_convolution needs 0 <= alpha < 1: {alpha}")

    if side == "right":
        return abel_convolution(y.reflect(), alpha, "left").reflect()
    if side != "left":
        raise ValueError(f"unknown side: {side!r}")

    return GridFunction(abel_sum(y.values, alpha, y.h), y.b)


# }}}

# vim: fdm=marker
