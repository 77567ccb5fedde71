r"""Solvers for the stationarity problem: inversion of
:math:`{}_0D_t^\alpha y = g`, scalar root finding in the order, tabulation of
:math:`I[\alpha]` and a joint Ritz minimization over coefficients and order.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from fracvar.errors import (
    FracVarError,
    IterationLimit,
    NoBracket,
    NoConvergence,
    OrderOutOfRange,
)
from fracvar.grid import GridFunction
from fracvar.operators import FractionalOrder, as_order, rl_integral
from fracvar.special import rgamma
from fracvar.variational import (
    LagrangianSpec,
    StationarityReport,
    action,
    alpha_condition,
    el_residual_y,
)

log = logging.getLogger(__name__)

MAX_SERIES_TERMS = 200


# {{{ fractional equation


def solve_rl_equation(g: GridFunction, alpha: float | FractionalOrder) -> GridFunction:
    r"""Solve :math:`{}_0D_t^\alpha y = g` with :math:`y(0) = 0`, i.e.
    :math:`y = {}_0I_t^\alpha g`."""
    alpha = as_order(alpha)
    if not 0.0 < alpha < 1.0:
        raise OrderOutOfRange(f"solve_rl_equation needs 0 < alpha < 1, got {alpha}")
    return rl_integral(g, alpha)


def _tail_factor(N: int, alpha: float, t: float) -> float:
    r"""Ratio of the tail :math:`\sum_{p \ge N} |a_p| t^p` to its first term.

    For :math:`p \ge 1` the coefficients are :math:`K \Gamma(p - \alpha) /
    \Gamma(p + 1 + \alpha)`, which telescope:
    :math:`\sum_{p \ge N} a_p = a_N (N + \alpha) / (2 \alpha)`. Together with
    :math:`t^p \le t^N` this also bounds the tail for :math:`t < 1`, where the
    geometric bound :math:`1 / (1 - t)` (term ratios are below :math:`t`) is
    used when it is smaller.
    """
    exact = (N + alpha) / (2.0 * alpha)
    return min(exact, 1.0 / (1.0 - t)) if t < 1.0 else exact


class SeriesValue(NamedTuple):
    value: float
    error_estimate: float
    nterms: int


@dataclass(frozen=True)
class SeriesSolution:
    r"""Truncated power series

    .. math::

        y(t) = \frac{c}{\Gamma(1 + \alpha)} \sum_{p=0}^{P} a_p t^{p + \alpha},
        \qquad a_p = \frac{\Gamma(p - \alpha)}{\Gamma(-\alpha)\,\Gamma(1 + p + \alpha)},

    solving :math:`{}_0D_t^\alpha y = c (1 - t)^\alpha / \Gamma(1 + \alpha)`.
    The coefficients follow from :math:`a_0 = 1 / \Gamma(1 + \alpha)` and
    :math:`a_{p+1} / a_p = (p - \alpha) / (1 + p + \alpha)`.
    """

    c: float
    alpha: float
    truncation: int
    coefficients: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, c: float, alpha: float, truncation: int = MAX_SERIES_TERMS) -> SeriesSolution:
        if not 0.0 < alpha < 1.0:
            raise OrderOutOfRange(f"series needs 0 < alpha < 1, got {alpha}")
        p = np.arange(truncation, dtype=np.float64)
        ratios = (p - alpha) / (1.0 + p + alpha)
        coeffs = np.empty(truncation + 1)
        coeffs[0] = rgamma(1.0 + alpha)
        coeffs[1:] = coeffs[0] * np.cumprod(ratios)
        return cls(float(c), float(alpha), truncation, coeffs)

    @property
    def prefactor(self) -> float:
        return self.c * rgamma(1.0 + self.alpha)

    @property
    def exponents(self) -> np.ndarray:
        return np.arange(self.truncation + 1) + self.alpha

    def tail_bound(self, t: float) -> float:
        """Bound on the omitted terms (see :func:`_tail_factor`)."""
        P = self.truncation
        nxt = abs(self.coefficients[-1]) * (P - self.alpha) / (1.0 + P + self.alpha)
        if t <= 0.0:
            return 0.0
        first = nxt * t ** (P + 1 + self.alpha)
        return abs(self.prefactor) * first * _tail_factor(P + 1, self.alpha, t)

    def __call__(self, t):
        t = np.asarray(t, dtype=np.float64)
        # Horner in t for sum a_p t^p, then the common factor t^alpha
        acc = np.zeros_like(t)
        for a in self.coefficients[::-1]:
            acc = acc * t + a
        return self.prefactor * acc * t**self.alpha


def example2_series(
    c: float, alpha: float | FractionalOrder, t: float, tol: float = 1.0e-14
) -> SeriesValue:
    r"""Evaluate the series solution at one point.

    Terms are added until the next one drops below ``tol * |partial sum|`` or
    :data:`MAX_SERIES_TERMS` terms have been summed. The returned estimate is
    the tail bound of :meth:`SeriesSolution.tail_bound`.

    :raises NoConvergence: if the term cap is reached at ``t = 1``, where the
        terms only decay algebraically.
    """
    alpha = as_order(alpha)
    if not 0.0 < alpha < 1.0:
        raise OrderOutOfRange(f"series needs 0 < alpha < 1, got {alpha}")
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    if not tol > 0.0:
        raise ValueError("tol must be positive")
    if t == 0.0 or c == 0.0:
        return SeriesValue(0.0, 0.0, 1)

    pref = c * rgamma(1.0 + alpha)
    a = rgamma(1.0 + alpha)
    total = a
    tp = 1.0
    for p in range(MAX_SERIES_TERMS):
        a *= (p - alpha) / (1.0 + p + alpha)
        tp *= t
        if abs(a) * tp <= tol * abs(total):
            break
        total += a * tp
    else:
        if t == 1.0:
            raise NoConvergence(
                f"series did not reach tol={tol:g} at t=1 within {MAX_SERIES_TERMS} terms"
            )
        p = MAX_SERIES_TERMS

    # a * tp is the first omitted term, of index N = p + 1
    bound = abs(a) * tp * _tail_factor(p + 1, alpha, t)
    return SeriesValue(pref * total * t**alpha, abs(pref) * bound * t**alpha, p + 1)


# }}}


# {{{ root finding


class RootResult(NamedTuple):
    alpha: float
    value: float
    iterations: int
    bracket: tuple[float, float]


def _safe(condition: Callable[[float], float], x: float) -> float:
    try:
        v = float(condition(x))
    except (FracVarError, ArithmeticError, ValueError):
        return math.nan
    return v


def find_alpha_root(
    condition: Callable[[float], float],
    bracket: tuple[float, float],
    tol: float = 1.0e-12,
    nscan: int = 1000,
) -> RootResult:
    r"""Bisection for :math:`\alpha^*` with ``condition(alpha*) = 0``.

    When the bracket ends do not show a sign change (or cannot be evaluated,
    e.g. on a pole of :math:`\psi`), the bracket is scanned on *nscan* interior
    points and the first sign change is used.

    :raises NoBracket: if no sign change is found.
    """
    lo, hi = map(float, bracket)
    if not lo < hi:
        raise ValueError(f"invalid bracket: {bracket}")

    flo, fhi = _safe(condition, lo), _safe(condition, hi)
    if not (np.isfinite(flo) and np.isfinite(fhi) and flo * fhi <= 0.0):
        xs = np.linspace(lo, hi, nscan + 2)[1:-1]
        fs = np.array([_safe(condition, x) for x in xs])
        ok = np.isfinite(fs)
        xs, fs = xs[ok], fs[ok]
        change = np.nonzero(np.sign(fs[:-1]) * np.sign(fs[1:]) <= 0)[0]
        if change.size == 0:
            raise NoBracket(f"no sign change on a {nscan}-point scan of [{lo}, {hi}]")
        i = change[0]
        lo, hi, flo, fhi = xs[i], xs[i + 1], fs[i], fs[i + 1]

    it = 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        fmid = _safe(condition, mid)
        it += 1
        if fmid == 0.0:
            lo = hi = mid
            flo = fhi = 0.0
            break
        if np.sign(fmid) == np.sign(flo):
            lo, flo = mid, fmid
        else:
            hi, fhi = mid, fmid

    x, fx = (lo, flo) if abs(flo) <= abs(fhi) else (hi, fhi)
    return RootResult(float(x), float(fx), it, (float(bracket[0]), float(bracket[1])))


# }}}


# {{{ scans


Family = Callable[[float], GridFunction]


def alpha_scan(
    y_of_alpha: Family,
    L: LagrangianSpec,
    alpha_grid: Sequence[float],
    exponents: Callable[[float], tuple[float | None, float | None]] | None = None,
    partial_d_exponents: Callable[[float], tuple[float | None, float | None]] | None = None,
    check_boundary: bool = True,
) -> list[dict[str, float]]:
    """Tabulate action, order condition and Euler-Lagrange residual norm of a
    family of paths along *alpha_grid*.

    The rows holding the sampled minimum and maximum of the action carry
    ``argmin = 1`` and ``argmax = 1``.
    """
    rows = []
    for a in alpha_grid:
        a = float(a)
        y = y_of_alpha(a)
        ex = exponents(a) if exponents else (None, None)
        pex = partial_d_exponents(a) if partial_d_exponents else (None, None)
        residual = el_residual_y(y, a, L, pex)
        rows.append({
            "alpha": a,
            "action": action(y, a, L, ex, check_boundary),
            "el_residual_norm": residual.interior_sup_norm(),
            "alpha_condition": alpha_condition(y, a, L, ex),
        })

    values = np.array([r["action"] for r in rows])
    if values.size:
        for r in rows:
            r["argmin"] = r["argmax"] = 0
        rows[int(np.argmin(values))]["argmin"] = 1
        rows[int(np.argmax(values))]["argmax"] = 1
    return rows


# }}}


# {{{ joint minimization


@dataclass(frozen=True)
class RitzProblem:
    r"""Paths :math:`y = y_0 + \sum_k c_k \phi_k` on a fixed grid.

    The offset carries the inhomogeneous boundary values and every basis
    element vanishes where a boundary condition is imposed.
    """

    offset: GridFunction
    basis: tuple[GridFunction, ...]
    bounds: tuple[tuple[float, float], ...]
    alpha_grid: np.ndarray
    edge_exponents: tuple[float | None, float | None] = (None, None)
    """Endpoint profile exponents shared by all paths of the family."""

    def __post_init__(self) -> None:
        if not self.basis:
            raise ValueError("the basis must not be empty")
        if len(self.bounds) != len(self.basis):
            raise ValueError("one coefficient interval per basis element is required")
        for lo, hi in self.bounds:
            if not (np.isfinite(lo) and np.isfinite(hi) and lo <= hi):
                raise ValueError(f"invalid coefficient bounds: {(lo, hi)}")

    def path(self, coeffs: Sequence[float]) -> GridFunction:
        v = self.offset.values.copy()
        for c, phi in zip(coeffs, self.basis):
            v = v + c * phi.values
        return GridFunction(v, self.offset.b, self.edge_exponents)


def _golden(f: Callable[[float], float], lo: float, hi: float, xtol: float) -> tuple[float, float]:
    """Golden-section search for a minimum of *f* on ``[lo, hi]``, also checking
    the interval ends."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while abs(b - a) > xtol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)

    candidates = [(fc, c), (fd, d), (f(lo), lo), (f(hi), hi)]
    fx, x = min(candidates)
    return x, fx


def joint_minimize(
    problem: RitzProblem,
    L: LagrangianSpec,
    max_sweeps: int = 200,
    tol: float = 1.0e-10,
    xtol: float = 1.0e-6,
) -> StationarityReport:
    r"""Minimize :math:`I[y, \alpha]` jointly over the Ritz coefficients and the
    order.

    Each sweep performs a golden-section search on every coefficient in turn and
    a line search in :math:`\alpha` on :attr:`RitzProblem.alpha_grid`, refined
    twice around the best grid point. The search starts from the best corner of
    the coefficient box. The iteration is deterministic.
    """
    alo = float(np.min(problem.alpha_grid))
    ahi = float(np.max(problem.alpha_grid))

    def objective(coeffs, alpha) -> float:
        try:
            return action(problem.path(coeffs), alpha, L)
        except (FracVarError, ArithmeticError):
            return math.inf

    def alpha_search(coeffs) -> tuple[float, float]:
        grid = np.asarray(problem.alpha_grid, dtype=np.float64)
        best = min((objective(coeffs, a), a) for a in grid)
        step = np.min(np.diff(np.sort(grid))) if grid.size > 1 else 0.0
        for _ in range(2):
            if step == 0.0:
                break
            fine = np.linspace(max(alo, best[1] - step), min(ahi, best[1] + step), 21)
            best = min([best] + [(objective(coeffs, a), a) for a in fine])
            step = step / 10.0
        return best[1], best[0]

    corners = [np.array(c) for c in np.array(np.meshgrid(*problem.bounds)).reshape(len(problem.bounds), -1).T]
    a0 = float(problem.alpha_grid[len(problem.alpha_grid) // 2])
    corner_values = [(objective(c, a0), i) for i, c in enumerate(corners)]
    coeffs = corners[min(corner_values)[1]].astype(np.float64)
    alpha, best = alpha_search(coeffs)

    converged = False
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        previous = best
        for k, (lo, hi) in enumerate(problem.bounds):
            def f(x, k=k):
                trial = coeffs.copy()
                trial[k] = x
                return objective(trial, alpha)

            x, fx = _golden(f, lo, hi, xtol)
            if fx <= best:
                coeffs[k], best = x, fx

        a, fa = alpha_search(coeffs)
        if fa <= best:
            alpha, best = a, fa

        log.debug("sweep %d: action %.12e alpha %.6f", sweeps, best, alpha)
        if previous - best <= tol * max(1.0, abs(best)):
            converged = True
            break

    if not converged:
        warnings.warn(
            f"joint_minimize stopped after {max_sweeps} sweeps", IterationLimit, stacklevel=2
        )

    y = problem.path(coeffs)
    residual = el_residual_y(y, alpha, L)
    return StationarityReport(
        action_value=best,
        el_residual=residual,
        el_residual_norm=residual.interior_sup_norm(),
        alpha_condition_value=alpha_condition(y, alpha, L),
        alpha_star=alpha,
        diagnostics={
            "coefficients": coeffs.tolist(),
            "sweeps": sweeps,
            "converged": converged,
            "corner_actions": [v for v, _ in corner_values],
        },
    )


# }}}

# vim: fdm=marker
