"""Acceptance criteria, one test each.

Every test records a single ``AC<k> PASS|FAIL`` line with the measured
quantities; the lines are printed in the pytest terminal summary and when
this file is run as a script.
"""

import math

import numpy as np
import pytest

from fracvar.grid import GridFunction
from fracvar.operators import caputo_left, rl_left
from fracvar.scenarios import (
    ex3_path,
    ex4a_closed_form,
    ex4a_reduced_condition,
    primary_constraint_lagrangian,
    run_example,
)
from fracvar.sensitivity import dalpha_at_one, dalpha_at_zero, dalpha_rl
from fracvar.solvers import find_alpha_root
from fracvar.special import digamma
from fracvar.variational import (
    LagrangianSpec,
    action,
    beta_action,
    dI_dalpha,
    int_by_parts_defect,
)

N = 2048
RESULTS: dict[int, str] = {}


def record(k: int, ok: bool, detail: str) -> None:
    line = f"AC{k:<2d} {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[k] = line
    print(line)
    assert ok, line


def sup(y: GridFunction, ref, lo: float, hi: float) -> float:
    m = y.mask(lo, hi)
    return float(np.max(np.abs(y.values[m] - np.asarray(ref)[m])))


def test_ac01_euler_formula():
    errs = []
    for n in (N // 2, N, 2 * N):
        y = GridFunction.sample(lambda t: t**0.7, n)
        ref = math.gamma(1.7) / math.gamma(1.4) * y.t**0.4
        errs.append(sup(rl_left(y, 0.3), ref, 0.05, 1.0))
    rel = errs[1] / (math.gamma(1.7) / math.gamma(1.4))
    halves = errs[0] >= 2 * errs[1] and errs[1] >= 2 * errs[2]
    record(1, rel <= 1e-2 and halves,
           f"sup error {errs[1]:.2e} at n={N}; errors {', '.join(f'{e:.2e}' for e in errs)}"
           f" at n={N // 2},{N},{2 * N}")


def test_ac02_rl_caputo_identity():
    y = GridFunction.sample(lambda t: 1 + t**2, N)
    diff = rl_left(y, 0.5) - caputo_left(y, 0.5)
    m = y.mask(0.1, 1.0)
    ref = 1.0 / (math.gamma(0.5) * y.t[m] ** 0.5)
    worst = float(np.max(np.abs(diff.values[m] / ref - 1.0)))
    record(2, worst <= 1e-4, f"max relative deviation {worst:.2e}")


def test_ac03_limit_alpha_one():
    y = GridFunction.sample(np.sin, N)
    d = [sup(rl_left(y, a), np.cos(y.t), 0.05, 1.0) for a in (0.9, 0.95, 0.99)]
    ok = d[0] > d[1] > d[2] and d[2] < 0.05
    record(3, ok, "sup distances " + ", ".join(f"{v:.4f}" for v in d) + " at alpha 0.9, 0.95, 0.99")


def test_ac04_sensitivity_kernel():
    y = GridFunction.sample(lambda t: t**2, N)
    eps, worst = 1e-4, 0.0
    for a in (0.2, 0.5, 0.8):
        fd = (rl_left(y, a + eps).values - rl_left(y, a - eps).values) / (2 * eps)
        worst = max(worst, sup(dalpha_rl(y, a).values, fd, 0.1, 1.0))
    record(4, worst <= 1e-3, f"max sup-norm deviation {worst:.2e}")


def test_ac05_limit_formulas():
    y = GridFunction.sample(lambda t: t**2, N)
    eps = 1e-4
    fd0 = (rl_left(y, eps).values - rl_left(y, 0.0).values) / eps
    fd1 = (rl_left(y, 1.0).values - rl_left(y, 1.0 - eps).values) / eps
    g1 = dalpha_at_one(y, 0.0, 0.0)
    e0 = sup(dalpha_at_zero(y).values, fd0, 0.1, 1.0)
    e1 = sup(g1.values, fd1, 0.1, 1.0)
    e1r = sup(g1.alternate, fd1, 0.1, 1.0)
    ok = max(e0, e1, e1r) <= 5e-3
    record(5, ok, f"alpha=0+ {e0:.2e}; alpha=1- {e1:.2e} (reduced form {e1r:.2e})")


def test_ac06_integration_by_parts():
    defects = []
    for n in (N // 2, N):
        f = GridFunction.sample(lambda t: t * (1 - t), n)
        g = GridFunction.sample(lambda t: 1 - t, n)
        defects.append(abs(int_by_parts_defect(f, g, 0.4)))
    ok = defects[1] <= 1e-3 and defects[1] < defects[0]
    record(6, ok, f"defect {defects[1]:.2e} at n={N} ({defects[0]:.2e} at n={N // 2})")


def test_ac07_example3():
    rep = run_example("ex3_primary_constraint", N)
    rows = rep.rows
    rel = max(abs(r["action"] * 2 * (1 - 2 * r["alpha"]) - 1.0) for r in rows)
    values = [r["action"] for r in rows]
    ok = (
        [r["alpha"] for r in rows] == pytest.approx([0.0, 0.1, 0.2, 0.3, 0.4])
        and rel <= 1e-2
        and abs(values[0] - 0.5) <= 5e-3
        and all(np.diff(values) > 0)
        and int(np.argmin(values)) == 0
        and int(np.argmax(values)) == len(values) - 1
    )
    record(7, ok, "actions " + ", ".join(f"{v:.6f}" for v in values) + f"; max rel error {rel:.1e}")


def test_ac08_example2():
    rep = run_example("ex2_constant_force", N)
    claims = {c.name: c for c in rep.claims}
    agree = max(claims["series_vs_quadrature"].measured.values())
    resid = max(claims["displayed_path_solves_tD_D_eq_c"].measured.values())
    trend = claims["I_increasing"].measured
    ok = agree <= 1e-3 and resid <= 5e-2 and trend == "increasing"
    record(8, ok, f"series/quadrature {agree:.1e}; EL residual {resid:.1e}; I[alpha] {trend}")


def test_ac09_example4a():
    alphas = np.linspace(0.02, 0.48, 20)
    values = [ex4a_reduced_condition(a) for a in alphas]
    closed = max(abs(v / ex4a_closed_form(a) - 1) for v, a in zip(values, alphas))
    ok = min(values) > 0 and closed < 1e-6
    record(9, ok, f"min condition {min(values):.4f} over 20 orders; closed form agreement {closed:.1e}")


def test_ac10_example4b():
    displayed = find_alpha_root(lambda a: digamma(1 - a) + 1, (0.0, 0.9))
    reduced = find_alpha_root(lambda a: digamma(a - 1) - 1, (0.0, 1.0))
    rep = run_example("ex4b_log", 256)
    flagged = rep.claims[0].status == "contested"
    ok = abs(displayed.value) <= 1e-10 and abs(reduced.alpha - 0.604) <= 1e-3 and flagged
    record(10, ok, f"psi(1-a)+1 root {displayed.alpha:.8f} (|cond| {abs(displayed.value):.1e});"
                   f" psi(a-1)=1 root {reduced.alpha:.6f}; discrepancy flagged: {flagged}")


def test_ac11_total_derivative():
    L = primary_constraint_lagrangian(1.0)
    worst, delta = 0.0, 1e-3

    def I(a):
        return action(ex3_path(a, 1.0, N), a, L, (a, 2 * a))

    for a in (0.1, 0.2, 0.3):
        fd = (I(a + delta) - I(a - delta)) / (2 * delta)
        got = dI_dalpha(lambda s: ex3_path(s, 1.0, N), a, L, (a, 2 * a))
        worst = max(worst, abs(got / fd - 1))
    record(11, worst <= 2e-2, f"max relative deviation {worst:.2e}")


def test_ac12_beta_action():
    L = primary_constraint_lagrangian(1.0)
    y = ex3_path(0.25, 1.0, N)
    plain = action(y, 0.25, L, (0.25, 0.5))
    same = abs(beta_action(y, 0.25, 1.0, L, (0.25, 0.5)) / plain - 1)
    unit = LagrangianSpec(evaluate=lambda t, y, d, a: np.ones_like(np.asarray(t, float)))
    one = GridFunction.sample(lambda t: t, N)
    dev = max(abs(beta_action(one, 0.5, b, unit) - 1 / math.gamma(b + 1)) for b in (0.75, 1.5))
    record(12, same <= 1e-12 and dev <= 1e-6, f"beta=1 deviation {same:.1e}; unit Lagrangian {dev:.1e}")


def test_ac13_joint_minimization():
    rep = run_example("ex1_regularized", N)
    a = rep.alpha_star
    record(13, abs(a - 0.3) <= 0.02,
           f"alpha* {a:.4f} (target 0.3), action {rep.action_value:.4f} vs "
           f"{rep.diagnostics['action_at_asserted_minimizer']:.4f} at (t^0.7, 0.3)")


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_ac"):
            try:
                fn()
            except AssertionError:
                pass
    for k in sorted(RESULTS):
        print(RESULTS[k])
