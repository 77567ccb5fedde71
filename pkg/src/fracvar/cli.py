"""Command-line front end: ``fracvar <command> [flags]``.

Tabular output is CSV (17 significant digits, LF line endings); structured
reports are JSON. Exit status is 0 on success, 1 on a numeric failure and 2
on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, fields
from typing import Any, Callable

import numpy as np

from fracvar.errors import (
    FracVarError,
    OrderOutOfRange,
    UsageError,
    ValidityRegionError,
)
from fracvar.grid import GridFunction
from fracvar.operators import PowerPath, rl_integral, rl_left
from fracvar.scenarios import (
    SCENARIOS,
    ExampleScenario,
    constant_force_lagrangian,
    ex2_path,
    ex3_path,
    ex4_path,
    ex4a_reduced_condition,
    ex4b_displayed_condition,
    ex4b_reduced_condition,
    linear_d_lagrangian,
    primary_constraint_lagrangian,
    quadratic_lagrangian,
    run_example,
)
from fracvar.sensitivity import dalpha_rl
from fracvar.solvers import alpha_scan, find_alpha_root
from fracvar.special import gamma_fn
from fracvar.variational import action, beta_action, el_residual_y

COMMANDS = (
    "frac-deriv", "frac-int", "sensitivity", "action", "el-residual",
    "alpha-scan", "root", "example", "sweep",
)

ALIASES = {
    "ex1": "ex1_inertial",
    "ex1r": "ex1_regularized",
    "ex2": "ex2_constant_force",
    "ex3": "ex3_primary_constraint",
    "ex4a": "ex4a_quadratic",
    "ex4b": "ex4b_log",
    "beta": "beta_remark",
}

ROOT_IDS = ("ex4b", "ex4b_reduced", "ex4a")
SCAN_COLUMNS = ("alpha", "action", "el_residual_norm", "alpha_condition")
UNIFORM_RTOL = 1.0e-9


@dataclass(frozen=True)
class RunConfig:
    command: str
    alpha: float | None = None
    alpha0: float | None = None
    beta: float | None = None
    c: float = 1.0
    d: float = 1.0
    n_intervals: int = 1024
    grid: tuple[float, ...] | None = None
    tol: float = 1.0e-12
    id: str | None = None
    input_path: str | None = None
    output_path: str | None = None
    format: str = "csv"


# {{{ parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_grid(spec: str) -> tuple[float, ...]:
    """Parse ``start:stop:step`` into an inclusive, evenly spaced grid."""
    try:
        start, stop, step = (float(x) for x in spec.split(":"))
    except ValueError:
        raise UsageError(f"--grid expects start:stop:step, got {spec!r}") from None
    if not step > 0 or stop < start:
        raise UsageError(f"--grid needs step > 0 and stop >= start, got {spec!r}")
    count = int(math.floor((stop - start) / step + 1.0e-9)) + 1
    return tuple(round(start + k * step, 12) for k in range(count))


def _build_parser() -> _Parser:
    p = _Parser(prog="fracvar", description="Order-variable fractional variational toolkit.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--alpha", type=float)
    p.add_argument("--alpha0", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--d", type=float, default=1.0)
    p.add_argument("--n", type=int, default=1024, dest="n_intervals")
    p.add_argument("--grid", type=str)
    p.add_argument("--tol", type=float, default=1.0e-12)
    p.add_argument("--id", type=str)
    p.add_argument("--in", type=str, dest="input_path")
    p.add_argument("--out", type=str, dest="output_path")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    return p


def parse_args(argv: list[str]) -> RunConfig:
    """Validate *argv* into a :class:`RunConfig`.

    :raises UsageError: on unknown flags, missing or out-of-range parameters.
    """
    ns = _build_parser().parse_args(argv)
    cfg = RunConfig(
        command=ns.command,
        alpha=ns.alpha,
        alpha0=ns.alpha0,
        beta=ns.beta,
        c=ns.c,
        d=ns.d,
        n_intervals=ns.n_intervals,
        grid=parse_grid(ns.grid) if ns.grid is not None else None,
        tol=ns.tol,
        id=ns.id,
        input_path=ns.input_path,
        output_path=ns.output_path,
        format=ns.format,
    )

    if cfg.alpha is not None and not 0.0 <= cfg.alpha <= 1.0:
        raise UsageError(f"--alpha must lie in [0, 1], got {cfg.alpha}")
    if cfg.beta is not None and not cfg.beta > 0.0:
        raise UsageError(f"--beta must be positive, got {cfg.beta}")
    if cfg.n_intervals < 16:
        raise UsageError(f"--n must be at least 16, got {cfg.n_intervals}")
    if not cfg.tol > 0.0:
        raise UsageError(f"--tol must be positive, got {cfg.tol}")
    if cfg.command in ("frac-deriv", "frac-int", "sensitivity") and cfg.input_path is None:
        raise UsageError(f"{cfg.command} needs --in with a sampled function (columns t,y)")
    if cfg.command in ("frac-deriv", "frac-int", "sensitivity", "action", "el-residual") \
            and cfg.alpha is None:
        raise UsageError(f"{cfg.command} needs --alpha")
    if cfg.command == "example" and cfg.id is None:
        raise UsageError("example needs --id")
    if cfg.command == "root" and cfg.id is not None and cfg.id not in ROOT_IDS:
        raise UsageError(f"root --id must be one of {ROOT_IDS}")
    if cfg.id is not None and cfg.command not in ("root",):
        _scenario_id(cfg.id)
    return cfg


def _scenario_id(name: str) -> str:
    sid = ALIASES.get(name, name)
    if sid not in SCENARIOS:
        raise UsageError(f"unknown --id {name!r}; expected one of {sorted(ALIASES)}")
    return sid


# }}}


# {{{ io


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if x is None:
        return ""
    return format(float(x), ".17g")


def write_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def grid_to_csv(y: GridFunction, column: str = "y") -> str:
    return write_csv(("t", column), zip(y.t, y.values))


def read_grid_csv(path: str) -> GridFunction:
    """Read a sampled function with columns ``t,y`` on a uniform grid starting at 0."""
    with open(path, newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None or [h.strip() for h in header[:2]] != ["t", "y"]:
            raise UsageError(f"{path}: expected a header row starting with t,y")
        try:
            data = np.array([[float(r[0]), float(r[1])] for r in reader if r], dtype=np.float64)
        except (ValueError, IndexError):
            raise UsageError(f"{path}: malformed numeric row") from None

    if data.shape[0] < 17:
        raise UsageError(f"{path}: need at least 17 samples (16 intervals)")
    t, y = data[:, 0], data[:, 1]
    if t[0] != 0.0:
        raise UsageError(f"{path}: the grid must start at t = 0")
    dt = np.diff(t)
    h = (t[-1] - t[0]) / (len(t) - 1)
    if not h > 0 or np.max(np.abs(dt - h)) > UNIFORM_RTOL * h:
        raise UsageError(f"{path}: samples are not on a uniform grid")
    return GridFunction(y, float(t[-1]))


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, GridFunction):
        return {"b": x.b, "values": _jsonable(x.values)}
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    if x is None or isinstance(x, str):
        return x
    if hasattr(x, "__dataclass_fields__"):
        return {f.name: _jsonable(getattr(x, f.name)) for f in fields(x)}
    return str(x)


def write_json(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, allow_nan=False) + "\n"


# }}}


# {{{ problems


@dataclass(frozen=True)
class _Problem:
    L: Any
    path: Callable[[float], GridFunction]
    exponents: Callable[[float], tuple]
    partial_d_exponents: Callable[[float], tuple]
    default_grid: tuple[float, ...]


def _problem(cfg: RunConfig) -> _Problem:
    sid = _scenario_id(cfg.id or "ex3")
    n, c, d = cfg.n_intervals, cfg.c, cfg.d
    none = lambda a: (None, None)  # noqa: E731

    if sid == "ex1_inertial":
        return _Problem(quadratic_lagrangian(), lambda a: PowerPath(1.0, 1.0 - a).sample(n),
                        lambda a: (4.0 * a - 2.0 if a > 0.5 else None, None), none,
                        (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7))
    if sid == "ex1_regularized":
        a0 = 0.3 if cfg.alpha0 is None else cfg.alpha0
        return _Problem(quadratic_lagrangian(a0), lambda a: PowerPath(1.0, 1.0 - a0).sample(n),
                        none, none, tuple(np.round(np.linspace(0.0, 1.0, 11), 12)))
    if sid == "ex2_constant_force":
        return _Problem(constant_force_lagrangian(c), lambda a: ex2_path(a, c, n, scale=0.5),
                        none, lambda a: (None, a), tuple(np.round(np.arange(1, 10) / 10, 12)))
    if sid in ("ex3_primary_constraint", "beta_remark"):
        if not c > 0:
            raise ValidityRegionError("the primary-constraint example needs c > 0")
        return _Problem(primary_constraint_lagrangian(c), lambda a: ex3_path(a, c, n),
                        lambda a: (a, 2.0 * a), none, (0.0, 0.1, 0.2, 0.3, 0.4))
    if sid == "ex4a_quadratic":
        L = linear_d_lagrangian(c, lambda y: 0.5 * d * y**2, lambda y: d * y, "c d + d y^2 / 2")
        return _Problem(L, lambda a: ex4_path(-a, -c / (d * gamma_fn(1.0 - a)), n),
                        lambda a: (a, 2.0 * a), none, (0.1, 0.2, 0.3, 0.4))
    L = linear_d_lagrangian(c, lambda y: np.log(np.abs(y)), lambda y: 1.0 / y, "c d + ln|y|")
    return _Problem(L, lambda a: ex4_path(a, -gamma_fn(1.0 - a) / c, n),
                    none, none, (0.1, 0.2, 0.3, 0.4, 0.5))


def _root_condition(name: str):
    if name == "ex4b":
        return ex4b_displayed_condition, (0.0, 0.9)
    if name == "ex4b_reduced":
        return ex4b_reduced_condition, (0.0, 1.0)
    return ex4a_reduced_condition, (0.0, 0.5)


# }}}


# {{{ execution


def _render(cfg: RunConfig) -> str:
    cmd = cfg.command
    alpha = cfg.alpha

    if cmd in ("frac-deriv", "frac-int", "sensitivity"):
        y = read_grid_csv(cfg.input_path)
        if cmd == "frac-deriv":
            out, column = rl_left(y, alpha), "d_alpha_y"
        elif cmd == "frac-int":
            out, column = rl_integral(y, alpha), "i_alpha_y"
        else:
            out, column = dalpha_rl(y, alpha).values, "g"
        if cfg.format == "json":
            return write_json({"alpha": alpha, "t": out.t, column: out.values})
        return grid_to_csv(out, column)

    if cmd in ("action", "el-residual"):
        prob = _problem(cfg)
        if cfg.input_path is not None:
            y, exps, pexps = read_grid_csv(cfg.input_path), (None, None), (None, None)
        else:
            y, exps, pexps = prob.path(alpha), prob.exponents(alpha), prob.partial_d_exponents(alpha)
        if cmd == "action":
            value = action(y, alpha, prob.L, exps, check_boundary=False)
            if cfg.format == "json":
                return write_json({"alpha": alpha, "action": value})
            return write_csv(("alpha", "action"), [(alpha, value)])
        res = el_residual_y(y, alpha, prob.L, pexps)
        if cfg.format == "json":
            return write_json({"alpha": alpha, "el_residual_norm": res.interior_sup_norm(),
                               "t": res.t, "el_residual": res.values})
        return grid_to_csv(res, "el_residual")

    if cmd == "alpha-scan":
        prob = _problem(cfg)
        grid = cfg.grid or prob.default_grid
        rows = alpha_scan(prob.path, prob.L, grid, exponents=prob.exponents,
                          partial_d_exponents=prob.partial_d_exponents)
        if cfg.format == "json":
            return write_json(rows)
        return write_csv(SCAN_COLUMNS, ([r[k] for k in SCAN_COLUMNS] for r in rows))

    if cmd == "root":
        condition, bracket = _root_condition(cfg.id or "ex4b")
        res = find_alpha_root(condition, bracket, tol=cfg.tol)
        if cfg.format == "json":
            return write_json({"alpha_star": res.alpha, "condition_value": res.value,
                               "iterations": res.iterations})
        return write_csv(("alpha_star", "condition_value"), [(res.alpha, res.value)])

    if cmd == "example":
        sid = _scenario_id(cfg.id)
        overrides = {"c": cfg.c, "d": cfg.d, "alpha0": cfg.alpha0}
        if cfg.grid is not None:
            overrides["alpha_grid"] = list(cfg.grid)
        if sid == "beta_remark":
            overrides["alpha"] = cfg.alpha
            if cfg.beta is not None:
                overrides["betas"] = [cfg.beta]
        defaults = ExampleScenario.create(sid).parameters
        overrides = {k: v for k, v in overrides.items() if k in defaults or k == "alpha_grid"}
        report = run_example(ExampleScenario.create(sid, **overrides), cfg.n_intervals)
        if cfg.format == "json":
            return write_json(report)
        return write_csv(SCAN_COLUMNS, ([r.get(k) for k in SCAN_COLUMNS] for r in report.rows))

    # sweep: beta-weighted action of a fixed stationary path
    prob = _problem(cfg)
    a = 0.25 if alpha is None else alpha
    y = prob.path(a)
    betas = cfg.grid or (0.75, 1.0, 1.25, 1.5)
    if any(not b > 0 for b in betas):
        raise UsageError("sweep needs positive beta values")
    rows = [(b, beta_action(y, a, b, prob.L, prob.exponents(a), check_boundary=False))
            for b in betas]
    if cfg.format == "json":
        return write_json([{"beta": b, "action": v} for b, v in rows])
    return write_csv(("beta", "action"), rows)


def execute(config: RunConfig) -> int:
    """Run *config*, writing to ``config.output_path`` (or stdout); return the exit code."""
    try:
        text = _render(config)
    except (UsageError, ValidityRegionError, OrderOutOfRange) as exc:
        print(f"fracvar: usage error: {exc}", file=sys.stderr)
        return 2
    except (FracVarError, ArithmeticError) as exc:
        print(f"fracvar: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1

    if config.output_path is None:
        sys.stdout.write(text)
    else:
        with open(config.output_path, "w", newline="\n") as f:
            f.write(text)
    return 0


def main(argv: list[str] | None = None) -> int:
    try:
        config = parse_args(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        print(f"fracvar: usage error: {exc}", file=sys.stderr)
        return 2
    return execute(config)


# }}}

# vim: fdm=marker
