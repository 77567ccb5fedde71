"""Fractional variational problems with a variable order of differentiation.

The numerical layer works on uniform grids of ``[0, b]`` (:class:`GridFunction`)
and provides left and right Riemann-Liouville and Caputo operators, the order
derivative of the Riemann-Liouville derivative, action functionals with their
two stationarity conditions, and solvers for the order-stationarity problem.
"""

from fracvar.errors import (
    BoundaryViolation,
    DomainError,
    FracVarError,
    GridTooCoarse,
    IterationLimit,
    NoBracket,
    NoConvergence,
    NonIntegrableError,
    NotRepresentable,
    OrderOutOfRange,
    PoleError,
    SingularEndpointError,
    StationarityViolation,
    UsageError,
    ValidityRegionError,
)
from fracvar.grid import (
    GridFunction,
    QuadratureRule,
    RuleKind,
    derivative,
    integrate,
    integrate_singular,
)
from fracvar.operators import (
    FractionalOrder,
    PowerPath,
    caputo_left,
    caputo_right,
    gl_check,
    power_law_deriv,
    rl_integral,
    rl_left,
    rl_right,
)
from fracvar.scenarios import ExampleScenario, run_example
from fracvar.sensitivity import (
    Method,
    SensitivityField,
    dalpha_at_one,
    dalpha_at_zero,
    dalpha_rl,
    expansion_check,
    f1_kernel,
)
from fracvar.solvers import (
    RitzProblem,
    RootResult,
    SeriesSolution,
    alpha_scan,
    example2_series,
    find_alpha_root,
    joint_minimize,
    solve_rl_equation,
)
from fracvar.special import (
    EULER_GAMMA,
    SpecialFnResult,
    digamma,
    digamma_result,
    gamma_fn,
    lgamma_fn,
    rgamma,
)
from fracvar.variational import (
    Claim,
    LagrangianSpec,
    StationarityReport,
    action,
    alpha_condition,
    beta_action,
    dI_dalpha,
    el_residual_y,
    int_by_parts_defect,
    stationarity_report,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
