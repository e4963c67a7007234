"""End-to-end constructive solver for the mixed parabolic-hyperbolic problem.

The pipeline couples a Caputo-fractional diffusion equation on the unit square
to wave equations on three flanking characteristic subdomains through nonlocal
boundary conditions on interior curves and integral transmitting conditions on
the type-change lines.  Solving proceeds by trace extraction: a two-point ODE
reduced to a Fredholm equation for the bottom trace, then a coupled pair of
second-kind equations (or a generalised Abel reduction when the pointwise
transmitting coefficients vanish) for the lateral traces, and finally field
assembly from the subdomain representations.
"""

from .config import (
    CatalogExpr,
    ProblemConfig,
    SeparableKernel,
    SourceXT,
    expr_from_dict,
)
from .checker import check_uniqueness_conditions
from .traces import TraceSet, recover_nu, solve_tau1, solve_tau23_abel, solve_tau23_general
from .assembly import SolutionField, assemble_solution
from .oracle import fd_oracle
from .residuals import interface_residuals
from .pipeline import SolveResult, solve_problem

__all__ = [
    "CatalogExpr",
    "ProblemConfig",
    "SeparableKernel",
    "SourceXT",
    "expr_from_dict",
    "check_uniqueness_conditions",
    "TraceSet",
    "solve_tau1",
    "solve_tau23_general",
    "solve_tau23_abel",
    "recover_nu",
    "SolutionField",
    "assemble_solution",
    "fd_oracle",
    "interface_residuals",
    "SolveResult",
    "solve_problem",
]
