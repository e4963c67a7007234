"""Dense Nystrom machinery for second-kind integral equations.

All operators are materialised as n x n matrices acting on grid values; the
quadrature weights are folded into the matrix entries.  Weakly singular
factors (t - z)^(-p) are handled by product integration: the weights are exact
for piecewise-linear densities against the singular factor, never by sampling
the singularity.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .errors import DomainError, SingularOperator
from .fractional_calculus import GridFunction, TimeGrid

logger = logging.getLogger(__name__)

_RCOND_FLOOR = 1e-14


@dataclass(frozen=True)
class DiscretizedKernel:
    """Matrix form of an integral operator on a uniform grid.

    entries[i, j] already contain the quadrature weights, so the discrete
    operator action is simply entries @ values.  singularity_exponent > 0
    records that a (t-z)^(-p) factor was absorbed by product integration.
    """

    grid: TimeGrid
    entries: np.ndarray = field(repr=False)
    singularity_exponent: float = 0.0

    def __post_init__(self):
        ent = np.asarray(self.entries, dtype=float)
        object.__setattr__(self, "entries", ent)
        n = self.grid.n_points
        if ent.shape != (n, n):
            raise ValueError("kernel matrix must be n x n")
        if not np.all(np.isfinite(ent)):
            raise ValueError("kernel matrix entries must be finite")
        if not 0.0 <= self.singularity_exponent < 1.0:
            raise ValueError("singularity_exponent must lie in [0, 1)")


@dataclass(frozen=True)
class Resolvent:
    """Resolvent matrix R with tau = F + R F solving tau - K tau = F."""

    grid: TimeGrid
    entries: np.ndarray = field(repr=False)


def trapezoid_weights(grid: TimeGrid) -> np.ndarray:
    w = np.full(grid.n_points, grid.h)
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


def fredholm_matrix(grid: TimeGrid, kernel, singularity_exponent: float = 0.0) -> DiscretizedKernel:
    """Trapezoid discretisation of (K phi)(t) = int_0^tmax k(t, s) phi(s) ds."""
    t = grid.points
    w = trapezoid_weights(grid)
    tt, ss = np.meshgrid(t, t, indexing="ij")
    entries = np.asarray(kernel(tt, ss), dtype=float) * w[None, :]
    return DiscretizedKernel(grid, entries, singularity_exponent)


def volterra_matrix(grid: TimeGrid, kernel) -> np.ndarray:
    """Trapezoid discretisation of (V phi)(t_i) = int_0^{t_i} k(t_i, s) phi(s) ds."""
    n = grid.n_points
    t = grid.points
    h = grid.h
    entries = np.zeros((n, n))
    for i in range(1, n):
        row = np.asarray(kernel(np.full(i + 1, t[i]), t[: i + 1]), dtype=float)
        w = np.full(i + 1, h)
        w[0] *= 0.5
        w[-1] *= 0.5
        entries[i, : i + 1] = row * w
    return entries


def singular_weights(grid: TimeGrid, exponent: float, kind: str) -> np.ndarray:
    """Product-integration weights for (t - z)^(-exponent) factors.

    kind="volterra_lower": row k integrates over [0, t_k] against
    (t_k - z)^(-exponent).  kind="fredholm": row k integrates over the whole
    grid against |t_k - z|^(-exponent).  Exact for piecewise-linear densities;
    row 0 of the Volterra variant is identically zero (empty interval).
    """
    if not 0.0 < exponent < 1.0:
        raise DomainError("singular_weights requires exponent in (0, 1)")
    if kind not in ("volterra_lower", "fredholm"):
        raise ValueError("kind must be 'volterra_lower' or 'fredholm'")
    n = grid.n_points
    t = grid.points
    h = grid.h
    p = exponent
    q1 = 1.0 - p
    q2 = 2.0 - p
    weights = np.zeros((n, n))
    for k in range(n):
        if k > 0:
            # intervals [t_j, t_{j+1}], j < k, factor (t_k - z)^(-p)
            a = t[k] - t[:k]
            b = t[k] - t[1 : k + 1]
            m0 = (a**q1 - b**q1) / q1
            m1 = a * m0 - (a**q2 - b**q2) / q2
            weights[k, :k] += m0 - m1 / h
            weights[k, 1 : k + 1] += m1 / h
        if kind == "fredholm" and k < n - 1:
            # intervals [t_j, t_{j+1}], j >= k, factor (z - t_k)^(-p)
            a = t[k:-1] - t[k]
            b = t[k + 1 :] - t[k]
            m0 = (b**q1 - a**q1) / q1
            m1 = (b**q2 - a**q2) / q2 - a * m0
            weights[k, k:-1] += m0 - m1 / h
            weights[k, k + 1 :] += m1 / h
    return weights


def _factorise(a: np.ndarray, context: str):
    try:
        lu, piv = linalg.lu_factor(a)
    except linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure path
        raise SingularOperator(f"{context}: factorisation failed") from exc
    anorm = np.linalg.norm(a, 1)
    rcond = linalg.lapack.dgecon(lu, anorm, norm="1")[0]
    if not np.isfinite(rcond) or rcond < _RCOND_FLOOR:
        raise SingularOperator(
            f"{context}: operator numerically singular (rcond={rcond:.2e})",
            cond=math.inf if rcond == 0 else 1.0 / max(rcond, 1e-300),
        )
    logger.debug("%s: 1-norm condition estimate %.3e", context, 1.0 / rcond)
    return lu, piv


def nystrom_solve(K: DiscretizedKernel, F: GridFunction, sign: str = "-") -> GridFunction:
    """Solve tau -+ K tau = F on the grid by dense LU with partial pivoting.

    sign="-" solves tau - K tau = F; sign="+" solves tau + K tau = F.
    Raises SingularOperator (with a condition estimate) outside the
    second-kind solvable regime.
    """
    if sign not in ("-", "+"):
        raise ValueError("sign must be '-' or '+'")
    if F.grid.n_points != K.grid.n_points:
        raise ValueError("grid mismatch between kernel and right-hand side")
    n = K.grid.n_points
    a = np.eye(n) + (K.entries if sign == "+" else -K.entries)
    lu, piv = _factorise(a, "nystrom_solve")
    sol = linalg.lu_solve((lu, piv), F.values)
    return GridFunction(K.grid, sol)


def resolvent_build(K: DiscretizedKernel) -> Resolvent:
    """Resolvent R = (I - K)^(-1) K, so that tau = F + R F solves tau - K tau = F.

    For the plus-form equation tau + K tau = F, pass the negated kernel.
    """
    n = K.grid.n_points
    a = np.eye(n) - K.entries
    lu, piv = _factorise(a, "resolvent_build")
    r = linalg.lu_solve((lu, piv), K.entries)
    return Resolvent(K.grid, r)


def resolvent_apply(R: Resolvent, F: GridFunction) -> GridFunction:
    return GridFunction(R.grid, F.values + R.entries @ F.values)


def abel_forward(g: GridFunction, beta: float) -> GridFunction:
    """Forward weakly singular map F(t) = int_0^t g(z) (t - z)^(-beta) dz."""
    if not 0.0 < beta < 1.0:
        raise DomainError("abel_forward requires beta in (0, 1)")
    w = singular_weights(g.grid, beta, "volterra_lower")
    return GridFunction(g.grid, w @ g.values)


def abel_invert_matrix(grid: TimeGrid, beta: float) -> np.ndarray:
    """Matrix form of :func:`abel_invert` (the inversion is linear in the data).

    Row k realises
        tau(t_k) = sin(beta pi)/pi * [ F(0) t_k^(beta-1)
                                       + int_0^{t_k} F'(z) (t_k - z)^(beta-1) dz ]
    with F' taken as divided differences of the grid data (piecewise-linear F)
    and the convolution integrated exactly against the singular factor.  The
    t = 0 row is quadratic extrapolation from the three following rows.
    """
    if not 0.0 < beta < 1.0:
        raise DomainError("abel inversion requires beta in (0, 1)")
    n = grid.n_points
    t = grid.points
    h = grid.h
    s = math.sin(beta * math.pi) / math.pi
    mat = np.zeros((n, n))
    for k in range(1, n):
        mat[k, 0] += s * t[k] ** (beta - 1.0)
        a = t[k] - t[:k]
        b = t[k] - t[1 : k + 1]
        w = (a**beta - b**beta) / beta  # int of (t_k - z)^(beta-1) over interval
        mat[k, 1 : k + 1] += s * w / h
        mat[k, :k] -= s * w / h
    mat[0] = 3.0 * mat[1] - 3.0 * mat[2] + mat[3]
    return mat


def abel_invert(Fbar: GridFunction, beta: float) -> GridFunction:
    """Solve the generalised Abel equation int_0^t tau(z) (t-z)^(-beta) dz = F(t).

    First-order convergent away from t = 0; the t = 0 node is filled by
    quadratic extrapolation.  Emits a warning (only) when the data rises
    faster than t^(1-beta) near the origin, which signals a singular solution
    component.
    """
    if not 0.0 < beta < 1.0:
        raise DomainError("abel_invert requires beta in (0, 1)")
    vals = Fbar.values
    scale = float(np.max(np.abs(vals)))
    h = Fbar.grid.h
    if scale > 0.0:
        rise = abs(vals[1] - vals[0])
        if rise > 10.0 * scale * h ** (1.0 - beta):
            warnings.warn(
                "Abel data rises faster than t^(1-beta) near t=0; "
                "the recovered density may be singular there",
                stacklevel=2,
            )
    mat = abel_invert_matrix(Fbar.grid, beta)
    return GridFunction(Fbar.grid, mat @ vals)
