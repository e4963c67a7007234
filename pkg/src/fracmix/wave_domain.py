"""Characteristic geometry and d'Alembert machinery for the hyperbolic parts.

Geometry.  The parabolic unit square is flanked by three hyperbolic
subdomains: region 1 below the segment t = 0, region 2 left of x = 0 and
region 3 right of x = 1.  Each is bounded by its data line and by a smooth
curve drawn strictly inside the characteristic triangle; the default family is
gamma_i(s) = eps_i * s * (1 - s) with eps_i in [0, 1), which keeps s +-
gamma_i(s) strictly increasing.

Every subdomain is handled in local Cauchy coordinates (a, b) in which the
wave operator is d^2/da db, the data line is a = b, and

    u(a, b) = (tau(a) + tau(b)) / 2 - (1/2) int_a^b nu(z) dz
              - int_a^b da1 int_{a1}^b f_loc(a1, b1) db1,

with u = tau and (d_a - d_b) u = nu on the line.  In terms of the global
characteristic coordinates xi = x + t, eta = x - t:

    region 1: (a, b) = (xi, eta),          f_loc(a, b) =  f1(a, b)
    region 2: (a, b) = (xi, -eta),         f_loc(a, b) = -f1(a, -b)
    region 3: (a, b) = (xi - 1, 1 - eta),  f_loc(a, b) = -f1(1 + a, 1 - b)

where 4 f1(xi, eta) = f((xi + eta)/2, (xi - eta)/2).  The sign flips come from
d_b = -d_eta in regions 2 and 3; representations written directly in (xi, eta)
without them fail the wave equation, which the test suite checks by finite
differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from .errors import ConfigError, DomainError, GeometryError
from .fractional_calculus import GridFunction

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(32)
_GL01_NODES = 0.5 * (_GL_NODES + 1.0)
_GL01_WEIGHTS = 0.5 * _GL_WEIGHTS

_ADMIT_TOL = 1e-10


@dataclass(frozen=True)
class CharPoint:
    """Point in characteristic coordinates xi = x + t, eta = x - t."""

    xi: float
    eta: float

    @property
    def x(self) -> float:
        return 0.5 * (self.xi + self.eta)

    @property
    def t(self) -> float:
        return 0.5 * (self.xi - self.eta)

    @classmethod
    def from_xt(cls, x: float, t: float) -> "CharPoint":
        return cls(x + t, x - t)


@dataclass(frozen=True)
class CurveSpec:
    """The three boundary curves gamma_i(s) = eps_i * s * (1 - s).

    For each curve the two monotone characteristic maps are exposed:
    rho(i, s) is the local coordinate a of the curve point with b = s, and
    v(i, s) is the local b of the curve point with a = s, so rho(i, v(i, s)) = s.
    """

    epsilon: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        if len(self.epsilon) != 3:
            raise ConfigError("CurveSpec needs exactly three amplitudes")
        for e in self.epsilon:
            if not (0.0 <= e < 1.0) or not math.isfinite(e):
                raise ConfigError(
                    "curve amplitudes must lie in [0, 1) so that s +- gamma(s) "
                    "increase strictly"
                )

    def gamma(self, i: int, u):
        return self.epsilon[i - 1] * u * (1.0 - u)

    def _solve(self, i: int, s: float, sign: float) -> float:
        """Root u in [0, 1] of u + sign * gamma_i(u) = s (safeguarded bisection)."""
        if not 0.0 <= s <= 1.0:
            raise GeometryError(f"curve parameter s={s} outside [0, 1]")
        if self.epsilon[i - 1] == 0.0:
            return s

        def fn(u):
            return u + sign * self.gamma(i, u) - s

        if s <= 0.0 or s >= 1.0:
            return s
        return brentq(fn, 0.0, 1.0, xtol=1e-14, rtol=8.9e-16)

    def rho(self, i: int, s: float) -> float:
        """Local a-coordinate of the curve point with local b = s (rho <= s)."""
        u = self._solve(i, s, +1.0)
        return s - 2.0 * self.gamma(i, u)

    def v(self, i: int, s: float) -> float:
        """Local b-coordinate of the curve point with local a = s (v >= s)."""
        u = self._solve(i, s, -1.0)
        return s + 2.0 * self.gamma(i, u)


def local_from_global(p: CharPoint, domain_id: int) -> tuple[float, float]:
    if domain_id == 1:
        return p.xi, p.eta
    if domain_id == 2:
        return p.xi, -p.eta
    if domain_id == 3:
        return p.xi - 1.0, 1.0 - p.eta
    raise ValueError("domain_id must be 1, 2 or 3")


def global_from_local(a: float, b: float, domain_id: int) -> CharPoint:
    if domain_id == 1:
        return CharPoint(a, b)
    if domain_id == 2:
        return CharPoint(a, -b)
    if domain_id == 3:
        return CharPoint(a + 1.0, 1.0 - b)
    raise ValueError("domain_id must be 1, 2 or 3")


def _local_source(f1, domain_id: int):
    """Right-hand side of u_ab = f_loc in the local coordinates."""
    if domain_id == 1:
        return lambda a, b: f1(a, b)
    if domain_id == 2:
        return lambda a, b: -f1(a, -b)
    return lambda a, b: -f1(1.0 + a, 1.0 - b)


def _check_admissible(a: float, b: float, domain_id: int, curve: CurveSpec | None):
    lo, hi = min(a, b), max(a, b)
    if lo < -_ADMIT_TOL or hi > 1.0 + _ADMIT_TOL:
        raise DomainError(
            f"point (a={a:.4g}, b={b:.4g}) outside subdomain {domain_id}"
        )
    ordered = b >= a - _ADMIT_TOL if domain_id in (1, 2) else a >= b - _ADMIT_TOL
    if not ordered:
        raise DomainError(
            f"point (a={a:.4g}, b={b:.4g}) lies on the wrong side of the data "
            f"line of subdomain {domain_id}"
        )
    if curve is not None:
        inner, outer = (a, b) if domain_id in (1, 2) else (b, a)
        if outer > curve.v(domain_id, min(max(inner, 0.0), 1.0)) + 1e-8:
            raise DomainError(
                f"point (a={a:.4g}, b={b:.4g}) lies beyond the boundary curve "
                f"of subdomain {domain_id}"
            )


def theta_points(curve: CurveSpec, s: float, which: str) -> CharPoint:
    """Intersections of the boundary curves with the labelled characteristics.

    Returned in global characteristic coordinates.  theta1/theta2/theta3 are
    the intersections entering the left sides of the nonlocal conditions,
    theta1_star/... the right sides.
    """
    if not 0.0 < s < 1.0:
        raise GeometryError("theta points are defined for 0 < s < 1")
    if which == "theta1":
        return CharPoint(curve.rho(1, s), s)
    if which == "theta1_star":
        return CharPoint(s, curve.v(1, s))
    if which == "theta2":
        return CharPoint(curve.rho(2, s), -s)
    if which == "theta2_star":
        return CharPoint(s, -curve.v(2, s))
    if which == "theta3":
        return CharPoint(1.0 + s, 1.0 - curve.rho(3, s))
    if which == "theta3_star":
        return CharPoint(1.0 + curve.v(3, s), 1.0 - s)
    raise ValueError(f"unknown theta label {which!r}")


def _spline(g: GridFunction) -> CubicSpline:
    return CubicSpline(g.grid.points, g.values)


def _triangle_integral(f_loc, a: float, b: float) -> float:
    """int_a^b da1 int_{a1}^b f_loc(a1, b1) db1 by tensor Gauss quadrature."""
    if a == b:
        return 0.0
    a1 = a + (b - a) * _GL01_NODES
    width = b - a1
    bb = a1[:, None] + width[:, None] * _GL01_NODES[None, :]
    vals = f_loc(np.broadcast_to(a1[:, None], bb.shape), bb)
    inner = width * (np.asarray(vals) * _GL01_WEIGHTS[None, :]).sum(axis=1)
    return float((b - a) * np.dot(_GL01_WEIGHTS, inner))


def _line_integral(fn, a: float, b: float) -> float:
    if a == b:
        return 0.0
    z = a + (b - a) * _GL01_NODES
    return float((b - a) * np.dot(_GL01_WEIGHTS, np.asarray(fn(z))))


def dalembert_u(tau: GridFunction, nu: GridFunction, f1, p: CharPoint,
                domain_id: int, curve: CurveSpec | None = None) -> float:
    """Evaluate the subdomain solution at p from its line data.

    tau and nu are the value and outgoing-derivative traces on the data line
    of the subdomain (sampled on [0, 1]; cubic interpolation in between); f1
    is the source in global characteristic coordinates.
    """
    a, b = local_from_global(p, domain_id)
    _check_admissible(a, b, domain_id, curve)
    sp_tau = _spline(tau)
    sp_nu = _spline(nu)
    f_loc = _local_source(f1, domain_id)
    val = 0.5 * (sp_tau(a) + sp_tau(b)) - 0.5 * sp_nu.integrate(a, b)
    val -= _triangle_integral(f_loc, a, b)
    return float(val)


def dalembert_du(tau: GridFunction, nu: GridFunction, f1, p: CharPoint,
                 domain_id: int, curve: CurveSpec | None = None) -> tuple[float, float]:
    """(u_x, u_t) of the subdomain solution at p."""
    a, b = local_from_global(p, domain_id)
    _check_admissible(a, b, domain_id, curve)
    sp_tau = _spline(tau)
    sp_nu = _spline(nu)
    f_loc = _local_source(f1, domain_id)
    u_a = 0.5 * (sp_tau(a, 1) + sp_nu(a)) + _line_integral(
        lambda z: f_loc(np.full_like(z, a), z), a, b
    )
    u_b = 0.5 * (sp_tau(b, 1) - sp_nu(b)) - _line_integral(
        lambda z: f_loc(z, np.full_like(z, b)), a, b
    )
    if domain_id == 1:
        u_xi, u_eta = u_a, u_b
    else:
        u_xi, u_eta = u_a, -u_b
    return float(u_xi + u_eta), float(u_xi - u_eta)


def correlation_rhs(curve: CurveSpec, f1, sigma: tuple[float, float, float],
                    s: float, i: int) -> float:
    """Source term A_i(s) of the functional correlation on type-change line i.

    Obtained by evaluating the nonlocal condition on the subdomain
    representation; all integrals run along characteristics and are computed
    by adaptive quadrature.
    """
    if not 0.0 < s < 1.0:
        raise GeometryError("correlation source defined for 0 < s < 1")

    def q(fn, lo, hi):
        if lo == hi:
            return 0.0
        val, _ = integrate.quad(fn, lo, hi, epsabs=1e-12, epsrel=1e-10, limit=100)
        return val

    if i == 1:
        first = q(lambda z: f1(z, s), curve.rho(1, s), s)
        second = q(lambda z: f1(s, z), s, curve.v(1, s))
        return 2.0 * first + 2.0 * sigma[0] * second
    if i == 2:
        f2 = _local_source(f1, 2)
        first = q(lambda z: f2(z, s), curve.rho(2, s), s)
        second = q(lambda z: f2(s, z), s, curve.v(2, s))
        return 2.0 * first - 2.0 * sigma[1] * second
    if i == 3:
        f3 = _local_source(f1, 3)
        first = q(lambda z: f3(s, z), s, curve.rho(3, s))
        second = q(lambda z: f3(z, s), curve.v(3, s), s)
        return -2.0 * first + 2.0 * sigma[2] * second
    raise ValueError("i must be 1, 2 or 3")


def _correlation_coeffs(sigma_i: float, i: int) -> tuple[float, float]:
    """Coefficients (c_tau, c_nu) with c_tau * tau' + c_nu * nu = A_i."""
    if abs(abs(sigma_i) - 1.0) < 1e-14:
        raise ConfigError(
            "|sigma| = 1 decouples the problem; this degenerate case is "
            "not supported"
        )
    if i == 1:
        return 1.0 - sigma_i, -(1.0 + sigma_i)
    if i == 2:
        return 1.0 + sigma_i, sigma_i - 1.0
    if i == 3:
        return 1.0 + sigma_i, 1.0 - sigma_i
    raise ValueError("i must be 1, 2 or 3")


def functional_correlation(tau_prime: GridFunction, nu: GridFunction,
                           sigma_i: float, A_i: GridFunction, i: int) -> GridFunction:
    """Residual of the trace relation c_tau * tau' + c_nu * nu - A_i on the grid."""
    c_tau, c_nu = _correlation_coeffs(sigma_i, i)
    res = c_tau * tau_prime.values + c_nu * nu.values - A_i.values
    return GridFunction(tau_prime.grid, res)


def solve_nu_from_correlation(tau_prime: GridFunction, A_i: GridFunction,
                              sigma_i: float, i: int) -> GridFunction:
    """Invert the trace relation for nu given tau' and the source A_i."""
    c_tau, c_nu = _correlation_coeffs(sigma_i, i)
    vals = (A_i.values - c_tau * tau_prime.values) / c_nu
    return GridFunction(tau_prime.grid, vals)
