"""Problem data: catalog expressions, separable kernels and the full config.

Kernels and the source are restricted to a small closed-form catalog
(polynomials and scaled exponentials) so that every derivative the pipeline
needs is exact, never numerical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError
from ..fractional_calculus import TimeGrid
from ..wave_domain import CurveSpec


class CatalogExpr:
    """One closed-form factor: family 'poly' (coefficient list, ascending) or
    'exp' (a * exp(b * u))."""

    def __init__(self, family: str, coeffs):
        if family not in ("poly", "exp"):
            raise ConfigError(f"unknown catalog family {family!r}")
        coeffs = [float(c) for c in coeffs]
        if family == "exp" and len(coeffs) != 2:
            raise ConfigError("'exp' factors take exactly two coefficients [a, b]")
        if family == "poly" and len(coeffs) == 0:
            raise ConfigError("'poly' factors need at least one coefficient")
        self.family = family
        self.coeffs = coeffs

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        if self.family == "poly":
            out = np.polynomial.polynomial.polyval(u, np.array(self.coeffs))
        else:
            a, b = self.coeffs
            out = a * np.exp(b * u)
        return out if out.shape else float(out)

    def deriv(self) -> "CatalogExpr":
        if self.family == "poly":
            c = self.coeffs
            if len(c) == 1:
                return CatalogExpr("poly", [0.0])
            return CatalogExpr("poly", [i * c[i] for i in range(1, len(c))])
        a, b = self.coeffs
        return CatalogExpr("exp", [a * b, b])

    def is_zero(self) -> bool:
        return self.family == "poly" and all(c == 0.0 for c in self.coeffs)

    def to_dict(self) -> dict:
        return {"family": self.family, "coeffs": list(self.coeffs)}

    def __repr__(self):
        return f"CatalogExpr({self.family!r}, {self.coeffs})"


def expr_from_dict(d: dict) -> CatalogExpr:
    try:
        return CatalogExpr(d["family"], d["coeffs"])
    except KeyError as exc:
        raise ConfigError(f"catalog expression missing key {exc}") from exc


@dataclass(frozen=True)
class SeparableKernel:
    """P(t, s) = t_factor(t) * s_factor(s)."""

    t_factor: CatalogExpr
    s_factor: CatalogExpr

    def __call__(self, t, s):
        return self.t_factor(t) * self.s_factor(s)

    def d_s(self, t, s):
        return self.t_factor(t) * self.s_factor.deriv()(s)


@dataclass(frozen=True)
class SourceXT:
    """Separable source f(x, t) = x_factor(x) * t_factor(t) on the full domain."""

    x_factor: CatalogExpr
    t_factor: CatalogExpr

    def __call__(self, x, t):
        return self.x_factor(x) * self.t_factor(t)

    def is_zero(self) -> bool:
        return self.x_factor.is_zero() or self.t_factor.is_zero()

    def char(self):
        """The source in global characteristic coordinates, with the 1/4 factor
        from the coordinate change folded in."""

        def f1(xi, eta):
            xi = np.asarray(xi, dtype=float)
            eta = np.asarray(eta, dtype=float)
            return 0.25 * self.x_factor(0.5 * (xi + eta)) * self.t_factor(0.5 * (xi - eta))

        return f1


@dataclass(frozen=True)
class ProblemConfig:
    """All data of the coupled problem.

    sigma enter the nonlocal curve conditions, (alpha_i, beta_i) the
    transmitting conditions with tail kernels P_i, f is the source and the
    curves bound the hyperbolic subdomains.
    """

    lam: float
    sigma: tuple[float, float, float]
    alpha: tuple[float, float, float]
    beta_coef: tuple[float, float, float]
    kernels: tuple[SeparableKernel, SeparableKernel, SeparableKernel]
    source: SourceXT
    curves: CurveSpec = field(default_factory=CurveSpec)
    grid: TimeGrid = field(default_factory=lambda: TimeGrid(129))

    def __post_init__(self):
        if not 0.0 < self.lam < 1.0:
            raise ConfigError(
                "fractional order must satisfy 0 < lambda < 1 "
                "(the classical limit lambda = 1 is not covered)"
            )
        for name, triple in (("sigma", self.sigma), ("alpha", self.alpha),
                             ("beta", self.beta_coef)):
            if len(triple) != 3 or not all(math.isfinite(v) for v in triple):
                raise ConfigError(f"{name} must be three finite reals")
        for i, s in enumerate(self.sigma, start=1):
            if abs(abs(s) - 1.0) < 1e-14:
                raise ConfigError(
                    f"|sigma_{i}| = 1 decouples the problem into independent "
                    "pieces; this degenerate case is rejected"
                )
        for i, (a, b) in enumerate(zip(self.alpha, self.beta_coef), start=1):
            if a == 0.0 and b == 0.0:
                raise ConfigError(
                    f"transmitting condition {i} is empty: alpha_{i} and "
                    f"beta_{i} cannot both vanish"
                )
        a2, a3 = self.alpha[1], self.alpha[2]
        if (a2 == 0.0) != (a3 == 0.0):
            raise ConfigError(
                "unsupported transmitting branch: alpha_2 and alpha_3 must be "
                "both nonzero (general branch) or both zero (Abel branch)"
            )
        if a2 == 0.0 and (self.beta_coef[1] == 0.0 or self.beta_coef[2] == 0.0):
            raise ConfigError("Abel branch needs beta_2 != 0 and beta_3 != 0")
        if self.grid.t_max != 1.0:
            raise ConfigError("the problem is posed on the unit square; t_max must be 1")

    @property
    def branch(self) -> str:
        return "abel" if self.alpha[1] == 0.0 else "general"

    @property
    def beta_order(self) -> float:
        """Singularity order beta = lambda / 2 of the boundary kernels."""
        return 0.5 * self.lam

    def with_grid(self, n: int) -> "ProblemConfig":
        return ProblemConfig(self.lam, self.sigma, self.alpha, self.beta_coef,
                             self.kernels, self.source, self.curves, TimeGrid(n))

    @classmethod
    def from_dict(cls, data: dict, grid_n: int | None = None) -> "ProblemConfig":
        try:
            lam = float(data["lambda"])
            sigma = tuple(float(v) for v in data["sigma"])
            alpha = tuple(float(v) for v in data["alpha"])
            beta = tuple(float(v) for v in data["beta"])
            kern_specs = data["kernels"]
            source_spec = data["source"]
        except KeyError as exc:
            raise ConfigError(f"config missing section {exc}") from exc
        if len(kern_specs) != 3:
            raise ConfigError("config needs exactly three transmitting kernels")
        kernels = tuple(
            SeparableKernel(expr_from_dict(k["t"]), expr_from_dict(k["s"]))
            for k in kern_specs
        )
        source = SourceXT(expr_from_dict(source_spec["x"]),
                          expr_from_dict(source_spec["t"]))
        curves = CurveSpec(tuple(float(e) for e in data.get("curves", (0.0, 0.0, 0.0))))
        if grid_n is None:
            grid_n = int(data.get("grid", {}).get("n", 129))
        return cls(lam, sigma, alpha, beta, kernels, source, curves, TimeGrid(grid_n))
