"""Discrete Caputo differentiation on uniform grids, plus closed-form oracles.

The L1 scheme replaces the integrand's derivative by divided differences of a
piecewise-linear reconstruction; accuracy is O(h^(2-lam)) for C^2 functions,
which is the sharp rate for this scheme.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid on [0, t_max] with n_points nodes."""

    n_points: int
    t_max: float = 1.0

    def __post_init__(self):
        if self.n_points < 3:
            raise ValueError("TimeGrid needs n_points >= 3")
        if not (math.isfinite(self.t_max) and self.t_max > 0):
            raise ValueError("TimeGrid needs t_max > 0")

    @property
    def h(self) -> float:
        return self.t_max / (self.n_points - 1)

    @property
    def points(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, self.n_points)


@dataclass(frozen=True)
class GridFunction:
    """Sampled one-variable function on a TimeGrid."""

    grid: TimeGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if vals.shape != (self.grid.n_points,):
            raise ValueError("values length must equal grid.n_points")
        if not np.all(np.isfinite(vals)):
            raise ValueError("GridFunction values must be finite")

    @classmethod
    def from_callable(cls, grid: TimeGrid, fn) -> "GridFunction":
        return cls(grid, np.asarray([fn(t) for t in grid.points], dtype=float))

    def __len__(self) -> int:
        return self.grid.n_points


def l1_increment_weights(lam: float, k: int) -> np.ndarray:
    """Weights b_j multiplying (g_{j+1} - g_j), j = 0..k-1, in the L1 sum.

    b_j = ((k-j)^(1-lam) - (k-j-1)^(1-lam)) / (Gamma(2-lam) * h^lam), with the
    h factor left to the caller.
    """
    j = np.arange(k, dtype=float)
    return ((k - j) ** (1.0 - lam) - (k - j - 1.0) ** (1.0 - lam)) / math.gamma(2.0 - lam)


def caputo_l1(g: GridFunction, lam: float, k: int) -> float:
    """L1 approximation of the Caputo derivative of order lam at node k.

    The value at k = 0 is 0 by convention (empty defining integral).  Indices
    outside the grid raise IndexError.
    """
    if not 0.0 < lam < 1.0:
        raise DomainError("caputo_l1 requires 0 < lam < 1")
    n = g.grid.n_points
    if k < 0 or k >= n:
        raise IndexError(f"node index {k} outside grid of {n} points")
    if k == 0:
        return 0.0
    h = g.grid.h
    w = l1_increment_weights(lam, k)
    inc = np.diff(g.values[: k + 1])
    return float(np.dot(w, inc) / h**lam)


def caputo_l1_all(g: GridFunction, lam: float) -> np.ndarray:
    """L1 Caputo derivative at every node (vectorised convenience)."""
    if not 0.0 < lam < 1.0:
        raise DomainError("caputo_l1_all requires 0 < lam < 1")
    n = g.grid.n_points
    h = g.grid.h
    inc = np.diff(g.values)
    out = np.zeros(n)
    kk = np.arange(n, dtype=float)
    # c[m] weights the increment ending m steps before the evaluation node.
    c = (kk[1:] ** (1.0 - lam) - kk[:-1] ** (1.0 - lam)) / math.gamma(2.0 - lam)
    for k in range(1, n):
        out[k] = np.dot(c[:k][::-1], inc[:k]) / h**lam
    return out


def caputo_power_oracle(mu: float, lam: float, t: float) -> float:
    """Exact Caputo derivative of t^mu, order lam in (0, 1); test oracle.

    D^lam t^mu = Gamma(mu+1)/Gamma(mu+1-lam) * t^(mu-lam)  for mu > 0.
    """
    if mu <= 0.0:
        raise DomainError("caputo_power_oracle requires mu > 0")
    if not 0.0 < lam < 1.0:
        raise DomainError("caputo_power_oracle requires 0 < lam < 1")
    if t < 0.0:
        raise DomainError("caputo_power_oracle requires t >= 0")
    if t == 0.0:
        return 0.0 if mu > lam else math.inf
    return math.gamma(mu + 1.0) / math.gamma(mu + 1.0 - lam) * t ** (mu - lam)
