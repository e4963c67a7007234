"""Sign-condition checker for the uniqueness hypotheses.

Each condition of the uniqueness theorem is evaluated on a 101-point sample
and reported by name with the first violating point.  Conditions that are
scaled by a vanishing transmitting coefficient beta_i are vacuously true and
marked as such; the pointwise-coefficient sign conditions are always live.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError
from .config import ProblemConfig, SeparableKernel

_SAMPLE = np.linspace(0.0, 1.0, 101)
_TOL = 1e-12


@dataclass(frozen=True)
class ConditionVerdict:
    name: str
    passed: bool
    vacuous: bool = False
    first_violation: tuple[float, float] | None = None  # (sample point, value)

    def __str__(self):
        status = "pass" if self.passed else "FAIL"
        extra = " (vacuous)" if self.vacuous else ""
        if self.first_violation is not None:
            extra = f" at t={self.first_violation[0]:.3g}, value={self.first_violation[1]:.3g}"
        return f"{self.name}: {status}{extra}"


@dataclass(frozen=True)
class UniquenessReport:
    conditions: tuple[ConditionVerdict, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions)

    def failures(self) -> list[ConditionVerdict]:
        return [c for c in self.conditions if not c.passed]

    def __str__(self):
        return "\n".join(str(c) for c in self.conditions)


def _scalar_condition(name: str, value: float, is_nonneg: bool) -> ConditionVerdict:
    ok = value >= -_TOL if is_nonneg else value <= _TOL
    return ConditionVerdict(name, ok, first_violation=None if ok else (0.0, value))


def _pointwise_condition(name: str, values: np.ndarray, is_nonneg: bool) -> ConditionVerdict:
    bad = values < -_TOL if is_nonneg else values > _TOL
    if not bad.any():
        return ConditionVerdict(name, True)
    i = int(np.argmax(bad))
    return ConditionVerdict(name, False,
                            first_violation=(float(_SAMPLE[i]), float(values[i])))


def _vacuous(name: str) -> ConditionVerdict:
    return ConditionVerdict(name, True, vacuous=True)


def _ratio_derivative(kernel: SeparableKernel, where: str) -> np.ndarray:
    """(P_1 / P_2')'(t) on the sample, with P_2' checked away from zero."""
    p1 = kernel.t_factor
    p2d = kernel.s_factor.deriv()
    d = np.asarray(p2d(_SAMPLE), dtype=float)
    if np.any(np.abs(d) < 1e-12):
        raise ConfigError(
            f"{where}: the tail-kernel factor derivative vanishes on the "
            "sample; the ratio-monotonicity condition is undefined"
        )
    num = np.asarray(p1.deriv()(_SAMPLE), dtype=float) * d
    p2dd = p2d.deriv()
    num = num - np.asarray(p1(_SAMPLE), dtype=float) * np.asarray(p2dd(_SAMPLE), dtype=float)
    return num / d**2


def check_uniqueness_conditions(cfg: ProblemConfig) -> UniquenessReport:
    """Evaluate every uniqueness-theorem hypothesis, named, with verdicts."""
    s1, s2, s3 = cfg.sigma
    a1, a2, a3 = cfg.alpha
    b1, b2, b3 = cfg.beta_coef
    k1, k2, k3 = cfg.kernels
    out: list[ConditionVerdict] = []

    # Structural separability hypotheses: the lateral tail kernels must close
    # the integration-by-parts identities, which needs P_{j,2}(1) = 0.
    for name, kern in (("left_tail_kernel_vanishes_at_end", k2),
                       ("right_tail_kernel_vanishes_at_end", k3)):
        val = float(kern.s_factor(1.0))
        out.append(ConditionVerdict(name, abs(val) <= _TOL,
                                    first_violation=None if abs(val) <= _TOL else (1.0, val)))

    # Left interface (x = 0).
    c2 = (1.0 + s2) / (1.0 - s2)
    out.append(_scalar_condition("left_pointwise_sign", a2 * c2, is_nonneg=True))
    if b2 == 0.0:
        out.extend(_vacuous(n) for n in
                   ("left_kernel_product", "left_kernel_ratio_endpoint",
                    "left_kernel_ratio_monotone"))
    else:
        prod = b2 * c2 * np.asarray(k2.t_factor(_SAMPLE)) * np.asarray(k2.s_factor(_SAMPLE))
        out.append(_pointwise_condition("left_kernel_product", prod, is_nonneg=False))
        ratio_d = _ratio_derivative(k2, "left interface")
        p22d0 = float(k2.s_factor.deriv()(0.0))
        endpoint = 0.5 * b2 * c2 * float(k2.t_factor(0.0)) / p22d0
        out.append(_scalar_condition("left_kernel_ratio_endpoint", endpoint, is_nonneg=False))
        out.append(_pointwise_condition("left_kernel_ratio_monotone",
                                        0.5 * b2 * c2 * ratio_d, is_nonneg=False))

    # Bottom interface (t = 0).
    c1 = (s1 - 1.0) / (s1 + 1.0)
    out.append(_scalar_condition("bottom_coupling_sign", 0.5 * b1 * c1, is_nonneg=True))
    if b1 == 0.0:
        out.extend(_vacuous(n) for n in
                   ("bottom_kernel_product", "bottom_kernel_ratio_monotone"))
    else:
        prod = np.asarray(k1.t_factor(_SAMPLE)) * np.asarray(k1.s_factor(_SAMPLE))
        out.append(_pointwise_condition("bottom_kernel_product", prod, is_nonneg=True))
        ratio_d = _ratio_derivative(k1, "bottom interface")
        out.append(_pointwise_condition("bottom_kernel_ratio_monotone", ratio_d,
                                        is_nonneg=True))

    # Right interface (x = 1).
    c3 = (s3 - 1.0) / (s3 + 1.0)
    out.append(_scalar_condition("right_pointwise_sign", a3 * c3, is_nonneg=False))
    if b3 == 0.0:
        out.extend(_vacuous(n) for n in
                   ("right_kernel_product", "right_kernel_ratio_endpoint",
                    "right_kernel_ratio_monotone"))
    else:
        prod = b3 * c3 * np.asarray(k3.t_factor(_SAMPLE)) * np.asarray(k3.s_factor(_SAMPLE))
        out.append(_pointwise_condition("right_kernel_product", prod, is_nonneg=True))
        ratio_d = _ratio_derivative(k3, "right interface")
        p32d0 = float(k3.s_factor.deriv()(0.0))
        endpoint = 0.5 * b3 * c3 * float(k3.t_factor(0.0)) / p32d0
        out.append(_scalar_condition("right_kernel_ratio_endpoint", endpoint, is_nonneg=True))
        out.append(_pointwise_condition("right_kernel_ratio_monotone",
                                        0.5 * b3 * c3 * ratio_d, is_nonneg=True))

    return UniquenessReport(tuple(out))
