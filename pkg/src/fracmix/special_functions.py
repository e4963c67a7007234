"""Wright-type special function and the reciprocal gamma function.

The two-index generalisation of the Wright function used throughout this
library is the entire function

    e(z; alpha, beta, mu, delta) = sum_n z^n / (Gamma(alpha*n + mu) * Gamma(delta - beta*n)),

defined for alpha > beta, alpha > 0.  Terms whose gamma argument hits a pole
vanish (the reciprocal gamma is zero there), which is essential: the heat
kernel instance alpha=1, mu=1, beta=delta loses every second term this way.

For strongly negative z the alternating series cancels catastrophically in
double precision.  Scalar evaluation then switches to a Hankel-contour
integral representation (exact after an index shift whenever mu is an
integer), so full accuracy is kept without any extended-precision arithmetic.
Vectorised kernel evaluation instead zeroes arguments beyond the cancellation
wall, where the true value is below ~1e-8 anyway; the boundary is documented
by :func:`series_cancellation_wall`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy import special as sc

from .errors import DivergenceGuard, DomainError, NonConvergence

_EPS = float(np.finfo(float).eps)
# ~15.5 decimal digits: beyond this much alternating cancellation the series
# result carries no information in double precision.
_CANCEL_LOSS = 35.7
_CONSECUTIVE_SMALL = 3


@dataclass(frozen=True)
class WrightParams:
    """Index tuple (alpha, beta, mu, delta) of the Wright-type function."""

    alpha: float
    beta: float
    mu: float
    delta: float

    def __post_init__(self):
        for name in ("alpha", "beta", "mu", "delta"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"WrightParams.{name} must be finite")
        if self.alpha <= 0:
            raise ValueError("WrightParams requires alpha > 0")
        if self.alpha <= self.beta:
            raise ValueError("WrightParams requires alpha > beta for an entire series")


@dataclass(frozen=True)
class SeriesControl:
    """Truncation control for the defining series."""

    term_tolerance: float = 1e-16
    max_terms: int = 500
    z_magnitude_cap: float = 40.0

    def __post_init__(self):
        if self.term_tolerance <= 0:
            raise ValueError("term_tolerance must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")


DEFAULT_CONTROL = SeriesControl()


def reciprocal_gamma(x: float) -> float:
    """1/Gamma(x), returning exactly 0.0 at the poles of Gamma.

    Total on finite reals; the zero at nonpositive integers is what makes
    pole-hitting series terms drop out instead of blowing up.
    """
    if not math.isfinite(x):
        raise ValueError("reciprocal_gamma expects a finite argument")
    if x <= 0 and x == round(x):
        return 0.0
    return float(sc.rgamma(x))


def _term_value(z_pow, z_pow_log, g1, g2):
    """Term z^n * g1 * g2 where z^n is carried as z_pow * exp(z_pow_log)."""
    if g1 == 0.0 or g2 == 0.0:
        return 0.0
    if z_pow_log == 0.0:
        return z_pow * g1 * g2
    m = z_pow * g1 * g2
    if m == 0.0:
        return 0.0
    return math.copysign(math.exp(z_pow_log + math.log(abs(m))), m)


def _series_sum(p: WrightParams, z: float, ctrl: SeriesControl):
    """Kahan-compensated partial sum.

    Returns (value, abs_sum, converged).  abs_sum tracks sum |term| so the
    caller can bound the cancellation-induced rounding error by eps*abs_sum.
    The running power of z is rescaled through a separate exponent so that
    large |z| cannot overflow before the gamma factors kick in.
    """
    total = 0.0
    comp = 0.0
    abs_sum = 0.0
    z_pow = 1.0
    z_pow_log = 0.0
    small_run = 0
    converged = False
    for n in range(ctrl.max_terms):
        g1 = reciprocal_gamma(p.alpha * n + p.mu)
        g2 = reciprocal_gamma(p.delta - p.beta * n)
        term = _term_value(z_pow, z_pow_log, g1, g2)
        if not math.isfinite(term):
            raise NonConvergence(
                f"series term {n} is non-finite for params {p} at z={z}"
            )
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        abs_sum += abs(term)
        scale = max(abs(total), 1.0)
        if n > 0 and abs(term) <= ctrl.term_tolerance * scale:
            small_run += 1
            if small_run >= _CONSECUTIVE_SMALL:
                converged = True
                break
        else:
            small_run = 0
        z_pow *= z
        if abs(z_pow) > 1e250:
            z_pow_log += math.log(abs(z_pow))
            z_pow = math.copysign(1.0, z_pow)
    return total, abs_sum, converged


def series_cancellation_wall(beta: float) -> float:
    """Largest |z| at which the alternating series (alpha=1) keeps any digits.

    The function decays like exp(-B |z|^(1/(1-beta))) for z -> -inf while the
    term magnitudes grow like exp(+B |z|^(1/(1-beta))), B = (1-beta) *
    beta^(beta/(1-beta)); double precision is exhausted once the two exponents
    straddle ~16 digits.
    """
    if not 0.0 < beta < 1.0:
        raise ValueError("series_cancellation_wall requires beta in (0, 1)")
    big_b = (1.0 - beta) * beta ** (beta / (1.0 - beta))
    return (_CANCEL_LOSS / (2.0 * big_b)) ** (1.0 - beta)


def _integral_domain_ok(beta: float, x: float) -> bool:
    # The collapsed Hankel integral needs a bounded, mildly oscillatory
    # integrand: exp(-r - x r^beta cos(pi beta)) must decay fast in r.
    return beta <= 0.6 and x * max(0.0, -math.cos(math.pi * beta)) <= 5.0


def _wright_w_integral(beta: float, b: float, x: float) -> float:
    """Standard Wright function W(-x) = sum (-x)^n / (n! Gamma(b - beta*n)).

    Hankel contour collapsed onto the negative real axis.  The integrand is
    absolutely bounded by exp(-r), so quadrature keeps near-eps absolute
    accuracy even where the defining series cancels hopelessly.
    """
    c = math.cos(math.pi * beta)
    s = math.sin(math.pi * beta)
    upper = 60.0
    for _ in range(3):
        upper = 60.0 + x * max(0.0, -c) * upper**beta

    if b < 1.0 - 1e-9:
        def smooth(r):
            return math.exp(-r - x * r**beta * c) * math.sin(
                math.pi * (1.0 - b) - x * r**beta * s
            )

        wvar = (-b, 0.0)
        loop = 0.0
    else:
        # b == 1 up to rounding; the constant phase vanishes and the residual
        # singularity is r^(beta-1), absorbed into the quadrature weight.
        def smooth(r):
            rb = r**beta
            return math.exp(-r - x * rb * c) * math.sin(
                math.pi * (1.0 - b) - x * rb * s
            ) / rb

        wvar = (beta - 1.0, 0.0)
        loop = 1.0
    with warnings.catch_warnings():
        # QUADPACK flags roundoff saturation once it hits eps-level accuracy;
        # the returned value is validated against the series in tests.
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _ = integrate.quad(
            smooth, 0.0, upper, weight="alg", wvar=wvar,
            limit=400, epsabs=1e-15, epsrel=1e-12,
        )
    return loop + val / math.pi


def _wright_integral_integer_mu(m: int, delta: float, beta: float, z: float) -> float:
    """Exact reduction of integer-mu series to the standard Wright function.

    Shifting the summation index gives, with b = delta + beta*(m-1),
        e(z; 1, beta, m, delta) = z^(1-m) * [ W_b(z) - sum_{j<=m-2} z^j/(j! Gamma(b - beta j)) ]
    for m >= 1 (the finite sum is empty for m = 1) and
        e(z; 1, beta, m, delta) = z^(1-m) * W_b(z)   for m <= 0.
    """
    b = delta + beta * (m - 1)
    w = _wright_w_integral(beta, b, -z)
    if m >= 1:
        poly = 0.0
        fact = 1.0
        z_pow = 1.0
        for j in range(m - 1):
            poly += z_pow * reciprocal_gamma(b - beta * j) / fact
            z_pow *= z
            fact *= j + 1
        w -= poly
    if m == 1:
        return w
    return z ** (1 - m) * w


def wright_eval(p: WrightParams, z: float, ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Evaluate the Wright-type function at real z.

    Raises DivergenceGuard for |z| beyond the control cap and NonConvergence
    if the truncation rule cannot be satisfied and no exact fallback applies.
    When heavy alternating cancellation is detected the integer-mu integral
    representation is used instead of the raw series.
    """
    if not math.isfinite(z):
        raise DomainError("wright_eval expects finite z")
    if abs(z) > ctrl.z_magnitude_cap:
        raise DivergenceGuard(
            f"|z|={abs(z):.3g} exceeds the cap {ctrl.z_magnitude_cap:.3g}; "
            "double precision loses all digits to cancellation there"
        )
    value, abs_sum, converged = _series_sum(p, z, ctrl)
    est_err = _EPS * abs_sum
    if converged and est_err <= 1e-13 * max(1.0, abs(value)):
        return value
    mu_int = round(p.mu)
    can_reduce = (
        z < 0.0
        and p.alpha == 1.0
        and abs(p.mu - mu_int) < 1e-12
        and p.delta + p.beta * (mu_int - 1) <= 1.0 + 1e-12
        and _integral_domain_ok(p.beta, -z)
    )
    if can_reduce:
        return _wright_integral_integer_mu(int(mu_int), p.delta, p.beta, z)
    if not converged:
        raise NonConvergence(
            f"series did not satisfy the stop rule within {ctrl.max_terms} terms "
            f"for params {p} at z={z}"
        )
    # Converged but cancellation-limited and no exact route: best effort.
    return value


def wright_derivative_series(p: WrightParams, z: float,
                             ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Termwise derivative of the defining series; valid at z = 0 too."""
    if abs(z) > ctrl.z_magnitude_cap:
        raise DivergenceGuard(f"|z|={abs(z):.3g} exceeds the cap")
    if z == 0.0:
        return reciprocal_gamma(p.alpha + p.mu) * reciprocal_gamma(p.delta - p.beta)
    total = 0.0
    comp = 0.0
    abs_sum = 0.0
    z_pow = 1.0
    z_pow_log = 0.0
    small_run = 0
    converged = False
    for n in range(1, ctrl.max_terms + 1):
        g1 = reciprocal_gamma(p.alpha * n + p.mu)
        g2 = reciprocal_gamma(p.delta - p.beta * n)
        term = n * _term_value(z_pow, z_pow_log, g1, g2)
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        abs_sum += abs(term)
        if n > 1 and abs(term) <= ctrl.term_tolerance * max(abs(total), 1.0):
            small_run += 1
            if small_run >= _CONSECUTIVE_SMALL:
                converged = True
                break
        else:
            small_run = 0
        z_pow *= z
        if abs(z_pow) > 1e250:
            z_pow_log += math.log(abs(z_pow))
            z_pow = math.copysign(1.0, z_pow)
    if converged and _EPS * abs_sum <= 1e-13 * max(1.0, abs(total)):
        return total
    return wright_derivative(p, z, ctrl)


def wright_derivative(p: WrightParams, z: float,
                      ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """d/dz of the Wright-type function through the index-shift identity.

    The identity expresses the derivative via the delta-1 neighbour and is
    singular at z = 0; callers needing the origin must use
    :func:`wright_derivative_series`.
    """
    if z == 0.0:
        raise DomainError(
            "derivative identity is singular at z=0; "
            "use wright_derivative_series for the origin"
        )
    lowered = WrightParams(p.alpha, p.beta, p.mu, p.delta - 1.0)
    e_low = wright_eval(lowered, z, ctrl)
    e_same = wright_eval(p, z, ctrl)
    return -(e_low + (1.0 - p.delta) * e_same) / (p.beta * z)


def recurrence_residual_6(p: WrightParams, z: float,
                          ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Residual of the three-point index recurrence (test support).

    (1/alpha) e[mu-1, delta] + (1/beta) e[mu, delta-1]
        = ((mu-1)/alpha + (delta-1)/beta) * e[mu, delta].
    Verified by series algebra; holds identically, so the residual is pure
    floating-point noise for any admissible parameters.
    """
    if p.beta == 0.0:
        raise ValueError("recurrence requires beta != 0")
    e_mu = wright_eval(WrightParams(p.alpha, p.beta, p.mu - 1.0, p.delta), z, ctrl)
    e_dl = wright_eval(WrightParams(p.alpha, p.beta, p.mu, p.delta - 1.0), z, ctrl)
    e_00 = wright_eval(p, z, ctrl)
    coeff = (p.mu - 1.0) / p.alpha + (p.delta - 1.0) / p.beta
    return abs(e_mu / p.alpha + e_dl / p.beta - coeff * e_00)


def recurrence_residual_7(p: WrightParams, z: float, k: int, which: str,
                          ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Residual of either index-shift identity (test support).

    which="first":   (1/z) e[-k, delta]  = e[alpha-k, delta-beta]
    which="second":  (1/z) e[mu, -k]     = e[mu+alpha, -k-beta]
    """
    if z == 0.0:
        raise DomainError("shift identities divide by z")
    if k < 0 or k != int(k):
        raise ValueError("k must be a nonnegative integer")
    if which == "first":
        lhs = wright_eval(WrightParams(p.alpha, p.beta, -float(k), p.delta), z, ctrl) / z
        rhs = wright_eval(
            WrightParams(p.alpha, p.beta, p.alpha - k, p.delta - p.beta), z, ctrl
        )
    elif which == "second":
        lhs = wright_eval(WrightParams(p.alpha, p.beta, p.mu, -float(k)), z, ctrl) / z
        rhs = wright_eval(
            WrightParams(p.alpha, p.beta, p.mu + p.alpha, -k - p.beta), z, ctrl
        )
    else:
        raise ValueError("which must be 'first' or 'second'")
    return abs(lhs - rhs)


def wright_series_neg_batch(u, beta: float, delta: float,
                            max_terms: int = 400,
                            tol: float = 1e-16) -> np.ndarray:
    """Vectorised e(-u; 1, beta, 1, delta) for arrays u >= 0 with beta < 1/2.

    Kernel-table workhorse: entries beyond the cancellation wall are set to
    exactly 0.0 (true magnitude there is below ~2e-8 and decaying
    super-exponentially), everything else is summed with compensated
    accumulation.  The zero floor also makes image-sum truncation exactly
    reproducible under enlarged image counts.
    """
    u = np.asarray(u, dtype=float)
    if np.any(u < 0):
        raise DomainError("wright_series_neg_batch expects u >= 0")
    if not 0.0 < beta < 0.5:
        raise DomainError("batch path is specialised to beta in (0, 1/2)")
    out = np.zeros(u.shape, dtype=float)
    wall = series_cancellation_wall(beta)
    mask = u <= wall
    if not np.any(mask):
        return out
    z = -u[mask]
    total = np.zeros(z.shape)
    comp = np.zeros(z.shape)
    power = np.ones(z.shape)  # z^n / n!
    small_run = 0
    for n in range(max_terms):
        g2 = reciprocal_gamma(delta - beta * n)
        term = power * g2
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        if n > 0:
            scale = np.maximum(np.abs(total), 1.0)
            if np.all(np.abs(term) <= tol * scale):
                small_run += 1
                if small_run >= _CONSECUTIVE_SMALL:
                    break
            else:
                small_run = 0
        power = power * z / (n + 1.0)
    else:
        raise NonConvergence("batch series exhausted max_terms")
    out[mask] = total
    return out
