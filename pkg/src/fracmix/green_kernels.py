"""Image-series Green's function of the fractional heat problem and its kernels.

The Dirichlet Green's function on the unit interval is an alternating image
sum of the self-similar kernel

    G(x, t, xi, eta) = ((t-eta)^(beta-1) / 2) * sum_n [ e_b(-|x-xi+2n| / (t-eta)^beta)
                                                      - e_b(-|x+xi+2n| / (t-eta)^beta) ],

with beta = lam/2 and e_d(z) the Wright-type function of indices
(alpha=1, beta, mu=1, delta=d) at d = beta.  Differentiation in x shifts the
upper delta index down by beta per order (termwise rule at alpha = 1), and the
time-convolved kernel that propagates initial data,

    Gbar(x, xi, t) = (1/Gamma(1-lam)) int_0^t t1^(-lam) G(x, t, xi, t1) dt1,

collapses to the closed image form (t^(-beta)/2) * sum_n [e_{1-beta}(...) -
e_{1-beta}(...)] by a Laplace-transform identity; the literal singular time
integral is kept alongside (:func:`green_gbar_quad`) as an independent
cross-check.  The boundary-flux kernels are image sums of e_{1-beta} with a
single singular term (t-eta)^(-beta)/Gamma(1-beta).

Image truncation is adaptive: a term is dropped only when its argument lies
beyond the super-exponential decay cutoff (and past the double-precision
cancellation wall, where the true magnitude is below ~1e-8 and still
shrinking), which also makes evaluations bit-stable under enlarged image
budgets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .errors import DomainError
from .special_functions import (
    DEFAULT_CONTROL,
    SeriesControl,
    reciprocal_gamma,
    series_cancellation_wall,
    wright_series_neg_batch,
)


@dataclass(frozen=True)
class GreenSeriesConfig:
    """Truncation control for the image sums."""

    n_images: int = 25
    tail_tolerance: float = 1e-14
    series_ctrl: SeriesControl = field(default_factory=lambda: DEFAULT_CONTROL)

    def __post_init__(self):
        if self.n_images < 1:
            raise ValueError("n_images must be >= 1")
        if self.tail_tolerance <= 0:
            raise ValueError("tail_tolerance must be positive")


DEFAULT_GREEN = GreenSeriesConfig()


def _argument_cutoff(beta: float, cfg: GreenSeriesConfig) -> float:
    """Largest Wright argument magnitude that still contributes.

    Combines the decay estimate exp(-B u^(1/(1-beta))) < tail_tolerance with
    the double-precision cancellation wall.
    """
    big_b = (1.0 - beta) * beta ** (beta / (1.0 - beta))
    decay = (-math.log(cfg.tail_tolerance) / big_b) ** (1.0 - beta)
    return min(decay, series_cancellation_wall(beta))


def _n_images(beta: float, rb_max: float, a_max: float, cfg: GreenSeriesConfig) -> int:
    """Smallest image count whose dropped terms all exceed the decay cutoff."""
    cut = _argument_cutoff(beta, cfg)
    needed = int(math.ceil((cut * rb_max + a_max) / 2.0)) + 1
    return max(1, min(cfg.n_images, needed))


def _check_lambda(lam: float) -> float:
    if not 0.0 < lam < 1.0:
        raise DomainError("fractional order lam must lie in (0, 1)")
    return 0.5 * lam


def image_sum(a, rbeta, beta: float, delta: float, signed: bool,
              cfg: GreenSeriesConfig = DEFAULT_GREEN,
              n_img: int | None = None) -> np.ndarray:
    """sum_n [sgn(a+2n)] e_delta(-|a+2n| / rbeta) over the adaptive image range.

    a and rbeta broadcast; rbeta must be positive.  This is the shared engine
    behind every kernel in this module.  A caller combining two image sums
    should pass a common n_img so that mirrored terms pair up exactly.
    """
    a = np.asarray(a, dtype=float)
    rbeta = np.asarray(rbeta, dtype=float)
    a_b, rb_b = np.broadcast_arrays(a, rbeta)
    out = np.zeros(a_b.shape)
    if n_img is None:
        n_img = _n_images(beta, float(rb_b.max()), float(np.abs(a_b).max()), cfg)
    for n in range(-n_img, n_img + 1):
        shifted = a_b + 2.0 * n
        u = np.abs(shifted) / rb_b
        vals = wright_series_neg_batch(u, beta, delta,
                                       max_terms=cfg.series_ctrl.max_terms,
                                       tol=cfg.series_ctrl.term_tolerance)
        if signed:
            vals = vals * np.sign(shifted)
        out += vals
    return out


def _paired_image_sums(a_diff, a_sum, rbeta, beta, delta, signed, cfg):
    """The two image sums of a Dirichlet pair, truncated at one common range.

    A shared image count keeps the two sums in exact mirror correspondence, so
    boundary cancellation (x = 0 and x = 1) holds to the last bit; any term
    left unpaired at the range edge lies beyond the hard decay cutoff and is
    exactly zero.
    """
    a_diff = np.asarray(a_diff, dtype=float)
    a_sum = np.asarray(a_sum, dtype=float)
    rbeta = np.asarray(rbeta, dtype=float)
    a_max = max(float(np.abs(a_diff).max()), float(np.abs(a_sum).max()))
    n_img = _n_images(beta, float(rbeta.max()), a_max, cfg)
    first = image_sum(a_diff, rbeta, beta, delta, signed, cfg, n_img=n_img)
    second = image_sum(a_sum, rbeta, beta, delta, signed, cfg, n_img=n_img)
    return first, second


def _scalar_or_array(value, *inputs):
    if any(isinstance(v, np.ndarray) for v in inputs):
        return value
    return float(value)


def green_g(x, t, xi, eta, lam: float, cfg: GreenSeriesConfig = DEFAULT_GREEN):
    """Dirichlet Green's function of the fractional heat problem on [0, 1].

    On the lateral boundaries (x or xi exactly 0 or 1) the mirrored image
    pairs cancel identically, so the exact zero is returned outright instead
    of a rounded difference of the two sums.
    """
    beta = _check_lambda(lam)
    r = np.asarray(t, dtype=float) - np.asarray(eta, dtype=float)
    if np.any(r <= 0):
        raise DomainError("green_g requires t > eta")
    rb = r**beta
    diff, summ = _paired_image_sums(np.asarray(x) - np.asarray(xi),
                                    np.asarray(x) + np.asarray(xi),
                                    rb, beta, beta, False, cfg)
    val = 0.5 * r ** (beta - 1.0) * (diff - summ)
    val = np.where(_on_lateral_boundary(x, xi), 0.0, val)
    return _scalar_or_array(val, *(np.asarray(v) for v in (x, t, xi, eta)))


def _on_lateral_boundary(x, xi) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    xi = np.asarray(xi, dtype=float)
    return (x == 0.0) | (x == 1.0) | (xi == 0.0) | (xi == 1.0)


def green_gx(x, t, xi, eta, lam: float, cfg: GreenSeriesConfig = DEFAULT_GREEN):
    """x-derivative of :func:`green_g` (termwise image differentiation)."""
    beta = _check_lambda(lam)
    r = np.asarray(t, dtype=float) - np.asarray(eta, dtype=float)
    if np.any(r <= 0):
        raise DomainError("green_gx requires t > eta")
    rb = r**beta
    diff, summ = _paired_image_sums(np.asarray(x) - np.asarray(xi),
                                    np.asarray(x) + np.asarray(xi),
                                    rb, beta, 0.0, True, cfg)
    val = 0.5 / r * (summ - diff)
    return _scalar_or_array(val, *(np.asarray(v) for v in (x, t, xi, eta)))


def green_g_xi_boundary(x, t, eta, lam: float, boundary: int,
                        cfg: GreenSeriesConfig = DEFAULT_GREEN):
    """G_xi(x, t, boundary, eta) for boundary in {0, 1} (flux of the data kernels)."""
    beta = _check_lambda(lam)
    if boundary not in (0, 1):
        raise ValueError("boundary must be 0 or 1")
    r = np.asarray(t, dtype=float) - np.asarray(eta, dtype=float)
    if np.any(r <= 0):
        raise DomainError("green_g_xi_boundary requires t > eta")
    rb = r**beta
    a = np.asarray(x, dtype=float) + float(boundary)
    val = image_sum(a, rb, beta, 0.0, True, cfg) / r
    return _scalar_or_array(val, *(np.asarray(v) for v in (x, t, eta)))


def green_gbar(x, t, xi, lam: float, cfg: GreenSeriesConfig = DEFAULT_GREEN):
    """Initial-data kernel Gbar(x, xi, t): closed image form.

    Equals (1/Gamma(1-lam)) int_0^t t1^(-lam) G(x, t, xi, t1) dt1 exactly;
    see :func:`green_gbar_quad` for the literal quadrature route.
    """
    beta = _check_lambda(lam)
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr <= 0):
        raise DomainError("green_gbar requires t > 0")
    tb = t_arr**beta
    diff, summ = _paired_image_sums(np.asarray(x) - np.asarray(xi),
                                    np.asarray(x) + np.asarray(xi),
                                    tb, beta, 1.0 - beta, False, cfg)
    val = 0.5 * t_arr ** (-beta) * (diff - summ)
    val = np.where(_on_lateral_boundary(x, xi), 0.0, val)
    return _scalar_or_array(val, *(np.asarray(v) for v in (x, t, xi)))


def green_gbar_quad(x: float, t: float, xi: float, lam: float,
                    cfg: GreenSeriesConfig = DEFAULT_GREEN) -> float:
    """Literal weakly singular time integral defining Gbar (cross-check path).

    Product-integration quadrature: the t1^(-lam) endpoint factor and the
    (t - t1)^(beta-1) kernel factor are both absorbed into algebraic
    quadrature weights rather than sampled.
    """
    beta = _check_lambda(lam)
    if t <= 0:
        raise DomainError("green_gbar_quad requires t > 0")

    def g_smooth(t1):
        # (t - t1)^(1-beta) * G folded analytically: the image sums alone.
        rb = max(t - t1, 0.0) ** beta
        if rb == 0.0:
            # all images decayed except a coincident one, which needs x == xi
            return 0.5 * reciprocal_gamma(beta) if x == xi else 0.0
        diff, summ = _paired_image_sums(x - xi, x + xi, np.asarray(rb),
                                        beta, beta, False, cfg)
        return 0.5 * float(diff - summ)

    def g_plain(t1):
        return (t - t1) ** (beta - 1.0) * g_smooth(t1)

    def g_weighted(t1):
        return t1 ** (-lam) * g_smooth(t1)

    lower, _ = integrate.quad(g_plain, 0.0, 0.5 * t, weight="alg",
                              wvar=(-lam, 0.0), limit=200)
    upper, _ = integrate.quad(g_weighted, 0.5 * t, t, weight="alg",
                              wvar=(0.0, beta - 1.0), limit=200)
    return (lower + upper) / math.gamma(1.0 - lam)


def green_gbar_x(x, t, xi, lam: float, cfg: GreenSeriesConfig = DEFAULT_GREEN):
    """x-derivative of the initial-data kernel Gbar."""
    beta = _check_lambda(lam)
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr <= 0):
        raise DomainError("green_gbar_x requires t > 0")
    tb = t_arr**beta
    diff, summ = _paired_image_sums(np.asarray(x) - np.asarray(xi),
                                    np.asarray(x) + np.asarray(xi),
                                    tb, beta, 1.0 - 2.0 * beta, True, cfg)
    val = 0.5 * t_arr ** (-2.0 * beta) * (summ - diff)
    return _scalar_or_array(val, *(np.asarray(v) for v in (x, t, xi)))


def kernel_k1(t, eta, beta: float, cfg: GreenSeriesConfig = DEFAULT_GREEN):
    """Boundary self-coupling kernel: singular n = 0 term plus bounded images.

    K1(t, eta) = (t-eta)^(-beta) [ 1/Gamma(1-beta) + sum_{n != 0} e_{1-beta}(-2|n|/(t-eta)^beta) ].
    """
    r = np.asarray(t, dtype=float) - np.asarray(eta, dtype=float)
    if np.any(r <= 0):
        raise DomainError("kernel_k1 requires t > eta")
    val = r ** (-beta) * reciprocal_gamma(1.0 - beta) + _k1_bar_from_r(r, beta, cfg)
    return _scalar_or_array(val, np.asarray(t), np.asarray(eta))


def kernel_k1_bar(t, eta, beta: float, cfg: GreenSeriesConfig = DEFAULT_GREEN):
    """K1 with its singular n = 0 term removed; continuous down to t = eta."""
    r = np.asarray(t, dtype=float) - np.asarray(eta, dtype=float)
    if np.any(r <= 0):
        raise DomainError("kernel_k1_bar requires t > eta")
    return _scalar_or_array(_k1_bar_from_r(r, beta, cfg), np.asarray(t), np.asarray(eta))


def _k1_bar_from_r(r: np.ndarray, beta: float, cfg: GreenSeriesConfig) -> np.ndarray:
    if not 0.0 < beta < 0.5:
        raise DomainError("boundary kernels need beta = lam/2 in (0, 1/2)")
    rb = r**beta
    n_img = _n_images(beta, float(np.max(rb)), 0.0, cfg)
    total = np.zeros(np.shape(r))
    for n in range(1, n_img + 1):
        total += 2.0 * wright_series_neg_batch(2.0 * n / rb, beta, 1.0 - beta)
    return r ** (-beta) * total


def kernel_k2(t, eta, beta: float, cfg: GreenSeriesConfig = DEFAULT_GREEN):
    """Boundary cross-coupling kernel (odd image distances); vanishes at t = eta."""
    r = np.asarray(t, dtype=float) - np.asarray(eta, dtype=float)
    if np.any(r <= 0):
        raise DomainError("kernel_k2 requires t > eta")
    if not 0.0 < beta < 0.5:
        raise DomainError("boundary kernels need beta = lam/2 in (0, 1/2)")
    rb = r**beta
    n_img = _n_images(beta, float(np.max(rb)), 1.0, cfg)
    total = np.zeros(np.shape(r))
    for n in range(-n_img, n_img + 1):
        total += wright_series_neg_batch(abs(2 * n + 1) / rb, beta, 1.0 - beta)
    val = r ** (-beta) * total
    return _scalar_or_array(val, np.asarray(t), np.asarray(eta))


def dirichlet_step_response(x, t, lam: float, cfg: GreenSeriesConfig = DEFAULT_GREEN):
    """J(x, t) = int_0^t G_xi(x, t, 0, eta) d eta, the unit-boundary-data response.

    Image form: sum_{n>=0} E(x+2n) - sum_{m>=1} E(2m-x) with
    E(a) = e_1(-a / t^beta); at beta = 1/2 this is the classical staggered
    complementary-error-function sum.  Used to split the boundary-data jump
    off the trace integrals so that near-boundary evaluation stays accurate.
    """
    beta = _check_lambda(lam)
    x_arr = np.asarray(x, dtype=float)
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr <= 0):
        raise DomainError("dirichlet_step_response requires t > 0")
    xb, tb = np.broadcast_arrays(x_arr, t_arr**beta)
    out = np.zeros(xb.shape)
    n_img = _n_images(beta, float(tb.max()), 2.0, cfg)
    for n in range(0, n_img + 1):
        out += wright_series_neg_batch((xb + 2.0 * n) / tb, beta, 1.0)
    for m in range(1, n_img + 1):
        out -= wright_series_neg_batch((2.0 * m - xb) / tb, beta, 1.0)
    return _scalar_or_array(out, x_arr, t_arr)
