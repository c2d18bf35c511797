"""Entropy measures of doubly truncated lifetimes.

The central quantity is the weighted generalized interval entropy

    H(t1, t2) = 1/(beta - alpha) * log  int_{t1}^{t2} (x f(x) / (F(t2) - F(t1)))**(alpha + beta - 1) dx

with ``beta >= 1`` and ``beta - 1 < alpha < beta``. Closed forms exist for
six families; everything else (and the cross-check) goes through adaptive
quadrature. All logs are natural.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .distributions import (
    Beta1,
    Distribution,
    Exponential,
    Gamma,
    ParetoI,
    Power,
    Uniform,
    Window,
    _checked_log_mass,
    check_window,
)
from .numerics import QuadratureError, QuadratureSpec, integrate_adaptive, log_incomplete_gamma_difference

# integrands here are nonnegative, so a pure relative target is meaningful
ENTROPY_QUAD = QuadratureSpec(abs_tol=1e-300, rel_tol=1e-12, max_depth=400, max_intervals=6000)
SINGULAR_TOL = 1e-8


class DivergentIntegralError(ArithmeticError):
    """An entropy integral is infinite (or numerically not convergent)."""

    def __init__(self, message, endpoint=None):
        super().__init__(message)
        self.endpoint = endpoint


class Method(str, enum.Enum):
    CLOSED_FORM = "closed_form"
    QUADRATURE = "quadrature"


@dataclass(frozen=True)
class EntropyOrder:
    alpha: float
    beta: float

    def __post_init__(self):
        a, b = self.alpha, self.beta
        if not (math.isfinite(a) and math.isfinite(b)):
            raise ValueError("entropy order must be finite")
        if not (b >= 1 and b - 1 < a < b):
            raise ValueError(f"entropy order needs beta >= 1 and beta - 1 < alpha < beta, got ({a}, {b})")

    @property
    def exponent(self) -> float:
        """``alpha + beta - 1`` (always > 0)."""
        return self.alpha + self.beta - 1.0

    @property
    def gap(self) -> float:
        """``beta - alpha`` (always in (0, 1])."""
        return self.beta - self.alpha

    @property
    def regime(self) -> int:
        """Sign of ``alpha + beta - 2``."""
        s = self.alpha + self.beta - 2.0
        return 0 if s == 0 else (1 if s > 0 else -1)


@dataclass(frozen=True)
class EntropyValue:
    value: float
    method: Method
    est_error: float = 0.0

    def __float__(self):
        return self.value


# ----------------------------------------------------------------------
# helpers
# ----------------------------------------------------------------------

def _log_diff_pow(t1, t2, p):
    """``log(t2**p - t1**p)`` for ``p != 0``, ``0 <= t1 < t2``; sign-corrected for ``p < 0``."""
    if p > 0:
        if t1 == 0:
            return p * math.log(t2)
        return p * math.log(t2) + math.log(-math.expm1(p * (math.log(t1) - math.log(t2))))
    # p < 0: t1**p - t2**p is the positive difference
    if math.isinf(t2):
        return p * math.log(t1)
    return p * math.log(t1) + math.log(-math.expm1(p * (math.log(t2) - math.log(t1))))


def _quad_log_integral(logintegrand, t1, t2, spec=ENTROPY_QUAD, what="integral"):
    """``log int exp(logintegrand)`` with the integrand rescaled by a probe maximum."""
    if math.isfinite(t2):
        probe = np.linspace(t1, t2, 41)[1:-1]
    else:
        probe = t1 + np.geomspace(1e-6, 1e6, 61)
    with np.errstate(all="ignore"):
        vals = logintegrand(probe)
    finite = vals[np.isfinite(vals)]
    shift = float(np.max(finite)) if finite.size else 0.0

    def g(x):
        with np.errstate(all="ignore"):
            v = logintegrand(x) - shift
        return np.where(np.isneginf(v), 0.0, np.exp(v))

    try:
        val, err = integrate_adaptive(g, t1, t2, spec, full_output=True)
    except QuadratureError as exc:
        endpoint = t2 if math.isinf(t2) else None
        raise DivergentIntegralError(f"{what} over ({t1}, {t2}) did not converge: {exc}",
                                     endpoint=endpoint) from exc
    if not val > 0 or not math.isfinite(val):
        raise DivergentIntegralError(f"{what} over ({t1}, {t2}) is not positive and finite ({val})")
    return shift + math.log(val), err / val


def _quad_signed(integrand, t1, t2, spec, what):
    try:
        return integrate_adaptive(integrand, t1, t2, spec, full_output=True)
    except QuadratureError as exc:
        raise DivergentIntegralError(f"{what} over ({t1}, {t2}) did not converge: {exc}",
                                     endpoint=t2 if math.isinf(t2) else None) from exc


def _resolve(model, w):
    if w is None:
        lo, hi = model.support
        w = Window(lo, hi)
    return w


# ----------------------------------------------------------------------
# WGIE
# ----------------------------------------------------------------------

def log_wgie_integral_quadrature(model: Distribution, w: Window, exponent: float,
                                 spec: QuadratureSpec = ENTROPY_QUAD) -> tuple[float, float]:
    """``log int_w (x f~(x))**exponent dx`` and its relative error, by quadrature."""
    logm = _checked_log_mass(model, w)

    def logintegrand(x):
        with np.errstate(divide="ignore"):
            return exponent * (np.log(x) + model.logpdf(x) - logm)

    return _quad_log_integral(logintegrand, w.t1, w.t2, spec, what="WGIE integral")


def _pareto_tail_check(model, w, e):
    if isinstance(model, ParetoI) and math.isinf(w.t2) and model.b * e <= 1.0:
        raise DivergentIntegralError(
            f"WGIE integral diverges at t2=inf for {model}: needs b*(alpha+beta-1) > 1",
            endpoint=math.inf)


def log_wgie_integral_closed_form(model: Distribution, w: Window, exponent: float):
    """Closed-form ``log int_w (x f~)**e``, or ``None`` when no usable formula exists."""
    e = exponent
    t1, t2 = w.t1, w.t2
    if isinstance(model, Exponential):
        th = model.theta
        logz = -th * t1 + (0.0 if math.isinf(t2) else math.log(-math.expm1(-th * (t2 - t1))))
        s = th * e
        lo_arg = s * t1
        hi_arg = s * t2 if math.isfinite(t2) else math.inf
        return (log_incomplete_gamma_difference(e + 1.0, lo_arg, hi_arg)
                - math.log(th) - (e + 1.0) * math.log(e) - e * logz)
    if isinstance(model, Gamma):
        n, b = model.shape, model.rate
        be = b * e
        k = n * e + 1.0
        hi1 = be * t2 if math.isfinite(t2) else math.inf
        hi2 = b * t2 if math.isfinite(t2) else math.inf
        return (n * e * math.log(b) - k * math.log(be)
                + log_incomplete_gamma_difference(k, be * t1, hi1)
                - e * log_incomplete_gamma_difference(n, b * t1, hi2))
    if isinstance(model, Uniform):
        return _log_diff_pow(t1, t2, e + 1.0) - math.log(e + 1.0) - e * math.log(t2 - t1)
    if isinstance(model, Power):
        a, b = model.a, model.b
        p = b * e + 1.0
        logz = _log_diff_pow(t1 / a, t2 / a, b)
        return e * math.log(b) - b * e * math.log(a) - math.log(p) + _log_diff_pow(t1, t2, p) - e * logz
    if isinstance(model, Beta1):
        c = model.c
        p = c * e + 1.0
        return e * math.log(c) - math.log(p) + _log_diff_pow(t1, t2, p) - e * _log_diff_pow(t1, t2, c)
    if isinstance(model, ParetoI):
        a, b = model.a, model.b
        p = 1.0 - b * e
        if abs(p) < SINGULAR_TOL:
            return None
        _pareto_tail_check(model, w, e)
        # (a/t1)^b - (a/t2)^b
        logz = _log_diff_pow(t1 / a, t2 / a, -b)
        return e * (math.log(b) + b * math.log(a)) - math.log(abs(p)) + _log_diff_pow(t1, t2, p) - e * logz
    return None


def closed_form_wgie(model: Distribution, w: Window, order: EntropyOrder) -> EntropyValue | None:
    """Closed-form WGIE for the Uniform, Exponential, Power, Beta, Pareto I and
    Gamma families; ``None`` when the family has none or the formula is singular.
    """
    check_window(model, w)
    _checked_log_mass(model, w)
    logi = log_wgie_integral_closed_form(model, w, order.exponent)
    if logi is None:
        return None
    return EntropyValue(logi / order.gap, Method.CLOSED_FORM, 0.0)


def wgie(model: Distribution, w: Window | None, order: EntropyOrder, method: str = "auto",
         spec: QuadratureSpec = ENTROPY_QUAD) -> EntropyValue:
    """Weighted generalized interval entropy of ``model`` truncated to ``w``.

    ``method`` is ``"auto"`` (closed form when available), ``"closed_form"``
    or ``"quadrature"``. ``w=None`` means the whole support.
    """
    w = _resolve(model, w)
    check_window(model, w)
    _pareto_tail_check(model, w, order.exponent)
    if method in ("auto", "closed_form", Method.CLOSED_FORM):
        cf = closed_form_wgie(model, w, order)
        if cf is not None:
            return cf
        if method != "auto":
            raise ValueError(f"no closed form for {model} at {order}")
    logi, rel = log_wgie_integral_quadrature(model, w, order.exponent, spec)
    return EntropyValue(logi / order.gap, Method.QUADRATURE, rel / order.gap)


def wgie_integral(model: Distribution, w: Window, order: EntropyOrder) -> float:
    """``exp((beta - alpha) H)``, the integral inside the logarithm."""
    return math.exp(order.gap * wgie(model, w, order).value)


def weighted_generalized_entropy(model: Distribution, order: EntropyOrder) -> EntropyValue:
    """WGIE over the whole support (the untruncated weighted measure)."""
    return wgie(model, None, order)


def generalized_entropy(model: Distribution, order: EntropyOrder) -> EntropyValue:
    """``1/(beta - alpha) log int f**(alpha + beta - 1)`` over the support."""
    lo, hi = model.support
    e = order.exponent
    logi, rel = _quad_log_integral(lambda x: e * model.logpdf(x), lo, hi, what="generalized entropy integral")
    return EntropyValue(logi / order.gap, Method.QUADRATURE, rel / order.gap)


# ----------------------------------------------------------------------
# weighted Renyi family (beta = 1, any 0 < alpha != 1)
# ----------------------------------------------------------------------

def _check_renyi_alpha(alpha):
    if not (alpha > 0 and math.isfinite(alpha)) or alpha == 1:
        raise ValueError(f"weighted Renyi entropy needs 0 < alpha != 1, got {alpha}")


def _renyi_on(model, t1, t2, logm, alpha):
    def logintegrand(x):
        with np.errstate(divide="ignore"):
            return alpha * (np.log(x) + model.logpdf(x) - logm)
    logi, rel = _quad_log_integral(logintegrand, t1, t2, what="weighted Renyi integral")
    return EntropyValue(logi / (1.0 - alpha), Method.QUADRATURE, rel / abs(1.0 - alpha))


def weighted_renyi(model: Distribution, alpha: float) -> EntropyValue:
    _check_renyi_alpha(alpha)
    lo, hi = model.support
    return _renyi_on(model, lo, hi, 0.0, alpha)


def weighted_residual_renyi(model: Distribution, t: float, alpha: float) -> EntropyValue:
    """Weighted Renyi entropy of the residual life ``X | X > t``."""
    _check_renyi_alpha(alpha)
    lo, hi = model.support
    if not lo <= t < hi:
        raise ValueError(f"t={t} must lie in the support {model.support}")
    return _renyi_on(model, t, hi, math.log(model.sf(t)), alpha)


def weighted_past_renyi(model: Distribution, t: float, alpha: float) -> EntropyValue:
    """Weighted Renyi entropy of the past life ``X | X < t``."""
    _check_renyi_alpha(alpha)
    lo, hi = model.support
    if not lo < t <= hi:
        raise ValueError(f"t={t} must lie in the support {model.support}")
    logm = 0.0 if t >= hi else math.log(model.cdf(t))
    return _renyi_on(model, lo, t, logm, alpha)


# ----------------------------------------------------------------------
# Shannon-type interval measures
# ----------------------------------------------------------------------

def _shannon_parts(model, w, weight_power):
    logm = _checked_log_mass(model, w)

    def integrand(x):
        with np.errstate(all="ignore"):
            lf = model.logpdf(x) - logm
            out = np.exp(lf) * lf
            if weight_power:
                out = out * x
        return np.where(np.isneginf(lf), 0.0, out)

    val, err = _quad_signed(integrand, w.t1, w.t2, ENTROPY_QUAD_SIGNED, "Shannon integral")
    return -val


# signed integrands need an absolute floor
ENTROPY_QUAD_SIGNED = QuadratureSpec(abs_tol=1e-13, rel_tol=1e-11, max_depth=400, max_intervals=6000)


def interval_shannon(model: Distribution, w: Window) -> float:
    """``-int f~ log f~`` over the window (f~ the truncated density)."""
    check_window(model, w)
    return _shannon_parts(model, w, 0)


def weighted_interval_entropy(model: Distribution, w: Window) -> float:
    """``-int x f~(x) log f~(x) dx`` over the window (weight outside the log)."""
    check_window(model, w)
    return _shannon_parts(model, w, 1)


def conditional_moment(model: Distribution, w: Window, k: float) -> float:
    """``E[X**k | t1 < X < t2]``."""
    logm = _checked_log_mass(model, w)

    def logintegrand(x):
        with np.errstate(divide="ignore"):
            return k * np.log(x) + model.logpdf(x) - logm

    logi, _ = _quad_log_integral(logintegrand, w.t1, w.t2, what="conditional moment")
    return math.exp(logi)


def conditional_log_mean(model: Distribution, w: Window) -> float:
    """``E[log X | t1 < X < t2]``."""
    logm = _checked_log_mass(model, w)

    def integrand(x):
        with np.errstate(all="ignore"):
            lf = model.logpdf(x) - logm
            out = np.exp(lf) * np.log(x)
        return np.where(np.isneginf(lf), 0.0, out)

    val, _ = _quad_signed(integrand, w.t1, w.t2, ENTROPY_QUAD_SIGNED, "E[log X]")
    return val
