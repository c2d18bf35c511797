"""Executable bound, monotonicity and uniqueness results for the WGIE.

Each ``bound_*`` function returns :class:`BoundReport` objects recording
whether the theorem's hypothesis holds at the given point, both sides of
the inequality, and whether the inequality is satisfied. Checkers never
skip the evaluation when the hypothesis fails; callers filter on
``hypothesis_holds``.

Partial derivatives of H are central differences with step
``1e-5 * max(1, t)`` (one-sided at support edges).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .distributions import (
    Distribution,
    LogConcavity,
    Monotonicity,
    Window,
    density_direction,
    gfr,
    structure_flags,
)
from .entropy import (
    EntropyOrder,
    conditional_log_mean,
    conditional_moment,
    interval_shannon,
    wgie,
)
from .numerics import RootBracket, find_roots

MARGIN_TOL = -1e-8
DEAD_ZONE = 1e-7
ROOT_CAP = 50.0


class Theorem(str, enum.Enum):
    T_MONOTONE_T1 = "T_monotone_t1"
    T_MONOTONE_T2 = "T_monotone_t2"
    T_GFR_MONOTONE_1 = "T_gfr_monotone_1"
    T_GFR_MONOTONE_2 = "T_gfr_monotone_2"
    T_DENSITY_MONOTONE_UPPER = "T_density_monotone_upper"
    T_DENSITY_MONOTONE_LOWER = "T_density_monotone_lower"
    P_EXP_INEQUALITY = "P_exp_inequality"
    T_LOGSUM = "T_logsum"


class Direction(str, enum.Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"
    AMBIGUOUS = "ambiguous"


@dataclass(frozen=True)
class BoundReport:
    theorem_id: Theorem
    hypothesis_holds: bool
    lhs: float
    rhs: float
    # ">=" means the theorem claims lhs >= rhs
    sense: str
    satisfied: bool
    margin: float
    informative: bool = True
    note: str = ""


def _report(theorem, hypothesis, lhs, rhs, sense, note=""):
    margin = lhs - rhs if sense == ">=" else rhs - lhs
    informative = bool(math.isfinite(lhs) and math.isfinite(rhs))
    if not informative:
        margin = math.nan
    satisfied = bool(informative and margin >= MARGIN_TOL)
    return BoundReport(theorem, bool(hypothesis), float(lhs), float(rhs), sense, satisfied,
                       float(margin), informative, note)


# ----------------------------------------------------------------------
# derivatives of H
# ----------------------------------------------------------------------

def _step(t):
    return 1e-5 * max(1.0, abs(t))


def _H(model, t1, t2, order):
    return wgie(model, Window(t1, t2), order).value


def partial_t1(model: Distribution, w: Window, order: EntropyOrder) -> float:
    """dH/dt1 by central differences (forward at the lower support edge)."""
    h = _step(w.t1)
    lo = model.support[0]
    if w.t1 - h < lo:
        f0, f1, f2 = (_H(model, w.t1 + k * h, w.t2, order) for k in (0, 1, 2))
        return (-3 * f0 + 4 * f1 - f2) / (2 * h)
    return (_H(model, w.t1 + h, w.t2, order) - _H(model, w.t1 - h, w.t2, order)) / (2 * h)


def partial_t2(model: Distribution, w: Window, order: EntropyOrder) -> float:
    """dH/dt2 by central differences (backward at the upper support edge)."""
    h = _step(w.t2)
    hi = model.support[1]
    if w.t2 + h > hi:
        f0, f1, f2 = (_H(model, w.t1, w.t2 - k * h, order) for k in (0, 1, 2))
        return (3 * f0 - 4 * f1 + f2) / (2 * h)
    return (_H(model, w.t1, w.t2 + h, order) - _H(model, w.t1, w.t2 - h, order)) / (2 * h)


def _direction(d):
    if d > DEAD_ZONE:
        return Direction.INCREASING
    if d < -DEAD_ZONE:
        return Direction.DECREASING
    return Direction.AMBIGUOUS


def direction_in_t1(model, w, order) -> Direction:
    return _direction(partial_t1(model, w, order))


def direction_in_t2(model, w, order) -> Direction:
    return _direction(partial_t2(model, w, order))


# ----------------------------------------------------------------------
# interval monotonicity under a log-concave cdf
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    i: int
    j: int
    t1: float
    t2: float
    delta: float


@dataclass
class MonotonicityReport:
    hypothesis_holds: bool
    order: EntropyOrder
    n_pairs_t1: int = 0
    n_pairs_t2: int = 0
    # H should be nondecreasing in t2 and nonincreasing in t1
    t2_violations: list = field(default_factory=list)
    t1_violations: list = field(default_factory=list)
    increases_in_t1: int = 0
    decreases_in_t1: int = 0
    increases_in_t2: int = 0
    decreases_in_t2: int = 0

    @property
    def ok(self) -> bool:
        return not self.t1_violations and not self.t2_violations

    @staticmethod
    def _trend(up, down):
        if up and not down:
            return Direction.INCREASING
        if down and not up:
            return Direction.DECREASING
        return Direction.AMBIGUOUS

    @property
    def trend_t1(self) -> Direction:
        return self._trend(self.increases_in_t1, self.decreases_in_t1)

    @property
    def trend_t2(self) -> Direction:
        return self._trend(self.increases_in_t2, self.decreases_in_t2)


def wgie_grid(model: Distribution, t1_grid, t2_grid, order: EntropyOrder) -> np.ndarray:
    """H on the grid; NaN where ``t1 >= t2``."""
    t1_grid = np.asarray(t1_grid, dtype=float)
    t2_grid = np.asarray(t2_grid, dtype=float)
    out = np.full((len(t1_grid), len(t2_grid)), np.nan)
    for i, a in enumerate(t1_grid):
        for j, b in enumerate(t2_grid):
            if a < b:
                out[i, j] = _H(model, float(a), float(b), order)
    return out


def check_interval_monotonicity(model: Distribution, t1_grid, t2_grid, order: EntropyOrder,
                                rel_tol: float = 1e-9) -> MonotonicityReport:
    """Check on a grid that H grows as the window widens.

    The conclusion tested: H nondecreasing in t2 for fixed t1 and
    nonincreasing in t1 for fixed t2. The hypothesis is a log-concave cdf and
    ``alpha + beta < 2``; the check runs either way.
    """
    if len(t1_grid) < 2 or len(t2_grid) < 2:
        raise ValueError("need at least 2 grid points per axis")
    flags = structure_flags(model)
    hyp = flags.cdf_log_concave is LogConcavity.YES and order.regime < 0
    H = wgie_grid(model, t1_grid, t2_grid, order)
    rep = MonotonicityReport(hypothesis_holds=hyp, order=order)
    t1g = np.asarray(t1_grid, dtype=float)
    t2g = np.asarray(t2_grid, dtype=float)
    for i in range(H.shape[0]):
        for j in range(H.shape[1] - 1):
            a, b = H[i, j], H[i, j + 1]
            if np.isnan(a) or np.isnan(b):
                continue
            rep.n_pairs_t2 += 1
            d = b - a
            tol = rel_tol * max(1.0, abs(a))
            if d > tol:
                rep.increases_in_t2 += 1
            elif d < -tol:
                rep.decreases_in_t2 += 1
                rep.t2_violations.append(Violation(i, j, float(t1g[i]), float(t2g[j]), float(d)))
    for j in range(H.shape[1]):
        for i in range(H.shape[0] - 1):
            a, b = H[i, j], H[i + 1, j]
            if np.isnan(a) or np.isnan(b):
                continue
            rep.n_pairs_t1 += 1
            d = b - a
            tol = rel_tol * max(1.0, abs(a))
            if d > tol:
                rep.increases_in_t1 += 1
                rep.t1_violations.append(Violation(i, j, float(t1g[i]), float(t2g[j]), float(d)))
            elif d < -tol:
                rep.decreases_in_t1 += 1
    rep.t1_violations.sort(key=lambda v: (v.i, v.j))
    rep.t2_violations.sort(key=lambda v: (v.i, v.j))
    return rep


# ----------------------------------------------------------------------
# bounds from monotonicity of H
# ----------------------------------------------------------------------

def _log_or_nan(v):
    return math.log(v) if v > 0 else -math.inf


def bound_t1_monotone(model: Distribution, w: Window, order: EntropyOrder,
                      direction: Direction | str | None = None) -> BoundReport:
    """If H increases (decreases) in t1 then
    H >= (<=) 1/(b-a) log[t1**e h1**(e-1) / e], e = alpha + beta - 1.

    ``direction`` defaults to the finite-difference estimate; a supplied
    direction that disagrees with the estimate marks the hypothesis false.
    """
    e, g = order.exponent, order.gap
    detected = direction_in_t1(model, w, order)
    direction = detected if direction is None else Direction(direction)
    hyp = direction is not Direction.AMBIGUOUS and direction == detected
    H = _H(model, w.t1, w.t2, order)
    h1 = gfr(model, w).h1
    if not math.isfinite(h1):
        raise ArithmeticError(f"h1 is not finite at {w.as_tuple()}")
    rhs = (e * _log_or_nan(w.t1) + (e - 1) * _log_or_nan(h1) - math.log(e)) / g
    sense = ">=" if direction is Direction.INCREASING else "<="
    return _report(Theorem.T_MONOTONE_T1, hyp, H, rhs, sense, note=f"detected {detected.value}")


def bound_t2_monotone(model: Distribution, w: Window, order: EntropyOrder,
                      direction: Direction | str | None = None) -> BoundReport:
    """If H increases (decreases) in t2 then
    H <= (>=) 1/(b-a) log[t2**e h2**(e-1) / e].
    """
    e, g = order.exponent, order.gap
    detected = direction_in_t2(model, w, order)
    direction = detected if direction is None else Direction(direction)
    hyp = direction is not Direction.AMBIGUOUS and direction == detected
    H = _H(model, w.t1, w.t2, order)
    h2 = gfr(model, w).h2
    if not math.isfinite(h2):
        raise ArithmeticError(f"h2 is not finite at {w.as_tuple()}")
    rhs = (e * _log_or_nan(w.t2) + (e - 1) * _log_or_nan(h2) - math.log(e)) / g
    sense = "<=" if direction is Direction.INCREASING else ">="
    return _report(Theorem.T_MONOTONE_T2, hyp, H, rhs, sense, note=f"detected {detected.value}")


# ----------------------------------------------------------------------
# bounds from GFR monotonicity
# ----------------------------------------------------------------------

def _gfr_directions(model, w):
    h = _step(w.t1)
    lo, hi = model.support
    a = max(w.t1 - h, lo) if w.t1 - h > lo else w.t1
    b = w.t1 + h
    d1 = (gfr(model, Window(b, w.t2)).h1 - gfr(model, Window(a, w.t2)).h1) / (b - a)
    k = _step(w.t2)
    c = w.t2 - k
    d = min(w.t2 + k, hi) if w.t2 + k < hi else w.t2
    d2 = (gfr(model, Window(w.t1, d)).h2 - gfr(model, Window(w.t1, c)).h2) / (d - c)
    return d1, d2


def bound_gfr_monotone(model: Distribution, w: Window, order: EntropyOrder):
    """(i) h1 increasing in t1  =>  H >= e/(b-a) log(t1 h1);
    (ii) h2 decreasing in t2  =>  H >= e/(b-a) log(t2 h2).

    Stated for either regime ``alpha + beta > 2`` or ``< 2``; the boundary
    ``alpha + beta = 2`` is excluded.
    """
    e, g = order.exponent, order.gap
    H = _H(model, w.t1, w.t2, order)
    pair = gfr(model, w)
    d1, d2 = _gfr_directions(model, w)
    regime_ok = order.regime != 0
    scale1 = max(1.0, abs(pair.h1))
    scale2 = max(1.0, abs(pair.h2))
    hyp1 = regime_ok and d1 > DEAD_ZONE * scale1
    hyp2 = regime_ok and d2 < -DEAD_ZONE * scale2
    rhs1 = e / g * _log_or_nan(w.t1 * pair.h1)
    rhs2 = e / g * _log_or_nan(w.t2 * pair.h2)
    return (_report(Theorem.T_GFR_MONOTONE_1, hyp1, H, rhs1, ">="),
            _report(Theorem.T_GFR_MONOTONE_2, hyp2, H, rhs2, ">="))


# ----------------------------------------------------------------------
# bounds for monotone densities
# ----------------------------------------------------------------------

def bound_density_monotone(model: Distribution, w: Window, order: EntropyOrder):
    """Bounds built from ``E[X**e | window]`` and the GFR values.

    With rhs_i = 1/(b-a) log E[X**e | w] + (e-1)/(b-a) log h_i, an increasing
    density gives H <= rhs2 and H >= rhs1 when alpha + beta > 2; both flip
    when alpha + beta < 2, and flip again for a decreasing density.
    Returns ``(report_h2, report_h1)``.
    """
    e, g = order.exponent, order.gap
    flag = structure_flags(model).density_monotone
    mono = flag if flag is not Monotonicity.NON_MONOTONE else density_direction(model, w)
    H = _H(model, w.t1, w.t2, order)
    pair = gfr(model, w)
    log_moment = math.log(conditional_moment(model, w, e))
    rhs2 = (log_moment + (e - 1) * _log_or_nan(pair.h2)) / g
    rhs1 = (log_moment + (e - 1) * _log_or_nan(pair.h1)) / g
    hyp = mono is not Monotonicity.NON_MONOTONE and order.regime != 0
    # sign +1: "H <= rhs2, H >= rhs1"
    sign = order.regime * (-1 if mono is Monotonicity.DECREASING else 1)
    s2, s1 = ("<=", ">=") if sign >= 0 else (">=", "<=")
    note = f"density {mono.value}, regime {order.regime:+d}"
    return (_report(Theorem.T_DENSITY_MONOTONE_UPPER, hyp, H, rhs2, s2, note),
            _report(Theorem.T_DENSITY_MONOTONE_LOWER, hyp, H, rhs1, s1, note))


# ----------------------------------------------------------------------
# unconditional inequalities
# ----------------------------------------------------------------------

def bound_exp_inequality(model: Distribution, w: Window, order: EntropyOrder) -> BoundReport:
    """H <= (1 - I) / (alpha - beta) where I = exp((beta - alpha) H); i.e. log I <= I - 1."""
    H = _H(model, w.t1, w.t2, order)
    integral = math.exp(order.gap * H)
    rhs = (1.0 - integral) / (order.alpha - order.beta)
    return _report(Theorem.P_EXP_INEQUALITY, True, H, rhs, "<=")


def bound_logsum(model: Distribution, w: Window, order: EntropyOrder) -> BoundReport:
    """H >= e/(b-a) E[log X | w] + (2 - alpha - beta)/(b-a) * interval Shannon entropy."""
    e, g = order.exponent, order.gap
    H = _H(model, w.t1, w.t2, order)
    rhs = e / g * conditional_log_mean(model, w) + (1.0 - e) / g * interval_shannon(model, w)
    return _report(Theorem.T_LOGSUM, True, H, rhs, ">=")


def all_bounds(model: Distribution, w: Window, order: EntropyOrder) -> list[BoundReport]:
    reports = [bound_t1_monotone(model, w, order), bound_t2_monotone(model, w, order)]
    reports.extend(bound_gfr_monotone(model, w, order))
    reports.extend(bound_density_monotone(model, w, order))
    reports.append(bound_exp_inequality(model, w, order))
    reports.append(bound_logsum(model, w, order))
    return reports


# ----------------------------------------------------------------------
# uniqueness machinery
# ----------------------------------------------------------------------

def eta(x, model: Distribution, w: Window, order: EntropyOrder, H: float | None = None,
        dH_dt1: float | None = None):
    """eta(x) = -(t1 x)**e exp(-(b-a) H) + e x - (b-a) dH/dt1; zero at x = h1."""
    e, g = order.exponent, order.gap
    H = _H(model, w.t1, w.t2, order) if H is None else H
    dH = partial_t1(model, w, order) if dH_dt1 is None else dH_dt1
    x = np.asarray(x, dtype=float)
    out = -((w.t1 * x) ** e) * math.exp(-g * H) + e * x - g * dH
    return float(out) if out.ndim == 0 else out


def zeta(y, model: Distribution, w: Window, order: EntropyOrder, H: float | None = None,
         dH_dt2: float | None = None):
    """zeta(y) = -(t2 y)**e exp(-(b-a) H) + e y + (b-a) dH/dt2; zero at y = h2."""
    e, g = order.exponent, order.gap
    H = _H(model, w.t1, w.t2, order) if H is None else H
    dH = partial_t2(model, w, order) if dH_dt2 is None else dH_dt2
    y = np.asarray(y, dtype=float)
    out = -((w.t2 * y) ** e) * math.exp(-g * H) + e * y + g * dH
    return float(out) if out.ndim == 0 else out


class Side(str, enum.Enum):
    T1 = "t1_side"
    T2 = "t2_side"


def stationary_point(side: Side | str, model: Distribution, w: Window, order: EntropyOrder,
                     H: float | None = None) -> float:
    """Where d eta/dx (or d zeta/dy) vanishes: [t**-(e) exp((b-a) H)]**(1/(e-1))."""
    side = Side(side)
    if order.regime == 0:
        raise ValueError("stationary point undefined at alpha + beta = 2")
    e, g = order.exponent, order.gap
    H = _H(model, w.t1, w.t2, order) if H is None else H
    t = w.t1 if side is Side.T1 else w.t2
    if t <= 0:
        return math.inf if e < 2 else 0.0
    return math.exp((g * H - e * math.log(t)) / (e - 1.0))


@dataclass
class UniquenessDiagnostic:
    side: Side
    stationary_point: float
    value_at_stationary: float
    roots: list
    gfr_value: float
    regime: int
    gfr_is_root: bool = False
    warning: str = ""

    @property
    def n_roots(self) -> int:
        return len(self.roots)


@dataclass
class UniquenessReport:
    t1_side: UniquenessDiagnostic
    t2_side: UniquenessDiagnostic
    dH_dt1: float
    dH_dt2: float
    # theorem: H increasing in t1 and decreasing in t2; the remark mirrors it
    hypothesis_theorem: bool
    hypothesis_remark: bool


def _isolate(fn, gfr_value, x0, cap):
    hi = cap
    if math.isfinite(x0) and x0 > 0:
        hi = max(hi, 4.0 * x0)
    lo = min(gfr_value, x0 if math.isfinite(x0) and x0 > 0 else gfr_value) * 1e-6
    lo = max(lo, 1e-300)
    roots = find_roots(fn, RootBracket(lo, hi), n_probe=400)
    # extend the search while the function keeps one sign but is still heading to zero
    for _ in range(20):
        if len(roots) >= 2:
            break
        top = fn(hi)
        nxt = hi * 4.0
        if not np.isfinite(top) or np.sign(fn(nxt)) == np.sign(top):
            break
        roots += find_roots(fn, RootBracket(hi, nxt), n_probe=64)
        hi = nxt
    return sorted(set(roots))


def uniqueness_diagnostic(model: Distribution, w: Window, order: EntropyOrder) -> UniquenessReport:
    """Locate the positive roots of eta and zeta and check the GFR values are among them."""
    H = _H(model, w.t1, w.t2, order)
    d1 = partial_t1(model, w, order)
    d2 = partial_t2(model, w, order)
    pair = gfr(model, w)
    cap = ROOT_CAP * max(pair.h1, pair.h2)
    sides = []
    for side, g_val, fn in (
        (Side.T1, pair.h1, lambda x: eta(x, model, w, order, H, d1)),
        (Side.T2, pair.h2, lambda y: zeta(y, model, w, order, H, d2)),
    ):
        x0 = stationary_point(side, model, w, order, H) if order.regime != 0 else math.nan
        v0 = fn(x0) if math.isfinite(x0) else math.nan
        warning = ""
        try:
            roots = _isolate(fn, g_val, x0, cap)
        except (ValueError, ArithmeticError) as exc:
            roots, warning = [], f"root isolation failed: {exc}"
        tol = 1e-6 * max(1.0, g_val)
        is_root = any(abs(r - g_val) <= tol for r in roots)
        if not roots and not warning:
            warning = "no sign change found"
        sides.append(UniquenessDiagnostic(side, x0, v0, roots, g_val, order.regime, is_root, warning))
    inc1, dec2 = d1 > DEAD_ZONE, d2 < -DEAD_ZONE
    return UniquenessReport(sides[0], sides[1], d1, d2,
                            hypothesis_theorem=inc1 and dec2,
                            hypothesis_remark=(d1 < -DEAD_ZONE) and (d2 > DEAD_ZONE))
