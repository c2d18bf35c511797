import math

import numpy as np
import pytest

from wgie.bounds import (
    Direction,
    Side,
    Theorem,
    all_bounds,
    bound_density_monotone,
    bound_exp_inequality,
    bound_gfr_monotone,
    bound_logsum,
    bound_t1_monotone,
    bound_t2_monotone,
    check_interval_monotonicity,
    direction_in_t2,
    eta,
    partial_t1,
    partial_t2,
    stationary_point,
    uniqueness_diagnostic,
    wgie_grid,
    zeta,
)
from wgie.distributions import Exponential, Gamma, Power, Uniform, Window, gfr
from wgie.entropy import EntropyOrder, wgie, wgie_integral

LOW, HIGH = EntropyOrder(0.5, 1.2), EntropyOrder(1.5, 2.0)


def exact_partials(model, w, o):
    """dH/dt1 and dH/dt2 by differentiating the integral under the sign."""
    e, g = o.exponent, o.gap
    i = wgie_integral(model, w, o)
    p = gfr(model, w)
    d1 = (-((w.t1 * p.h1) ** e) / i + e * p.h1) / g
    d2 = (((w.t2 * p.h2) ** e) / i - e * p.h2) / g
    return d1, d2


@pytest.mark.parametrize("o", [LOW, HIGH], ids=str)
@pytest.mark.parametrize("m,w", [
    (Exponential(2.0), Window(0.5, 2.0)),
    (Gamma(2.3, 0.7), Window(1.0, 5.0)),
    (Power(3.0, 1.6), Window(0.4, 2.5)),
    (Uniform(0.0, 25.0), Window(5.0, 20.0)),
])
def test_partials_match_exact_derivative(o, m, w):
    d1, d2 = exact_partials(m, w, o)
    assert partial_t1(m, w, o) == pytest.approx(d1, rel=1e-6, abs=1e-8)
    assert partial_t2(m, w, o) == pytest.approx(d2, rel=1e-6, abs=1e-8)


def test_one_sided_difference_at_support_edge_is_limited():
    """At t1 = 0 the Power(3, 1.6) entropy moves like t1**1.6, so the exact
    slope is 0 while any difference with step h sees about h**0.6. The
    one-sided rule is used there, and the error is far above the interior
    accuracy."""
    m, o = Power(3.0, 1.6), LOW
    edge = partial_t1(m, Window(0.0, 2.0), o)
    # the edge density is read just inside the support, so the exact value is ~0
    assert exact_partials(m, Window(0.0, 2.0), o)[0] == pytest.approx(0.0, abs=1e-7)
    assert 1e-5 < edge < 1e-3
    d1, _ = exact_partials(m, Window(0.1, 2.0), o)
    assert partial_t1(m, Window(0.1, 2.0), o) == pytest.approx(d1, rel=1e-6)


def test_upper_edge_uses_backward_difference():
    m, o, w = Uniform(0.0, 4.0), HIGH, Window(1.0, 4.0)
    assert partial_t2(m, w, o) == pytest.approx(exact_partials(m, w, o)[1], rel=1e-6)


@pytest.mark.parametrize("o", [LOW, HIGH], ids=str)
def test_eta_and_zeta_vanish_at_gfr(o):
    m, w = Exponential(2.0), Window(0.5, 2.0)
    p = gfr(m, w)
    assert eta(p.h1, m, w, o) == pytest.approx(0.0, abs=1e-7)
    assert zeta(p.h2, m, w, o) == pytest.approx(0.0, abs=1e-7)


@pytest.mark.parametrize("o", [LOW, HIGH], ids=str)
def test_eta_curvature_follows_regime(o):
    m, w = Gamma(2.3, 0.7), Window(1.0, 5.0)
    x = np.linspace(0.05, 3.0, 40)
    second = np.diff(eta(x, m, w, o), 2)
    # eta'' = -c e (e-1) x**(e-2): concave above the boundary, convex below
    assert np.all(np.sign(second) == -o.regime)


@pytest.mark.parametrize("o", [LOW, HIGH], ids=str)
@pytest.mark.parametrize("side", list(Side))
def test_stationary_point_is_critical(o, side):
    m, w = Exponential(2.0), Window(0.5, 2.0)
    x0 = stationary_point(side, m, w, o)
    fn = (lambda x: eta(x, m, w, o)) if side is Side.T1 else (lambda y: zeta(y, m, w, o))
    h = 1e-6 * x0
    assert (fn(x0 + h) - fn(x0 - h)) / (2 * h) == pytest.approx(0.0, abs=1e-6)


def test_stationary_point_undefined_on_boundary():
    with pytest.raises(ValueError):
        stationary_point("t1_side", Exponential(1.0), Window(0.5, 2.0), EntropyOrder(0.7, 1.3))


def expected_root_count(fn, x0, regime):
    # concave (regime +1) or convex (-1) in x: one root past x0 when fn(x0) has
    # the regime's sign, and another below x0 when fn(0+) has the other sign
    s0, sx = np.sign(fn(1e-12)), np.sign(fn(x0))
    if sx != regime:
        return 0
    return 1 + int(s0 == -regime)


@pytest.mark.parametrize("o", [LOW, HIGH], ids=str)
@pytest.mark.parametrize("m,w", [
    (Uniform(0.0, 25.0), Window(5.0, 20.0)),
    (Exponential(2.0), Window(0.5, 2.0)),
    (Gamma(2.3, 0.7), Window(1.0, 5.0)),
])
def test_uniqueness_diagnostic_root_structure(o, m, w):
    rep = uniqueness_diagnostic(m, w, o)
    fns = {Side.T1: lambda x: eta(x, m, w, o), Side.T2: lambda y: zeta(y, m, w, o)}
    for d in (rep.t1_side, rep.t2_side):
        assert d.gfr_is_root and d.warning == ""
        assert d.n_roots == expected_root_count(fns[d.side], d.stationary_point, o.regime)
        if d.n_roots == 2:
            assert d.roots[0] < d.stationary_point < d.roots[1]
    assert rep.hypothesis_theorem == (rep.dH_dt1 > 0 and rep.dH_dt2 < 0)


def test_uniqueness_on_uniform_window_is_increasing_both_ways():
    rep = uniqueness_diagnostic(Uniform(0.0, 25.0), Window(5.0, 20.0), LOW)
    assert rep.dH_dt1 > 0 and rep.dH_dt2 > 0
    assert not rep.hypothesis_theorem and not rep.hypothesis_remark


def test_exp_inequality_is_log_bound():
    for m, w in [(Exponential(2.0), Window(0.5, 2.0)), (Gamma(2.3, 0.7), Window(1, 5))]:
        for o in (LOW, HIGH):
            r = bound_exp_inequality(m, w, o)
            assert r.theorem_id == Theorem.P_EXP_INEQUALITY and r.hypothesis_holds and r.satisfied
            i = wgie_integral(m, w, o)
            assert r.margin == pytest.approx((i - 1 - math.log(i)) / o.gap, abs=1e-12)


def test_logsum_bound_holds():
    for o in (LOW, HIGH):
        r = bound_logsum(Gamma(2.3, 0.7), Window(1, 5), o)
        assert r.satisfied and r.margin >= 0


def test_t_monotone_bounds_respect_supplied_direction():
    m, w, o = Exponential(2.0), Window(0.5, 2.0), LOW
    detected = direction_in_t2(m, w, o)
    assert detected == Direction.INCREASING
    r = bound_t2_monotone(m, w, o)
    assert r.hypothesis_holds and r.sense == "<="
    r_wrong = bound_t2_monotone(m, w, o, direction="decreasing")
    assert not r_wrong.hypothesis_holds and r_wrong.sense == ">="
    with pytest.raises(ValueError):
        bound_t1_monotone(m, w, o, direction="sideways")


def test_t1_monotone_rhs_formula():
    m, w, o = Exponential(2.0), Window(0.5, 2.0), HIGH
    e, g = o.exponent, o.gap
    h1 = gfr(m, w).h1
    r = bound_t1_monotone(m, w, o)
    assert r.rhs == pytest.approx((e * math.log(w.t1) + (e - 1) * math.log(h1) - math.log(e)) / g, rel=1e-13)
    assert r.lhs == pytest.approx(wgie(m, w, o).value, rel=1e-14)


def test_gfr_bound_uninformative_at_zero():
    # t1 = 0 puts log(t1 h1) at -inf; the report says so instead of passing silently
    r1, _ = bound_gfr_monotone(Exponential(2.0), Window(0.0, 2.0), HIGH)
    assert not r1.informative and not r1.satisfied and math.isnan(r1.margin)


def test_gfr_bound_hypotheses_for_exponential():
    # the exponential h1 = theta / (1 - exp(-theta (t2 - t1))) grows with t1
    r1, r2 = bound_gfr_monotone(Exponential(2.0), Window(0.5, 2.0), LOW)
    assert r1.hypothesis_holds
    assert not bound_gfr_monotone(Exponential(2.0), Window(0.5, 2.0), EntropyOrder(0.7, 1.3))[0].hypothesis_holds


@pytest.mark.parametrize("o", [LOW, HIGH], ids=str)
@pytest.mark.parametrize("m,w", [
    (Power(3.0, 2.5), Window(0.5, 2.5)),
    (Exponential(2.0), Window(0.5, 2.0)),
    (Gamma(0.6, 1.0), Window(0.3, 3.0)),
])
def test_density_monotone_bounds_hold(o, m, w):
    up, low = bound_density_monotone(m, w, o)
    assert up.hypothesis_holds and low.hypothesis_holds
    assert up.satisfied and low.satisfied
    assert {up.sense, low.sense} == {"<=", ">="}


def test_density_monotone_constant_density_is_tight():
    up, low = bound_density_monotone(Uniform(0, 10), Window(2, 7), HIGH)
    assert up.margin == pytest.approx(0.0, abs=1e-9) and low.margin == pytest.approx(0.0, abs=1e-9)


def test_all_bounds_lists_every_theorem():
    reps = all_bounds(Exponential(2.0), Window(0.5, 2.0), LOW)
    assert [r.theorem_id for r in reps] == list(Theorem)


def test_monotonicity_report_matches_direct_grid():
    m, o = Exponential(2.0), LOW
    t1g, t2g = np.linspace(0.0, 1.5, 6), np.linspace(0.5, 3.0, 6)
    rep = check_interval_monotonicity(m, t1g, t2g, o)
    H = wgie_grid(m, t1g, t2g, o)
    rises_t1 = sum(1 for i in range(5) for j in range(6)
                   if not np.isnan(H[i, j]) and not np.isnan(H[i + 1, j]) and H[i + 1, j] > H[i, j] + 1e-9)
    assert len(rep.t1_violations) == rises_t1
    assert rep.hypothesis_holds
    assert not rep.t2_violations and rep.trend_t2 == Direction.INCREASING
    assert rep.increases_in_t1 == len(rep.t1_violations)
    assert 0 < rep.increases_in_t1 + rep.decreases_in_t1 <= rep.n_pairs_t1


def test_monotonicity_hypothesis_requires_low_regime():
    t = np.linspace(0.2, 2.0, 4)
    assert not check_interval_monotonicity(Exponential(2.0), t, t, HIGH).hypothesis_holds
    with pytest.raises(ValueError):
        check_interval_monotonicity(Exponential(2.0), [0.1], t, LOW)
