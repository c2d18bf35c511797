import math

import numpy as np
import pytest
from scipy import stats

from wgie.distributions import (
    GPD,
    Beta1,
    DegenerateWindowError,
    ExpExponential,
    Exponential,
    Gamma,
    LinearDensity,
    LogConcavity,
    Monotonicity,
    NumericDensity,
    ParetoI,
    Power,
    Uniform,
    Weibull,
    Window,
    density_direction,
    gfr,
    interval_mass,
    log_cdf_second_differences,
    log_interval_mass,
    model_from_spec,
    sample_truncated,
    truncated_pdf,
)
from wgie.numerics import integrate_adaptive

MODELS = [
    Uniform(1.0, 4.0),
    Exponential(2.0),
    Power(3.0, 1.6),
    Beta1(2.5),
    ParetoI(1.5, 2.2),
    Gamma(2.3, 0.7),
    Gamma(0.6, 1.1),
    GPD(0.4),
    GPD(-0.3),
    Weibull(1.7, 0.05),
    ExpExponential(5.28, 0.032),
    LinearDensity(0.0, 2.0, 0.25, 0.25),
]


def _span(m):
    lo, hi = m.support
    return lo, hi if math.isfinite(hi) else float(m.quantile(1 - 1e-12))


@pytest.mark.parametrize("m", MODELS, ids=str)
def test_density_integrates_to_one(m):
    lo, hi = m.support
    assert integrate_adaptive(m.pdf, lo, hi) == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("m", MODELS, ids=str)
def test_quantile_inverts_cdf(m):
    p = np.array([1e-6, 0.01, 0.3, 0.5, 0.77, 0.999])
    assert m.cdf(m.quantile(p)) == pytest.approx(p, rel=1e-9, abs=1e-13)
    q = np.array([1e-9, 0.2, 0.6])
    assert m.sf(m.isf(q)) == pytest.approx(q, rel=1e-8)


@pytest.mark.parametrize("m", MODELS, ids=str)
def test_cdf_is_integral_of_pdf(m):
    lo, hi = _span(m)
    x = lo + 0.37 * (hi - lo)
    assert integrate_adaptive(m.pdf, lo, x) == pytest.approx(m.cdf(x), abs=1e-9)
    assert m.cdf(x) + m.sf(x) == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("m", MODELS, ids=str)
def test_spec_roundtrip(m):
    assert model_from_spec(m.to_spec()) == m


def test_cdf_outside_support():
    u = Uniform(1, 2)
    assert u.cdf(0.5) == 0.0 and u.cdf(3.0) == 1.0
    assert u.pdf(0.5) == 0.0
    assert Exponential(1).sf(-1.0) == 1.0


def test_against_scipy_reference_forms():
    x = np.linspace(0.1, 20, 9)
    assert Gamma(2.3, 0.7).cdf(x) == pytest.approx(stats.gamma(2.3, scale=1 / 0.7).cdf(x), rel=1e-12)
    # rate enters as (lam x)^a
    assert Weibull(1.7, 0.05).cdf(x * 10) == pytest.approx(
        stats.weibull_min(1.7, scale=20.0).cdf(x * 10), rel=1e-12)
    assert ParetoI(1.5, 2.2).cdf(x + 1.5) == pytest.approx(
        stats.pareto(2.2, scale=1.5).cdf(x + 1.5), rel=1e-12)
    assert GPD(0.4).cdf(x) == pytest.approx(stats.genpareto(0.4).cdf(x), rel=1e-12)
    assert ExpExponential(3.0, 0.5).cdf(x) == pytest.approx((1 - np.exp(-0.5 * x)) ** 3, rel=1e-12)


def test_gpd_near_zero_is_exponential():
    x = np.array([0.1, 1.0, 5.0])
    assert GPD(1e-10).cdf(x) == pytest.approx(Exponential(1.0).cdf(x), rel=1e-9)
    assert GPD(-0.5).support == (0.0, 2.0)


@pytest.mark.parametrize("bad", [
    lambda: Uniform(2, 1),
    lambda: Exponential(0),
    lambda: Power(-1, 2),
    lambda: Gamma(1, -2),
    lambda: GPD(math.nan),
    lambda: LinearDensity(0, 2, -1.0, 0.25),
])
def test_invalid_parameters(bad):
    with pytest.raises(ValueError):
        bad()


def test_model_from_spec_errors_and_aliases():
    assert model_from_spec({"family": "exp", "params": {"theta": 2}}) == Exponential(2.0)
    with pytest.raises(ValueError):
        model_from_spec({"family": "nope"})
    with pytest.raises(ValueError):
        model_from_spec({"family": "gamma", "params": {"k": 1}})
    with pytest.raises(ValueError):
        model_from_spec({})


def test_window_validation():
    with pytest.raises(ValueError):
        Window(2, 1)
    with pytest.raises(ValueError):
        Window(-1, 1)
    assert Window(1, math.inf).width == math.inf


def test_window_outside_support_rejected():
    with pytest.raises(ValueError):
        gfr(Uniform(0, 1), Window(0.5, 2))


def test_interval_mass_uses_tail_in_far_right():
    m = Exponential(1.0)
    w = Window(700.0, 710.0)
    ref = -700.0 + math.log(-math.expm1(-10.0))
    assert log_interval_mass(m, w) == pytest.approx(ref, rel=1e-13)
    # plain cdf differences would return 0 here
    assert interval_mass(m, Window(40, 41)) > 0


def test_degenerate_window():
    with pytest.raises(DegenerateWindowError):
        gfr(Exponential(1.0), Window(800, 900))


def test_gfr_exponential_closed_form():
    m, w = Exponential(2.0), Window(1.0, 3.0)
    mass = math.exp(-2) - math.exp(-6)
    g = gfr(m, w)
    assert g.h1 == pytest.approx(2 * math.exp(-2) / mass, rel=1e-13)
    assert g.h2 == pytest.approx(2 * math.exp(-6) / mass, rel=1e-13)
    assert gfr(m, Window(1.0, math.inf)).h2 == 0.0


def test_gfr_at_support_edge_uses_limit():
    g = gfr(Uniform(0, 4), Window(0, 2))
    assert g.h1 == pytest.approx(0.5, rel=1e-12)
    assert gfr(Beta1(3.0), Window(0.0, 1.0)).h1 == pytest.approx(0.0, abs=1e-20)


def test_truncated_pdf_normalized():
    m, w = Gamma(2.3, 0.7), Window(0.5, 4.0)
    assert integrate_adaptive(lambda x: truncated_pdf(m, w, x), 0.5, 4.0) == pytest.approx(1.0, abs=1e-10)
    assert truncated_pdf(m, w, 5.0) == 0.0


@pytest.mark.parametrize("m,w", [
    (Exponential(2.0), Window(0.5, 2.0)),
    (Gamma(2.3, 0.7), Window(1.0, 6.0)),
    (Exponential(1.0), Window(30.0, 31.0)),
    (ParetoI(1.0, 2.0), Window(2.0, math.inf)),
])
def test_sampling_matches_truncated_cdf(m, w):
    x = sample_truncated(m, w, 4000, seed=11)
    assert np.all((x >= w.t1) & (x <= w.t2))
    f1 = m.cdf(w.t1)
    mass = interval_mass(m, w)
    # work on the survival side so far-tail windows keep precision
    cdf = lambda y: (m.sf(w.t1) - m.sf(y)) / mass if f1 > 0.5 else (m.cdf(y) - f1) / mass
    assert stats.kstest(x, cdf).pvalue > 1e-3


def test_sampling_is_seeded():
    m, w = Exponential(2.0), Window(0.5, 2.0)
    a = sample_truncated(m, w, 10, seed=np.random.SeedSequence(5))
    b = sample_truncated(m, w, 10, seed=np.random.SeedSequence(5))
    assert np.array_equal(a, b)
    assert sample_truncated(m, w, 0, seed=1).size == 0
    with pytest.raises(ValueError):
        sample_truncated(m, w, -1, seed=1)


@pytest.mark.parametrize("m,concave,mono", [
    (Uniform(0, 1), LogConcavity.YES, Monotonicity.CONSTANT),
    (Exponential(2), LogConcavity.YES, Monotonicity.DECREASING),
    (Power(1, 3), LogConcavity.YES, Monotonicity.INCREASING),
    (Power(1, 0.5), LogConcavity.YES, Monotonicity.DECREASING),
    (Gamma(0.5, 1), LogConcavity.YES, Monotonicity.DECREASING),
    (GPD(-1.5), LogConcavity.NO, Monotonicity.INCREASING),
])
def test_structure_flags(m, concave, mono):
    flags = m.structure_flags()
    assert flags.cdf_log_concave == concave
    assert flags.density_monotone == mono


def test_log_concavity_flag_agrees_with_second_differences():
    for m in (Exponential(2), Gamma(2.3, 0.7), Power(1, 3), Weibull(1.7, 0.05)):
        lo, hi = _span(m)
        grid = np.linspace(lo, hi, 300)[1:]
        if m.structure_flags().cdf_log_concave == LogConcavity.YES:
            assert np.all(log_cdf_second_differences(m, grid) <= 1e-12)


def test_density_direction_on_window():
    assert density_direction(Gamma(3, 1), Window(0.1, 1.5)) == Monotonicity.INCREASING
    assert density_direction(Gamma(3, 1), Window(3, 9)) == Monotonicity.DECREASING
    assert density_direction(Gamma(3, 1), Window(0.5, 5)) == Monotonicity.NON_MONOTONE


def test_numeric_density_wraps_callables():
    m = NumericDensity(lambda x: 2 * np.exp(-2 * x), lambda x: -np.expm1(-2 * x), name="exp2")
    assert m.quantile(0.5) == pytest.approx(math.log(2) / 2, rel=1e-10)
    g = gfr(m, Window(1, 3))
    assert g.h1 == pytest.approx(gfr(Exponential(2), Window(1, 3)).h1, rel=1e-12)
    assert m.structure_flags().density_monotone == Monotonicity.DECREASING
    with pytest.raises(TypeError):
        m.to_spec()
