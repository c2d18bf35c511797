import math

import numpy as np
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from wgie.bounds import bound_exp_inequality, bound_logsum
from wgie.distributions import Exponential, Gamma, Power, Uniform, Weibull, Window, interval_mass, sample_truncated
from wgie.entropy import EntropyOrder, wgie
from wgie.estimation import ks_statistic

settings.register_profile("wgie", max_examples=60, deadline=None)
settings.load_profile("wgie")


@st.composite
def orders(draw):
    beta = draw(st.floats(1.0, 3.0))
    alpha = draw(st.floats(beta - 1 + 0.02, beta - 0.02))
    return EntropyOrder(alpha, beta)


@st.composite
def windows(draw, lo=0.0, hi=8.0):
    t1 = draw(st.floats(lo, hi * 0.8))
    t2 = draw(st.floats(t1 + 0.05 * (hi - lo), hi))
    return Window(t1, t2)


@given(theta=st.floats(0.1, 5.0), w=windows(), o=orders())
def test_exponential_closed_form_equals_quadrature(theta, w, o):
    m = Exponential(theta)
    assume(interval_mass(m, w) > 1e-12)
    cf = wgie(m, w, o, method="closed_form").value
    q = wgie(m, w, o, method="quadrature").value
    assert math.isclose(cf, q, rel_tol=1e-7, abs_tol=1e-8)


@given(shape=st.floats(0.3, 8.0), rate=st.floats(0.2, 3.0), w=windows(), o=orders())
def test_gamma_closed_form_equals_quadrature(shape, rate, w, o):
    m = Gamma(shape, rate)
    assume(interval_mass(m, w) > 1e-10)
    cf = wgie(m, w, o, method="closed_form").value
    q = wgie(m, w, o, method="quadrature").value
    assert math.isclose(cf, q, rel_tol=1e-7, abs_tol=1e-8)


@given(b=st.floats(0.2, 5.0), w=windows(0.0, 3.0), o=orders())
def test_power_closed_form_equals_quadrature(b, w, o):
    m = Power(3.0, b)
    cf = wgie(m, w, o, method="closed_form").value
    q = wgie(m, w, o, method="quadrature").value
    assert math.isclose(cf, q, rel_tol=1e-7, abs_tol=1e-8)


@given(theta=st.floats(0.2, 3.0), c=st.floats(0.1, 10.0), w=windows(0.0, 5.0), o=orders())
def test_rescaling_shifts_entropy_by_log_scale(theta, c, w, o):
    # Y = cX: int (y f_Y)^e dy = c int (x f_X)^e dx
    m = Exponential(theta)
    assume(interval_mass(m, w) > 1e-10)
    hx = wgie(m, w, o).value
    hy = wgie(Exponential(theta / c), Window(c * w.t1, c * w.t2), o).value
    assert math.isclose(hy, hx + math.log(c) / o.gap, rel_tol=1e-9, abs_tol=1e-9)


@given(shape=st.floats(0.5, 4.0), c=st.floats(0.2, 5.0), w=windows(0.1, 6.0), o=orders())
def test_rescaling_holds_under_quadrature(shape, c, w, o):
    m = Weibull(shape, 0.5)
    assume(interval_mass(m, w) > 1e-8)
    hx = wgie(m, w, o).value
    hy = wgie(Weibull(shape, 0.5 / c), Window(c * w.t1, c * w.t2), o).value
    assert math.isclose(hy, hx + math.log(c) / o.gap, rel_tol=1e-8, abs_tol=1e-8)


@given(w=windows(0.0, 10.0), o=orders())
def test_uniform_window_invariance(w, o):
    # the truncated uniform does not depend on the parent support
    a = wgie(Uniform(0.0, 10.0), w, o).value
    b = wgie(Uniform(w.t1, w.t2), w, o).value
    assert math.isclose(a, b, rel_tol=1e-12, abs_tol=1e-12)


@given(shape=st.floats(0.5, 5.0), w=windows(0.1, 6.0), o=orders())
def test_unconditional_bounds_always_hold(shape, w, o):
    m = Gamma(shape, 1.0)
    assume(interval_mass(m, w) > 1e-8)
    assert bound_exp_inequality(m, w, o).satisfied
    assert bound_logsum(m, w, o).satisfied


@given(shape=st.floats(0.3, 6.0), rate=st.floats(0.2, 3.0), p=st.floats(1e-6, 1 - 1e-6))
def test_gamma_quantile_roundtrip(shape, rate, p):
    m = Gamma(shape, rate)
    assert math.isclose(m.cdf(m.quantile(p)), p, rel_tol=1e-9, abs_tol=1e-14)


@given(theta=st.floats(0.1, 5.0), w=windows(), n=st.integers(1, 50), seed=st.integers(0, 2**32 - 1))
def test_truncated_samples_stay_in_window(theta, w, n, seed):
    m = Exponential(theta)
    assume(interval_mass(m, w) > 1e-12)
    x = sample_truncated(m, w, n, seed)
    assert x.shape == (n,)
    assert np.all((x >= w.t1) & (x <= w.t2))


@given(x=st.lists(st.floats(0.01, 100.0), min_size=1, max_size=60), theta=st.floats(0.01, 5.0))
def test_ks_statistic_range(x, theta):
    d = ks_statistic(x, Exponential(theta))
    assert 1.0 / (2 * len(x)) - 1e-12 <= d <= 1.0
