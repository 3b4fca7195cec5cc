import math
import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.polynomial.legendre import leggauss
from scipy.special import comb, eval_gegenbauer, eval_legendre

from mwave.errors import NotUnitVector, TruncationWarning
from mwave.spectral_core import mexican
from mwave.sphere import (
    HEAT_TRACE_S2,
    MACLAURIN_S2,
    GegenbauerEvaluator,
    MaclaurinApprox,
    ZonalKernel,
    default_lmax,
    gegenbauer,
    gt_approx,
    harmonic_dimension,
    heat_kernel_series,
    heat_trace,
    heat_trace_exact,
    ht_approx,
    mexican_series,
    sphere_area,
    sphere_distance,
    sphere_kernel_series,
    zonal_coefficient,
)


def legendre_series(coef_fn, t, x, L):
    """Separate code path: scipy Legendre values summed term by term."""
    l = np.arange(L + 1)
    P = eval_legendre(l[:, None], np.atleast_1d(x)[None, :])
    return (coef_fn(l)[:, None] * P).sum(axis=0)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_gegenbauer_at_one(n):
    ev = GegenbauerEvaluator(n)
    for l in range(201):
        exact = int(comb(n + l - 2, l, exact=True))
        assert ev.at_one(l) == exact
        assert gegenbauer(l, (n - 1) / 2, 1.0) == pytest.approx(exact, rel=1e-12)


@pytest.mark.parametrize("lam", [0.5, 1.0, 1.5])
def test_gegenbauer_generating_function(lam):
    r, tau = 0.3, 0.7
    s = math.fsum(gegenbauer(l, lam, tau) * r**l for l in range(61))
    assert s == pytest.approx((1 - 2 * r * tau + r * r) ** (-lam), rel=1e-10)


@given(tau=st.floats(-1, 1), l=st.integers(0, 40), lam=st.sampled_from([0.5, 1.0, 1.5]))
@settings(max_examples=60, deadline=None)
def test_gegenbauer_parity_and_scipy(tau, l, lam):
    v = gegenbauer(l, lam, tau)
    assert gegenbauer(l, lam, -tau) == pytest.approx((-1) ** l * v, abs=1e-12 * max(1, abs(v)))
    assert v == pytest.approx(eval_gegenbauer(l, lam, tau), abs=1e-10 * max(1, abs(v)))


def test_evaluator_iterates_legendre():
    x = np.linspace(-1, 1, 11)
    for l, P in enumerate(GegenbauerEvaluator(2).iterate(x, 30)):
        assert np.allclose(P, eval_legendre(l, x), atol=1e-13)


def test_sphere_area_and_coefficients():
    assert sphere_area(2) == pytest.approx(4 * math.pi)
    assert sphere_area(3) == pytest.approx(2 * math.pi**2)
    for l in range(10):
        assert zonal_coefficient(2, l) == pytest.approx((2 * l + 1) / (4 * math.pi))
    for n in (2, 3, 4, 5):
        assert zonal_coefficient(n, 0) == pytest.approx(1 / sphere_area(n))
        for l in range(8):
            # c_l b_l = d_l = dim H_l / omega_n
            b = GegenbauerEvaluator(n).at_one(l)
            assert zonal_coefficient(n, l) * b == pytest.approx(harmonic_dimension(n, l) / sphere_area(n))


def test_kernel_at_pole_scales_like_inverse_t2():
    t = 0.05
    assert 4 * math.pi * t * t * mexican_series(t, 1.0) == pytest.approx(1.0, abs=0.02)


def test_kernel_mean_vanishes():
    x, w = leggauss(512)
    h = mexican_series(0.2, x)
    assert abs(2 * math.pi * np.dot(w, h)) <= 1e-10


def test_kernel_against_scipy_legendre():
    t, theta = 0.5, 1.0
    L = 200
    oracle = legendre_series(lambda l: (2 * l + 1) / (4 * math.pi) * (t * t * l * (l + 1))
                             * np.exp(-t * t * l * (l + 1)), t, math.cos(theta), L)[0]
    assert mexican_series(t, math.cos(theta), L) == pytest.approx(oracle, rel=1e-10)


@pytest.mark.parametrize("t", [0.05, 0.1, 0.5, 1.0])
def test_lmax_stability(t):
    x = np.cos(np.linspace(0, math.pi, 33))
    L = default_lmax(t)
    a = mexican_series(t, x, L)
    b = mexican_series(t, x, 2 * L)
    assert np.max(np.abs(a - b)) <= 1e-12 * np.max(np.abs(b))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_diagonal_trace_identity(n):
    t = 0.3
    k = ZonalKernel.build(mexican(1), t, n)
    l = np.arange(k.L_max + 1)
    dims = np.array([harmonic_dimension(n, int(v)) for v in l], dtype=float)
    expected = math.fsum(dims * mexican(1).evaluate(t * t * l * (l + n - 1)))
    assert k.diagonal_trace() == pytest.approx(expected, rel=1e-10)


def test_zonal_kernel_a0_zero_and_warning():
    assert ZonalKernel.build(mexican(1), 0.1).coeffs[0] == 0
    with pytest.warns(TruncationWarning):
        sphere_kernel_series(mexican(1), 0.05, 0.3, L_max=20)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        sphere_kernel_series(mexican(1), 0.05, 0.3)


def test_heat_derivative_relation():
    s, theta = 0.25, 0.8
    ds = 1e-5
    x = math.cos(theta)
    g = lambda s_: heat_kernel_series(math.sqrt(s_), x, 400)
    dg = (g(s + ds) - g(s - ds)) / (2 * ds)
    h = mexican_series(math.sqrt(s), x, 400)
    assert dg == pytest.approx(-h / s, abs=1e-6)


def test_heat_trace_coefficients():
    assert HEAT_TRACE_S2.coefficients == (1, Fraction(1, 3), Fraction(1, 15), Fraction(4, 315), Fraction(1, 315))
    assert HEAT_TRACE_S2.coefficients[0] == 1


def test_heat_trace_accuracy_and_ordering():
    assert heat_trace(0.01) == pytest.approx(heat_trace_exact(0.01), rel=1e-6)
    assert heat_trace(0.1) == pytest.approx(heat_trace_exact(0.1), rel=1e-3)
    for s in (0.01, 0.03, 0.1):
        ex = heat_trace_exact(s)
        assert abs(ex - (1 / s + 1 / 3)) <= abs(ex - 1 / s)
    with pytest.raises(ValueError):
        heat_trace(0.0)


def test_maclaurin_tables():
    F = Fraction
    assert MACLAURIN_S2.A == (1, F(1, 3), F(1, 15), F(4, 315), F(1, 315))
    assert MACLAURIN_S2.B == (F(1, 3), F(2, 15), F(4, 105), F(4, 315))
    assert MACLAURIN_S2.q0 == MACLAURIN_S2.B
    assert MACLAURIN_S2.q2 == (F(2, 15), F(8, 105), F(4, 105))
    assert MACLAURIN_S2.p(0.0, 0.0) == 1.0
    assert MACLAURIN_S2.q(0.0, 0.0) == pytest.approx(1 / 3)


def test_gt_approx_on_diagonal_is_heat_trace():
    for t in (0.05, 0.1, 0.2):
        s = t * t
        assert gt_approx(t, 0.0) == pytest.approx(heat_trace(s), rel=1e-14)


@pytest.fixture(scope="module")
def series_t01():
    theta = np.linspace(-math.pi, math.pi, 2048)
    x = np.cos(theta)
    return theta, 4 * math.pi * heat_kernel_series(0.1, x, 2000), 4 * math.pi * mexican_series(0.1, x, 2000)


def test_gt_approx_error(series_t01):
    theta, g, _ = series_t01
    assert np.max(np.abs(gt_approx(0.1, theta) - g)) <= 1e-3


def test_ht_approx_error(series_t01):
    theta, _, h = series_t01
    assert np.max(np.abs(ht_approx(0.1, theta) - h)) <= 1.2e-3


def test_spot_values():
    g = 4 * math.pi * heat_kernel_series(0.1, math.cos(0.3), 2000)
    h = 4 * math.pi * mexican_series(0.1, math.cos(0.4), 2000)
    assert g == pytest.approx(10.655, abs=0.02)
    assert gt_approx(0.1, 0.3) == pytest.approx(10.655, abs=0.02)
    assert h == pytest.approx(-5.593, abs=0.02)
    assert ht_approx(0.1, 0.4) == pytest.approx(-5.593, abs=0.02)


def test_direct_form_agrees_near_pole():
    # the two brackets differ at order theta^4 only
    for th in (0.0, 0.05):
        assert ht_approx(0.1, th, "direct") == pytest.approx(ht_approx(0.1, th), rel=1e-3)
    with pytest.raises(ValueError):
        ht_approx(0.1, 0.0, "other")


def test_flat_limit():
    flat = MaclaurinApprox(A=(1,), B=(0,), q0=(0,), q2=(0,), C=(), D=())
    t, theta = 0.1, np.linspace(-0.5, 0.5, 21)
    s = t * t
    expected = np.exp(-theta**2 / (4 * s)) / s * (1 - theta**2 / (4 * s))
    assert np.allclose(ht_approx(t, theta, tables=flat), expected, rtol=1e-15)


def test_sphere_distance():
    N = np.array([0.0, 0.0, 1.0])
    assert sphere_distance(N, N) == 0.0
    assert sphere_distance(N, -N) == pytest.approx(math.pi)
    for th in (0.1, 1.0, 3.0):
        z = np.array([math.sin(th), 0.0, math.cos(th)])
        assert sphere_distance(N, z) == pytest.approx(th, abs=1e-12)
    with pytest.raises(NotUnitVector):
        sphere_distance(N, np.array([0.0, 0.0, 2.0]))
