"""Expansion machinery: mixture weights, the three density expansions,
the cdf power series, and the series/quadrature routes for moments,
generating functions, order statistics and entropy."""

import math
from math import comb, factorial

import numpy as np
import pytest
import scipy.special as sp
from scipy.integrate import quad

from bkwg import core, series
from bkwg.baseline import BaselineParams, get_family
from bkwg.core import BKwParams
from bkwg.series import ExpansionUnsupportedError, IntegralError
from conftest import CANON

WB = get_family("weibull")
WBP = BaselineParams(CANON["weibull"])


def _params(m, n, a, b, fid="weibull"):
    fam = get_family(fid)
    return BKwParams(m, n, a, b, fam, BaselineParams(CANON[fid]))


def _stack(p, t):
    """(x, W) layers computed stably from the baseline log-cdf."""
    lG = p.family.log_cdf(p.baseline_params, t)
    lA = math.log(-math.expm1(p.a * lG))
    W = math.exp(p.b * lA)
    return -math.expm1(p.b * lA), W


def _kw(p, extra_b=1.0):
    return BKwParams(1.0, 1.0, p.a, p.b * extra_b, p.family, p.baseline_params)


# -- coefficient vectors --------------------------------------------------

def test_mixture_weights_sum_to_one():
    # each mixture component is a density, so the weights add to 1
    for m in (1, 2, 3, 5):
        for n in (0.5, 1.0, 2.0, 3.7):
            co = series.beta_prime_coeffs(m, n, 0.8)
            assert co.kind == "beta_prime"
            assert co.tail_bound == 0.0
            assert float(np.sum(co.values)) == pytest.approx(1.0, rel=1e-12)


def test_mixture_weights_closed_form():
    # beta'_j = (-1)^j C(m-1, j) / [B(m, n) (j + n)]
    m, n = 3, 2.0
    co = np.asarray(series.beta_prime_coeffs(m, n, 1.0).values)
    B = math.exp(sp.betaln(m, n))
    want = [(-1) ** j * comb(m - 1, j) / (B * (j + n)) for j in range(m)]
    np.testing.assert_allclose(co, want, rtol=1e-12)
    # m = 1 collapses to a single unit weight
    assert np.asarray(series.beta_prime_coeffs(1, 4.2, 0.8).values) == pytest.approx([1.0])


def test_non_integer_first_shape_is_rejected():
    with pytest.raises(ExpansionUnsupportedError):
        series.beta_prime_coeffs(2.5, 1.0, 0.8)
    with pytest.raises(ExpansionUnsupportedError):
        series.mu_coeffs(1.5, 2.0)
    with pytest.raises(ExpansionUnsupportedError):
        series.lambda_pq_coeffs(1.5, 2)
    with pytest.raises(ExpansionUnsupportedError):
        series.eta_coeffs(2, 1.7)


# -- density expansions ----------------------------------------------------

DENSITY_CASES = [(2, 1.0), (3, 2.0), (2, 3.0), (2, 1.7), (4, 0.6)]


@pytest.mark.parametrize("m,n", DENSITY_CASES)
def test_density_matches_kumaraswamy_mixture(m, n):
    # f = sum_j beta'_j f_kw(t; a, b (j + n)) for integer m, any n
    p = _params(m, n, 1.3, 0.8)
    co = np.asarray(series.beta_prime_coeffs(m, n, p.b).values)
    for u in (0.2, 0.5, 0.8):
        t = core.quantile(p, u)
        f = core.pdf(p, t)
        mix = sum(
            w * core.pdf(_kw(p, extra_b=(j + n)), t) for j, w in enumerate(co)
        )
        assert abs(mix - f) <= 1e-10 * max(1.0, f)


@pytest.mark.parametrize("m,n", DENSITY_CASES)
def test_density_matches_survival_power_series(m, n):
    # f = f_kw(t; a, b) sum_j beta_j W^{j+n-1} with beta_j = beta'_j (j+n)
    p = _params(m, n, 1.3, 0.8)
    co = np.asarray(series.beta_prime_coeffs(m, n, p.b).values)
    for u in (0.2, 0.5, 0.8):
        t = core.quantile(p, u)
        f = core.pdf(p, t)
        _, W = _stack(p, t)
        fkw = core.pdf(_kw(p), t)
        got = fkw * sum(
            w * (j + n) * W ** (j + n - 1.0) for j, w in enumerate(co)
        )
        assert abs(got - f) <= 1e-10 * max(1.0, f)


@pytest.mark.parametrize("m,n", [(2, 1), (3, 2), (2, 3), (1, 4)])
def test_density_matches_eta_polynomial(m, n):
    # f = f_kw(t; a, b) sum_l eta_l x^l, finite for integer m and n
    p = _params(m, n, 1.3, 0.8)
    co = np.asarray(series.eta_coeffs(m, n).values)
    assert co.size == m + n - 1
    for u in (0.2, 0.5, 0.8):
        t = core.quantile(p, u)
        f = core.pdf(p, t)
        x, _ = _stack(p, t)
        got = core.pdf(_kw(p), t) * sum(w * x ** l for l, w in enumerate(co))
        assert abs(got - f) <= 1e-10 * max(1.0, f)


# -- cdf expansions ---------------------------------------------------------

@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_cdf_matches_bernoulli_trial_identity(m, n):
    # F = sum_{p,q} lambda_{p,q} x^{p+q} for integer shapes
    p = _params(m, n, 1.2, 0.8)
    co = series.lambda_pq_coeffs(m, n)
    mat = np.asarray(co.values)
    assert mat.shape == (m + n, m + n)
    assert co.tail_bound == 0.0
    for u in (0.25, 0.5, 0.75):
        t = core.quantile(p, u)
        x, _ = _stack(p, t)
        F = sum(
            mat[pp, qq] * x ** (pp + qq)
            for pp in range(m + n)
            for qq in range(m + n)
            if mat[pp, qq] != 0.0
        )
        assert abs(F - core.cdf(p, t)) <= 1e-12


def test_cdf_power_series_truncated():
    for (m, n) in ((2, 3.0), (2, 2.5), (3, 1.0)):
        p = _params(m, n, 1.2, 0.8)
        co = series.mu_coeffs(m, n, K=40)
        vals = np.asarray(co.values)
        assert co.truncation == 40 or co.tail_bound == 0.0
        for u in (0.25, 0.5, 0.75):
            t = core.quantile(p, u)
            x, _ = _stack(p, t)
            F = sum(w * x ** k for k, w in enumerate(vals))
            assert abs(F - core.cdf(p, t)) <= 1e-6


def test_cdf_power_series_spot_coefficients():
    # m = n = 1: F = x exactly; m = 2, n = 1: F = x^2
    co = np.asarray(series.mu_coeffs(1, 1.0).values)
    assert co[1] == pytest.approx(1.0, rel=1e-12)
    assert np.sum(np.abs(co)) == pytest.approx(1.0, rel=1e-12)
    co = np.asarray(series.mu_coeffs(2, 1.0).values)
    assert co[2] == pytest.approx(1.0, rel=1e-12)
    assert np.sum(np.abs(co)) == pytest.approx(1.0, rel=1e-12)


# -- moments, mgf, order statistics, entropy --------------------------------

P_INT = _params(2.0, 1.5, 1.3, 0.8)


def test_moment_matches_quadrature():
    for s in (1, 2):
        got = series.moment(P_INT, s)
        want, _ = quad(lambda t: t ** s * core.pdf(P_INT, t), 0, np.inf, limit=200)
        assert got == pytest.approx(want, rel=1e-6)
    with pytest.raises(ExpansionUnsupportedError):
        series.moment(_params(2.5, 1.5, 1.3, 0.8), 1)


def test_pwm_matches_quadrature():
    # probability weighted moments of the two-shape layer, checked by
    # integrating in t instead of the implementation's quantile space
    kwp = _kw(P_INT)
    for (pw, q, r) in ((1, 0, 0), (2, 1, 1), (1, 2, 0)):
        got = series.pwm(P_INT, pw, q, r)
        want, _ = quad(
            lambda t: t ** pw
            * core.cdf(kwp, t) ** q
            * core.sf(kwp, t) ** r
            * core.pdf(kwp, t),
            0, np.inf, limit=200,
        )
        assert got == pytest.approx(want, rel=1e-6)


def test_mgf_routes_agree_with_quadrature():
    for s in (-0.5, 0.3):
        want, _ = quad(
            lambda t: math.exp(s * t) * core.pdf(P_INT, t), 0, np.inf, limit=200
        )
        assert series.mgf(P_INT, s) == pytest.approx(want, rel=1e-6)
        assert series.mgf(P_INT, s, route="mixture") == pytest.approx(want, rel=1e-6)
    assert series.mgf(P_INT, 0.0) == pytest.approx(1.0, rel=1e-9)


def test_mgf_rejects_arguments_at_tail_decay_rate():
    # full reduction to Exp(1): E[e^{sT}] diverges for s >= 1
    pe = _params(1.0, 1.0, 1.0, 1.0, "exponential")
    lam = pe.baseline_params.values[0]
    assert series.mgf(pe, 0.5 * lam) == pytest.approx(
        lam / (lam - 0.5 * lam), rel=1e-6
    )
    with pytest.raises(IntegralError):
        series.mgf(pe, lam)
    with pytest.raises(IntegralError):
        series.mgf(pe, 1.5 * lam)


def test_order_statistic_density_matches_direct_formula():
    r, ns = 2, 4
    cf = factorial(ns) / (factorial(r - 1) * factorial(ns - r))
    p = _params(2.0, 2.0, 1.3, 0.8)
    for u in (0.25, 0.5, 0.75):
        t = core.quantile(p, u)
        F, f = core.cdf(p, t), core.pdf(p, t)
        direct = cf * f * F ** (r - 1) * (1.0 - F) ** (ns - r)
        got = series.order_stat_pdf(p, r, ns, t)
        assert got == pytest.approx(direct, rel=1e-6)


def test_order_statistic_moment_matches_quadrature():
    r, ns = 2, 4
    cf = factorial(ns) / (factorial(r - 1) * factorial(ns - r))
    p = _params(2.0, 2.0, 1.3, 0.8)
    want, _ = quad(
        lambda t: t * cf * core.pdf(p, t) * core.cdf(p, t) ** (r - 1)
        * core.sf(p, t) ** (ns - r),
        0, np.inf, limit=200,
    )
    assert series.order_stat_moment(p, r, ns, 1) == pytest.approx(want, rel=1e-6)


def test_renyi_entropy_routes():
    for delta in (2.0, 0.5):
        want, _ = quad(lambda t: core.pdf(P_INT, t) ** delta, 0, np.inf, limit=200)
        want = math.log(want) / (1.0 - delta)
        assert series.renyi_entropy(P_INT, delta) == pytest.approx(want, rel=1e-6)
        if ((P_INT.m - 1.0) * delta).is_integer():
            assert series.renyi_entropy(P_INT, delta, route="series") == pytest.approx(
                want, rel=1e-6
            )


def test_renyi_entropy_exponential_closed_form():
    # Exp(1) at delta = 2: (1-2)^{-1} log int f^2 = log 2
    pe = BKwParams(1.0, 1.0, 1.0, 1.0, get_family("exponential"), BaselineParams((1.0,)))
    assert series.renyi_entropy(pe, 2.0) == pytest.approx(math.log(2.0), rel=1e-9)
    assert series.renyi_entropy(pe, 2.0, route="series") == pytest.approx(
        math.log(2.0), rel=1e-9
    )


def test_renyi_series_route_needs_integer_exponent():
    # (m - 1) delta must be a non-negative integer for the binomial route
    p = _params(2.0, 1.5, 1.3, 0.8)
    with pytest.raises(ExpansionUnsupportedError):
        series.renyi_entropy(p, 0.7, route="series")


def test_mixture_route_needs_integer_first_shape():
    p = _params(2.5, 1.5, 1.3, 0.8)
    with pytest.raises(ExpansionUnsupportedError):
        series.mgf(p, 0.2, route="mixture")
