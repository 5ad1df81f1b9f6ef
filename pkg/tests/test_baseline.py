"""Per-family contract checks: quantile inversion, density/cdf
consistency, parameter derivatives against finite differences, and the
vectorized log-cdf hook."""

import math

import numpy as np
import pytest

from bkwg.baseline import FAMILIES, BaselineParams, get_family
from conftest import CANON

US = (1e-6, 1e-3, 0.05, 0.3, 0.5, 0.7, 0.95, 1.0 - 1e-3, 1.0 - 1e-6)


@pytest.fixture(params=sorted(FAMILIES))
def family(request):
    return get_family(request.param), BaselineParams(CANON[request.param])


def _mid_points(fam, bp):
    return [fam.quantile(bp, u) for u in (0.2, 0.5, 0.8)]


def test_registry_covers_canon():
    assert set(FAMILIES) == set(CANON)
    with pytest.raises(ValueError):
        get_family("nosuchfamily")


def test_param_name_arity(family):
    fam, bp = family
    assert len(fam.param_names) == len(bp.values)
    fam.validate(bp)


def test_quantile_round_trip(family):
    fam, bp = family
    for u in US:
        t = fam.quantile(bp, u)
        assert abs(fam.cdf(bp, t) - u) <= 1e-9
    for s in US:
        t = fam.survival_quantile(bp, s)
        assert abs(fam.sf(bp, t) - s) <= 1e-9


def test_cdf_sf_complement(family):
    fam, bp = family
    for t in _mid_points(fam, bp):
        assert fam.cdf(bp, t) + fam.sf(bp, t) == pytest.approx(1.0, abs=1e-12)
        assert fam.log_cdf(bp, t) == pytest.approx(math.log(fam.cdf(bp, t)), rel=1e-12)
        assert fam.log_sf(bp, t) == pytest.approx(math.log(fam.sf(bp, t)), rel=1e-12)


def test_pdf_matches_cdf_slope(family):
    fam, bp = family
    for t in _mid_points(fam, bp):
        h = 1e-6 * max(1.0, abs(t))
        slope = (fam.cdf(bp, t + h) - fam.cdf(bp, t - h)) / (2.0 * h)
        assert fam.pdf(bp, t) == pytest.approx(slope, rel=1e-5)
        assert fam.logpdf(bp, t) == pytest.approx(math.log(fam.pdf(bp, t)), rel=1e-12)


def _fd_params(fn, bp, t, i):
    vals = list(bp.values)
    h = 1e-6 * max(1.0, abs(vals[i]))
    hi = list(vals)
    hi[i] += h
    lo = list(vals)
    lo[i] -= h
    return (fn(BaselineParams(hi), t) - fn(BaselineParams(lo), t)) / (2.0 * h)


def test_param_derivatives_match_fd(family):
    fam, bp = family
    for t in _mid_points(fam, bp):
        for name, fn, dfn in (
            ("dcdf", fam.cdf, fam.dcdf_dparams),
            ("dlogpdf", fam.logpdf, fam.dlogpdf_dparams),
            ("dlogsf", fam.log_sf, fam.dlogsf_dparams),
        ):
            got = dfn(bp, t)
            assert len(got) == len(bp.values)
            for i, g in enumerate(got):
                want = _fd_params(fn, bp, t, i)
                assert g == pytest.approx(want, rel=2e-5, abs=1e-8), (
                    f"{fam.family_id}.{name} param {i} at t={t}"
                )


def test_log_cdf_vec_matches_scalar(family):
    fam, bp = family
    ts = np.array(_mid_points(fam, bp) + [fam.quantile(bp, u) for u in (0.01, 0.99)])
    vec = fam.log_cdf_vec(bp, ts)
    scal = np.array([fam.log_cdf(bp, t) for t in ts])
    np.testing.assert_allclose(vec, scal, rtol=1e-12, atol=0.0)


def test_support_low_boundary(family):
    fam, bp = family
    low = fam.support_low(bp)
    assert fam.cdf(bp, low) == 0.0
    assert fam.sf(bp, low) == 1.0
    assert fam.cdf(bp, low - 0.5) == 0.0
    assert fam.pdf(bp, low - 0.5) == 0.0


def test_local_power_describes_lower_tail(family):
    fam, bp = family
    lp = fam.local_power(bp)
    if lp is None:
        return
    e0, c0 = lp
    low = fam.support_low(bp)
    scale = fam.quantile(bp, 0.5) - low
    ratios = []
    # correction terms can decay slowly (fractional powers of t), so
    # the near point only needs to be in the right neighbourhood while
    # the far point must pin the ratio down; going much below 1e-10
    # would drown families with low > 0 in t - low rounding noise
    for eps in (1e-6, 1e-10):
        t = low + eps * scale
        ratios.append(fam.pdf(bp, t) / (c0 * (t - low) ** e0))
    assert ratios[0] == pytest.approx(1.0, rel=5e-2)
    assert ratios[1] == pytest.approx(1.0, rel=1e-3)


def test_validate_rejects_bad_params(family):
    fam, bp = family
    with pytest.raises(ValueError):
        fam.validate(BaselineParams(bp.values + (1.0,)))
    bad = (-abs(bp.values[0]),) + bp.values[1:]
    with pytest.raises(ValueError):
        fam.validate(BaselineParams(bad))


def test_gompertz_type_tails_saturate_instead_of_overflowing():
    # exp-type cumulative hazards overflow float arithmetic at moderate
    # t; the distribution functions must saturate, not raise
    for fid, vals in (("gompertz", (0.5, 0.8)), ("extended_weibull_gompertz", (0.7, 0.9))):
        fam = get_family(fid)
        bp = BaselineParams(vals)
        for t in (2.0e3, 1e6, 1e300):
            assert fam.logpdf(bp, t) == -math.inf
            assert fam.log_cdf(bp, t) == 0.0
            assert fam.log_sf(bp, t) == -math.inf
            assert fam.cdf(bp, t) == 1.0
            assert fam.pdf(bp, t) == 0.0
            assert fam.dcdf_dparams(bp, t) == (0.0, 0.0)
            assert all(not math.isnan(v) for v in fam.dlogpdf_dparams(bp, t))
            assert all(not math.isnan(v) for v in fam.dlogsf_dparams(bp, t))
