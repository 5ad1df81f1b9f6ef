"""The generated four-shape-parameter distribution.

For a baseline G the distribution function is

    F(t) = I_V(m, n),    V = 1 - [1 - G(t)^a]^b,

where I is the regularized incomplete beta ratio.  Equivalently: pass
G through a Kumaraswamy(a, b) layer and then a Beta(m, n) layer.  This
module evaluates the density, distribution, survival, hazard, reversed
hazard and cumulative hazard functions, the quantile, inverse-transform
sampling, quantile-based shape measures, and a critical-point scan that
classifies the density or hazard shape.

Everything is computed in log space; the only powers ever exponentiated
are safely bounded.  Writing S = 1 - G, x = G^a, A = 1 - x, W = A^b and
V = 1 - W, the numbers carried around are the logs of G, S, x, A, W, V
with series fallbacks where the direct route would round to 0 or 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .baseline import BaselineFamily, BaselineParams, get_family
from .specialfn import (
    DEFAULT_TOL,
    inv_reg_inc_beta,
    log1mexp,
    log_beta,
    reg_inc_beta,
)

__all__ = [
    "BKwParams",
    "ShapeReport",
    "pdf",
    "logpdf",
    "cdf",
    "sf",
    "hrf",
    "rhrf",
    "chrf",
    "quantile",
    "sample",
    "bowley_skewness",
    "moors_kurtosis",
    "critical_points",
]

_INF = math.inf

# below this log value, exp() is close enough to underflow that the
# first-order series for 1 - exp(.) products is used instead
_LOG_TINY = -700.0

_LN_HALF = math.log(0.5)


@dataclass(frozen=True)
class BKwParams:
    """Full parameter set: beta layer (m, n), Kumaraswamy layer (a, b),
    and the baseline family with its parameter vector.

    All four shape parameters must be strictly positive.  ``family``
    may be a lowercase id string or a registered family instance;
    ``baseline_params`` any sequence of reals.
    """

    m: float
    n: float
    a: float
    b: float
    family: BaselineFamily
    baseline_params: BaselineParams = field(default=None)

    def __post_init__(self):
        for name in ("m", "n", "a", "b"):
            val = float(getattr(self, name))
            if not (val > 0.0) or math.isinf(val):
                raise ValueError(
                    f"shape parameter {name} must be strictly positive "
                    f"and finite, got {val}"
                )
            object.__setattr__(self, name, val)
        fam = get_family(self.family)
        object.__setattr__(self, "family", fam)
        vals = fam.validate(self.baseline_params)
        object.__setattr__(self, "baseline_params", BaselineParams(vals))

    def with_values(self, m=None, n=None, a=None, b=None, baseline_params=None):
        """Copy with selected entries replaced."""
        return BKwParams(
            m=self.m if m is None else m,
            n=self.n if n is None else n,
            a=self.a if a is None else a,
            b=self.b if b is None else b,
            family=self.family,
            baseline_params=(
                self.baseline_params if baseline_params is None
                else baseline_params
            ),
        )


@dataclass(frozen=True)
class ShapeReport:
    """Outcome of a critical-point scan.

    ``critical_points`` holds (t, kind) pairs sorted by t with kind in
    {"max", "min", "inflexion"}; ``monotonicity_class`` is one of
    increasing, decreasing, unimodal, bathtub, other.
    """

    critical_points: tuple
    monotonicity_class: str


def _pieces(p, t):
    """Log quantities (lG, lS, lx, lA, lW, lV) at t; see module docstring."""
    v = p.baseline_params.values
    lG = p.family.log_cdf(v, t)
    lS = p.family.log_sf(v, t)
    if lG == -_INF:
        return lG, lS, -_INF, 0.0, 0.0, -_INF
    lx = p.a * lG
    if lS < _LOG_TINY:
        # G so close to 1 that exp(lS) underflows inside log1mexp;
        # 1 - G^a = a(1-G)(1 - (a-1)(1-G)/2 + ...)
        es = math.exp(lS)
        lA = math.log(p.a) + lS + math.log1p(-0.5 * (p.a - 1.0) * es)
    elif lx < 0.0:
        lA = log1mexp(lx)
    else:
        lA = -_INF
    if lA == -_INF:
        return lG, lS, lx, -_INF, -_INF, 0.0
    lW = p.b * lA
    if lx < _LOG_TINY:
        # G^a underflows; 1 - (1 - G^a)^b = b G^a (1 - (b-1)G^a/2 + ...)
        ex = math.exp(lx)
        lV = math.log(p.b) + lx + math.log1p(-0.5 * (p.b - 1.0) * ex)
    elif lW < 0.0:
        lV = log1mexp(lW)
    else:
        lV = -_INF
    return lG, lS, lx, lA, lW, lV


def _log_cdf(p, t):
    _, _, _, _, lW, lV = _pieces(p, t)
    if lV == -_INF:
        return -_INF
    if lW == -_INF:
        return 0.0
    if lV > _LN_HALF:
        # near the upper tail: log I_V = log1p(-I_W) keeps precision
        if lW < _LOG_TINY:
            s = math.exp(p.n * lW - math.log(p.n) - log_beta(p.n, p.m))
        else:
            s = reg_inc_beta(math.exp(lW), p.n, p.m)
        return math.log1p(-s)
    if lV < _LOG_TINY:
        # I_V(m,n) ~ V^m / (m B(m,n)) for V -> 0
        return p.m * lV - math.log(p.m) - log_beta(p.m, p.n)
    c = reg_inc_beta(math.exp(lV), p.m, p.n)
    if c > 1e-290:
        return math.log(c)
    return p.m * lV - math.log(p.m) - log_beta(p.m, p.n)


def _log_sf(p, t):
    _, _, _, _, lW, lV = _pieces(p, t)
    if lW == -_INF:
        return -_INF
    if lV == -_INF:
        return 0.0
    if lW > _LN_HALF:
        # deep lower tail: log sf = log1p(-cdf) with cdf tiny
        if lV < _LOG_TINY:
            c = math.exp(p.m * lV - math.log(p.m) - log_beta(p.m, p.n))
        else:
            c = reg_inc_beta(math.exp(lV), p.m, p.n)
        return math.log1p(-c)
    if lW < _LOG_TINY:
        # I_W(n,m) ~ W^n / (n B(n,m)) for W -> 0
        return p.n * lW - math.log(p.n) - log_beta(p.n, p.m)
    s = reg_inc_beta(math.exp(lW), p.n, p.m)
    if s > 1e-290:
        return math.log(s)
    return p.n * lW - math.log(p.n) - log_beta(p.n, p.m)


def logpdf(p, t):
    """Log-density at t; -inf outside the support, +inf where the
    density diverges at the lower support endpoint."""
    v = p.baseline_params.values
    low = p.family.support_low(v)
    if t < low:
        return -_INF
    if t == low:
        return _endpoint_logpdf(p)
    lg = p.family.logpdf(v, t)
    if lg == -_INF:
        return -_INF
    lG, lS, lx, lA, lW, lV = _pieces(p, t)
    if lG == -_INF or lA == -_INF:
        return -_INF
    return (
        -log_beta(p.m, p.n)
        + math.log(p.a)
        + math.log(p.b)
        + lg
        + (p.a - 1.0) * lG
        + (p.b * p.n - 1.0) * lA
        + (p.m - 1.0) * lV
    )


def _endpoint_logpdf(p):
    """Density limit at the lower support endpoint.

    With g(t) ~ c0 (t-low)^e0 the density behaves like
    (a b^m / B(m,n)) c0 (c0/(e0+1))^{am-1} (t-low)^{(e0+1)am - 1},
    so the limit is 0, a finite constant, or +inf depending on the
    sign of the exponent.
    """
    v = p.baseline_params.values
    lp = p.family.local_power(v)
    if lp is None:
        return -_INF
    e0, c0 = lp
    am = p.a * p.m
    expo = (e0 + 1.0) * am - 1.0
    if expo > 0.0:
        return -_INF
    if expo < 0.0:
        return _INF
    return (
        math.log(p.a)
        + p.m * math.log(p.b)
        - log_beta(p.m, p.n)
        + math.log(c0)
        + (am - 1.0) * (math.log(c0) - math.log(e0 + 1.0))
    )


def pdf(p, t):
    """Density at t."""
    lp = logpdf(p, t)
    if lp == -_INF:
        return 0.0
    if lp == _INF:
        return _INF
    return math.exp(lp)


def cdf(p, t):
    """Distribution function I_V(m, n) with V = 1 - [1 - G(t)^a]^b.

    Evaluated from whichever of V, W = 1 - V is small: once V passes
    1/2 the float exp(lV) saturates toward 1 and would erase the tail,
    so the complement 1 - I_W(n, m) is used there instead.
    """
    _, _, _, _, lW, lV = _pieces(p, t)
    if lV == -_INF:
        return 0.0
    if lW == -_INF:
        return 1.0
    if lV > _LN_HALF:
        if lW < _LOG_TINY:
            s = math.exp(p.n * lW - math.log(p.n) - log_beta(p.n, p.m))
        else:
            s = reg_inc_beta(math.exp(lW), p.n, p.m)
        return 1.0 - s
    if lV < _LOG_TINY:
        lc = p.m * lV - math.log(p.m) - log_beta(p.m, p.n)
        return math.exp(lc)
    return reg_inc_beta(math.exp(lV), p.m, p.n)


def sf(p, t):
    """Survival function, evaluated from the complement side so it
    keeps relative accuracy deep in the upper tail."""
    _, _, _, _, lW, lV = _pieces(p, t)
    if lW == -_INF:
        return 0.0
    if lV == -_INF:
        return 1.0
    if lW > _LN_HALF:
        if lV < _LOG_TINY:
            c = math.exp(p.m * lV - math.log(p.m) - log_beta(p.m, p.n))
        else:
            c = reg_inc_beta(math.exp(lV), p.m, p.n)
        return 1.0 - c
    if lW < _LOG_TINY:
        ls = p.n * lW - math.log(p.n) - log_beta(p.n, p.m)
        return math.exp(ls)
    return reg_inc_beta(math.exp(lW), p.n, p.m)


def hrf(p, t):
    """Hazard rate pdf/sf, formed by log-space subtraction."""
    lp = logpdf(p, t)
    if lp == -_INF:
        return 0.0
    if lp == _INF:
        return _INF
    ls = _log_sf(p, t)
    if ls == -_INF:
        return _INF
    return math.exp(lp - ls)


def rhrf(p, t):
    """Reversed hazard rate pdf/cdf; 0 outside the support."""
    lp = logpdf(p, t)
    if lp == -_INF:
        return 0.0
    if lp == _INF:
        return _INF
    lc = _log_cdf(p, t)
    if lc == -_INF:
        return 0.0
    return math.exp(lp - lc)


def chrf(p, t):
    """Cumulative hazard -log sf(t); +inf once the survival function
    underflows to zero."""
    ls = _log_sf(p, t)
    if ls == -_INF:
        return _INF
    return -ls


def quantile(p, u, tol=DEFAULT_TOL):
    """Quantile function.

    Inverts the beta layer with the incomplete-beta inverse (from the
    complement side for u > 1/2), peels the Kumaraswamy layer in log
    space, and finishes with the baseline quantile, so both tails keep
    full precision.
    """
    if not 0.0 < u < 1.0:
        raise ValueError("quantile requires 0 < u < 1")
    v = p.baseline_params.values
    if u <= 0.5:
        V = inv_reg_inc_beta(u, p.m, p.n, tol)
        lW = math.log1p(-V)
    else:
        W = inv_reg_inc_beta(1.0 - u, p.n, p.m, tol)
        lW = math.log(W) if W > 0.0 else -_INF
    if lW == -_INF:
        lGt = 0.0
    else:
        lA = lW / p.b
        lGt = log1mexp(lA) / p.a if lA < 0.0 else -_INF
    if lGt == -_INF:
        # u so small the target baseline probability underflows
        return p.family.support_low(v)
    if lGt > -math.log(2.0):
        sG = -math.expm1(lGt)
        if sG <= 0.0:
            return p.family.survival_quantile(v, 5e-324)
        return p.family.survival_quantile(v, sG)
    return p.family.quantile(v, math.exp(lGt))


def sample(p, count, seed):
    """Inverse-transform sample of the given size.

    Uniform variates come from numpy's seeded PCG64 generator, so a
    fixed (seed, count) pair always produces the same vector.
    """
    count = int(count)
    if count < 1:
        raise ValueError("count must be a positive integer")
    rng = np.random.default_rng(seed)
    us = rng.random(count)
    low = p.family.support_low(p.baseline_params.values)
    out = np.empty(count, dtype=float)
    for i, u in enumerate(us):
        out[i] = low if u == 0.0 else quantile(p, u)
    return out


def bowley_skewness(p):
    """Quartile-based skewness [Q(3/4) + Q(1/4) - 2 Q(1/2)] over the
    interquartile range; lies in [-1, 1]."""
    q1 = quantile(p, 0.25)
    q2 = quantile(p, 0.5)
    q3 = quantile(p, 0.75)
    return (q3 + q1 - 2.0 * q2) / (q3 - q1)


def moors_kurtosis(p):
    """Octile-based kurtosis [Q(7/8) - Q(5/8) + Q(3/8) - Q(1/8)] over
    [Q(6/8) - Q(2/8)]; positive for any distribution."""
    o = [quantile(p, k / 8.0) for k in range(1, 8)]
    return (o[6] - o[4] + o[2] - o[0]) / (o[5] - o[1])


def _log_target(p, which):
    if which == "density":
        return lambda t: logpdf(p, t)
    if which == "hazard":
        return lambda t: logpdf(p, t) - _log_sf(p, t)
    raise ValueError("target must be 'density' or 'hazard'")


_GRID_SIZE = 2048


def critical_points(p, target="density", search_interval=None):
    """Scan for critical points of the density or hazard.

    The derivative of the log target is evaluated by central finite
    differences on a 2048-point grid (uniform in quantile space between
    1e-4 and 1 - 1e-4 unless ``search_interval`` gives explicit
    endpoints), sign changes are refined by bisection to about
    1e-10 of the grid span, and each root is classified by the sign of
    the slope change: falling through zero is a maximum, rising is a
    minimum, touching without crossing an inflexion point.

    Returns
    -------
    ShapeReport
        Sorted critical points plus a monotonicity class for the target
        (increasing, decreasing, unimodal, bathtub, other).
    """
    if search_interval is None:
        t_lo = quantile(p, 1e-4)
        t_hi = quantile(p, 1.0 - 1e-4)
    else:
        t_lo, t_hi = map(float, search_interval)
        low = p.family.support_low(p.baseline_params.values)
        if not (low <= t_lo < t_hi):
            raise ValueError("search_interval must be within the support")
    logf = _log_target(p, target)
    span = t_hi - t_lo
    h = 1e-6 * span

    def dlogf(t):
        return (logf(t + h) - logf(t - h)) / (2.0 * h)

    ts = np.linspace(t_lo, t_hi, _GRID_SIZE)
    phi = np.array([dlogf(t) for t in ts])
    good = np.isfinite(phi)

    roots = []
    for i in range(_GRID_SIZE - 1):
        if not (good[i] and good[i + 1]):
            continue
        a_, b_ = phi[i], phi[i + 1]
        if a_ == 0.0:
            # grid point exactly on a stationary point
            left = phi[i - 1] if i > 0 and good[i - 1] else -b_
            kind = "max" if b_ < 0.0 else ("min" if b_ > 0.0 else "inflexion")
            if left * b_ > 0.0:
                kind = "inflexion"
            roots.append((ts[i], kind))
            continue
        if a_ * b_ < 0.0:
            lo_t, hi_t = ts[i], ts[i + 1]
            flo = a_
            while hi_t - lo_t > 1e-10 * span:
                mid = 0.5 * (lo_t + hi_t)
                fm = dlogf(mid)
                if fm == 0.0:
                    lo_t = hi_t = mid
                    break
                if (fm > 0.0) == (flo > 0.0):
                    lo_t, flo = mid, fm
                else:
                    hi_t = mid
            root = 0.5 * (lo_t + hi_t)
            roots.append((root, "max" if a_ > 0.0 else "min"))

    roots.sort(key=lambda r: r[0])

    turning = [k for _, k in roots if k != "inflexion"]
    if not turning:
        finite = phi[good]
        if finite.size == 0:
            cls = "other"
        elif np.all(finite > 0.0):
            cls = "increasing"
        elif np.all(finite < 0.0):
            cls = "decreasing"
        else:
            cls = "other"
    elif turning == ["max"]:
        cls = "unimodal"
    elif turning == ["min"]:
        cls = "bathtub"
    else:
        cls = "other"

    return ShapeReport(critical_points=tuple(roots), monotonicity_class=cls)
