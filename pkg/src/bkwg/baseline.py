"""Baseline distribution registry.

Every generated distribution in this package is built on top of a
baseline law G(t).  This module provides the ten supported families
behind one uniform interface: cdf, pdf, log-pdf, quantile, plus the
log-survival and parameter-derivative hooks the fitting code needs.

Families are addressed by lowercase string id (``"weibull"``,
``"lomax"``, ...) or by the registered :class:`BaselineFamily`
instance itself.  All evaluators are pure functions of their
arguments; family objects are immutable after construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .specialfn import log1mexp

__all__ = [
    "BaselineFamily",
    "BaselineParams",
    "FAMILIES",
    "get_family",
    "make_extended_weibull",
    "baseline_cdf",
    "baseline_pdf",
    "baseline_logpdf",
    "baseline_quantile",
]

_INF = math.inf
_EXP_CAP = 709.0  # math.exp overflows just above this


def _expm1_cap(x):
    """expm1 that saturates to inf instead of raising OverflowError.

    Exponential-type cumulative hazards overflow at moderate t (for
    gompertz, lam * t near 710); the distribution functions there are
    exactly 0 or 1 in float, so the limit values are the right answer.
    """
    return _INF if x > _EXP_CAP else math.expm1(x)


def _exp_cap(x):
    return _INF if x > _EXP_CAP else math.exp(x)


@dataclass(frozen=True)
class BaselineParams:
    """Parameter vector for one baseline family, in the family's
    documented order.  Validity (positivity and the like) is checked by
    the owning family, not here."""

    values: tuple

    def __init__(self, values):
        object.__setattr__(self, "values", tuple(float(v) for v in values))

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)


def _values(params):
    """Accept a BaselineParams, a bare sequence, or a scalar."""
    if isinstance(params, BaselineParams):
        return params.values
    if isinstance(params, (int, float)):
        return (float(params),)
    return tuple(float(v) for v in params)


def _log1mexp_arr(x):
    """Elementwise log(1 - exp(x)) for arrays of non-positive values."""
    x = np.asarray(x, dtype=float)
    out = np.full_like(x, -_INF)
    hi = x > -math.log(2.0)
    lo = ~hi & (x < 0.0)
    out[hi] = np.log(-np.expm1(x[hi]))
    out[lo] = np.log1p(-np.exp(x[lo]))
    return out


def _endpoint_logpdf(e0, c0):
    """Log-density limit at the lower support endpoint when the density
    behaves like c0 * (t - low)^e0 there."""
    if e0 is None or e0 > 0.0:
        return -_INF
    if e0 < 0.0:
        return _INF
    return math.log(c0)


class BaselineFamily:
    """One baseline distribution G with density g and quantile Q_G.

    Subclasses fill in the closed forms.  The heavy lifting happens in
    log space (``log_cdf``, ``log_sf``, ``logpdf``) so the generated
    distributions stay accurate deep in both tails.
    """

    family_id = ""
    param_names = ()

    # -- parameter handling -------------------------------------------------

    def validate(self, params):
        v = _values(params)
        if len(v) != len(self.param_names):
            raise ValueError(
                f"{self.family_id} expects {len(self.param_names)} "
                f"parameters {self.param_names}, got {len(v)}"
            )
        for name, x in zip(self.param_names, v):
            if not (x > 0.0) or math.isinf(x):
                raise ValueError(
                    f"{self.family_id} parameter {name} must be strictly "
                    f"positive and finite, got {x}"
                )
        return v

    def support_low(self, params):
        return 0.0

    # -- core evaluators (subclass responsibility) --------------------------

    def log_cdf(self, params, t):
        """log G(t); -inf at and below the support's lower endpoint."""
        raise NotImplementedError

    def log_sf(self, params, t):
        """log(1 - G(t)); 0 at and below the lower endpoint."""
        raise NotImplementedError

    def logpdf(self, params, t):
        raise NotImplementedError

    def quantile(self, params, u):
        """t with G(t) = u, accurate for u near 0."""
        raise NotImplementedError

    def log_cdf_vec(self, params, ts):
        """Vectorized log G over an array of points.  The default is a
        scalar loop; families with array-friendly closed forms override
        it (the moment-matching objective calls this in a hot loop)."""
        return np.array([self.log_cdf(params, t) for t in ts])

    def survival_quantile(self, params, s):
        """t with 1 - G(t) = s, accurate for s near 0."""
        return self.quantile(params, 1.0 - s)

    def local_power(self, params):
        """(e0, c0) with g(t) ~ c0 (t - low)^e0 near the lower support
        endpoint, or None when g vanishes faster than any power."""
        raise NotImplementedError

    # -- derived evaluators --------------------------------------------------

    def cdf(self, params, t):
        lg = self.log_cdf(params, t)
        return 0.0 if lg == -_INF else min(1.0, math.exp(lg))

    def sf(self, params, t):
        ls = self.log_sf(params, t)
        return 0.0 if ls == -_INF else min(1.0, math.exp(ls))

    def pdf(self, params, t):
        lp = self.logpdf(params, t)
        if lp == -_INF:
            return 0.0
        if lp == _INF:
            return _INF
        return math.exp(lp)

    # -- parameter derivatives (analytic in subclasses, FD fallback) --------

    def dcdf_dparams(self, params, t):
        """Partial derivatives of G(t) in each parameter."""
        return self._fd(lambda v: self.cdf(v, t), _values(params))

    def dlogpdf_dparams(self, params, t):
        """Partial derivatives of log g(t) in each parameter."""
        return self._fd(lambda v: self.logpdf(v, t), _values(params))

    def dlogsf_dparams(self, params, t):
        """Partial derivatives of log(1 - G(t)) in each parameter;
        identically zero at and below the lower support endpoint."""
        if t <= self.support_low(params):
            return (0.0,) * len(self.param_names)
        return self._fd(lambda v: self.log_sf(v, t), _values(params))

    @staticmethod
    def _fd(fn, v):
        out = []
        for i, x in enumerate(v):
            h = 1e-6 * max(abs(x), 1e-3)
            lo = min(x - h, x * (1.0 - 1e-6))
            hi = x + h
            vl = list(v)
            vl[i] = hi
            fhi = fn(tuple(vl))
            vl[i] = lo
            flo = fn(tuple(vl))
            out.append((fhi - flo) / (hi - lo))
        return tuple(out)

    def __repr__(self):
        return f"<BaselineFamily {self.family_id}{self.param_names}>"


# ---------------------------------------------------------------------------
# the ten families
# ---------------------------------------------------------------------------


class _Exponential(BaselineFamily):
    family_id = "exponential"
    param_names = ("lam",)

    def log_cdf(self, params, t):
        (lam,) = _values(params)
        if t <= 0.0:
            return -_INF
        return log1mexp(-lam * t)

    def log_sf(self, params, t):
        (lam,) = _values(params)
        if t <= 0.0:
            return 0.0
        return -lam * t

    def logpdf(self, params, t):
        (lam,) = _values(params)
        if t < 0.0:
            return -_INF
        return math.log(lam) - lam * t

    def quantile(self, params, u):
        (lam,) = _values(params)
        return -math.log1p(-u) / lam

    def survival_quantile(self, params, s):
        (lam,) = _values(params)
        return -math.log(s) / lam

    def local_power(self, params):
        (lam,) = _values(params)
        return 0.0, lam

    def dcdf_dparams(self, params, t):
        (lam,) = _values(params)
        if t <= 0.0:
            return (0.0,)
        return (t * math.exp(-lam * t),)

    def dlogpdf_dparams(self, params, t):
        (lam,) = _values(params)
        return (1.0 / lam - t,)

    def dlogsf_dparams(self, params, t):
        if t <= 0.0:
            return (0.0,)
        return (-t,)

    def log_cdf_vec(self, params, ts):
        (lam,) = _values(params)
        ts = np.asarray(ts, dtype=float)
        return np.where(ts > 0.0, _log1mexp_arr(-lam * np.maximum(ts, 0.0)), -_INF)


class _Weibull(BaselineFamily):
    family_id = "weibull"
    param_names = ("lam", "beta")

    def log_cdf(self, params, t):
        lam, beta = _values(params)
        if t <= 0.0:
            return -_INF
        return log1mexp(-lam * t ** beta)

    def log_sf(self, params, t):
        lam, beta = _values(params)
        if t <= 0.0:
            return 0.0
        return -lam * t ** beta

    def logpdf(self, params, t):
        lam, beta = _values(params)
        if t < 0.0:
            return -_INF
        if t == 0.0:
            return _endpoint_logpdf(*self.local_power(params))
        return (
            math.log(lam) + math.log(beta) + (beta - 1.0) * math.log(t)
            - lam * t ** beta
        )

    def quantile(self, params, u):
        lam, beta = _values(params)
        return (-math.log1p(-u) / lam) ** (1.0 / beta)

    def survival_quantile(self, params, s):
        lam, beta = _values(params)
        return (-math.log(s) / lam) ** (1.0 / beta)

    def local_power(self, params):
        lam, beta = _values(params)
        return beta - 1.0, lam * beta

    def dcdf_dparams(self, params, t):
        lam, beta = _values(params)
        if t <= 0.0:
            return (0.0, 0.0)
        tb = t ** beta
        e = math.exp(-lam * tb)
        return (tb * e, lam * tb * math.log(t) * e)

    def dlogpdf_dparams(self, params, t):
        lam, beta = _values(params)
        tb = t ** beta
        lt = math.log(t)
        return (1.0 / lam - tb, 1.0 / beta + lt - lam * tb * lt)

    def dlogsf_dparams(self, params, t):
        lam, beta = _values(params)
        if t <= 0.0:
            return (0.0, 0.0)
        tb = t ** beta
        return (-tb, -lam * tb * math.log(t))

    def log_cdf_vec(self, params, ts):
        lam, beta = _values(params)
        ts = np.asarray(ts, dtype=float)
        return np.where(
            ts > 0.0,
            _log1mexp_arr(-lam * np.maximum(ts, 0.0) ** beta),
            -_INF,
        )


class _Lomax(BaselineFamily):
    family_id = "lomax"
    param_names = ("beta", "delta")

    def log_cdf(self, params, t):
        beta, delta = _values(params)
        if t <= 0.0:
            return -_INF
        return log1mexp(-beta * math.log1p(t / delta))

    def log_sf(self, params, t):
        beta, delta = _values(params)
        if t <= 0.0:
            return 0.0
        return -beta * math.log1p(t / delta)

    def logpdf(self, params, t):
        beta, delta = _values(params)
        if t < 0.0:
            return -_INF
        return (
            math.log(beta) - math.log(delta)
            - (beta + 1.0) * math.log1p(t / delta)
        )

    def quantile(self, params, u):
        beta, delta = _values(params)
        return delta * math.expm1(-math.log1p(-u) / beta)

    def survival_quantile(self, params, s):
        beta, delta = _values(params)
        return delta * math.expm1(-math.log(s) / beta)

    def local_power(self, params):
        beta, delta = _values(params)
        return 0.0, beta / delta

    def dcdf_dparams(self, params, t):
        beta, delta = _values(params)
        if t <= 0.0:
            return (0.0, 0.0)
        L = math.log1p(t / delta)
        s = math.exp(-beta * L)
        return (s * L, -s * beta * t / (delta * (delta + t)))

    def dlogpdf_dparams(self, params, t):
        beta, delta = _values(params)
        L = math.log1p(t / delta)
        return (
            1.0 / beta - L,
            -1.0 / delta + (beta + 1.0) * t / (delta * (delta + t)),
        )

    def dlogsf_dparams(self, params, t):
        beta, delta = _values(params)
        if t <= 0.0:
            return (0.0, 0.0)
        return (
            -math.log1p(t / delta),
            beta * t / (delta * (delta + t)),
        )


class _Frechet(BaselineFamily):
    family_id = "frechet"
    param_names = ("lam", "delta")

    def log_cdf(self, params, t):
        lam, delta = _values(params)
        if t <= 0.0:
            return -_INF
        return -((delta / t) ** lam)

    def log_sf(self, params, t):
        lam, delta = _values(params)
        if t <= 0.0:
            return 0.0
        return log1mexp(-((delta / t) ** lam))

    def logpdf(self, params, t):
        lam, delta = _values(params)
        if t <= 0.0:
            return -_INF
        r = (delta / t) ** lam
        return (
            math.log(lam) + lam * math.log(delta)
            - (lam + 1.0) * math.log(t) - r
        )

    def quantile(self, params, u):
        lam, delta = _values(params)
        return delta * (-math.log(u)) ** (-1.0 / lam)

    def survival_quantile(self, params, s):
        lam, delta = _values(params)
        return delta * (-math.log1p(-s)) ** (-1.0 / lam)

    def local_power(self, params):
        return None

    def dcdf_dparams(self, params, t):
        lam, delta = _values(params)
        if t <= 0.0:
            return (0.0, 0.0)
        r = (delta / t) ** lam
        G = math.exp(-r)
        return (-G * r * math.log(delta / t), -G * lam * r / delta)

    def dlogpdf_dparams(self, params, t):
        lam, delta = _values(params)
        r = (delta / t) ** lam
        ldt = math.log(delta / t)
        return (1.0 / lam + ldt - r * ldt, (lam / delta) * (1.0 - r))

    def dlogsf_dparams(self, params, t):
        # d log(1-G)/dtheta = -(G/(1-G)) d logG/dtheta with logG = -r
        lam, delta = _values(params)
        if t <= 0.0:
            return (0.0, 0.0)
        r = (delta / t) ** lam
        ratio = r / math.expm1(r)  # G r / (1 - G)
        return (ratio * math.log(delta / t), ratio * lam / delta)


class _Gompertz(BaselineFamily):
    family_id = "gompertz"
    param_names = ("lam", "beta")

    def log_cdf(self, params, t):
        lam, beta = _values(params)
        if t <= 0.0:
            return -_INF
        return log1mexp(-(beta / lam) * _expm1_cap(lam * t))

    def log_sf(self, params, t):
        lam, beta = _values(params)
        if t <= 0.0:
            return 0.0
        return -(beta / lam) * _expm1_cap(lam * t)

    def logpdf(self, params, t):
        lam, beta = _values(params)
        if t < 0.0:
            return -_INF
        return math.log(beta) + lam * t - (beta / lam) * _expm1_cap(lam * t)

    def quantile(self, params, u):
        lam, beta = _values(params)
        return math.log1p(-lam * math.log1p(-u) / beta) / lam

    def survival_quantile(self, params, s):
        lam, beta = _values(params)
        return math.log1p(-lam * math.log(s) / beta) / lam

    def local_power(self, params):
        lam, beta = _values(params)
        return 0.0, beta

    def dcdf_dparams(self, params, t):
        lam, beta = _values(params)
        if t <= 0.0:
            return (0.0, 0.0)
        em = _expm1_cap(lam * t)
        if em == _INF:
            return (0.0, 0.0)
        s = math.exp(-(beta / lam) * em)
        dlam = s * beta * (lam * t * math.exp(lam * t) - em) / (lam * lam)
        dbeta = s * em / lam
        return (dlam, dbeta)

    def dlogpdf_dparams(self, params, t):
        lam, beta = _values(params)
        em = _expm1_cap(lam * t)
        if em == _INF:
            return (-_INF, -_INF)
        dlam = t - beta * (lam * t * math.exp(lam * t) - em) / (lam * lam)
        dbeta = 1.0 / beta - em / lam
        return (dlam, dbeta)

    def dlogsf_dparams(self, params, t):
        lam, beta = _values(params)
        if t <= 0.0:
            return (0.0, 0.0)
        em = _expm1_cap(lam * t)
        if em == _INF:
            return (-_INF, -_INF)
        return (
            -beta * (lam * t * math.exp(lam * t) - em) / (lam * lam),
            -em / lam,
        )


class _Dagum(BaselineFamily):
    family_id = "dagum"
    param_names = ("tau1", "tau2", "tau3")

    def log_cdf(self, params, t):
        t1, t2, t3 = _values(params)
        if t <= 0.0:
            return -_INF
        return -t1 * math.log1p(t2 * t ** (-t3))

    def log_sf(self, params, t):
        t1, t2, t3 = _values(params)
        if t <= 0.0:
            return 0.0
        return log1mexp(-t1 * math.log1p(t2 * t ** (-t3)))

    def logpdf(self, params, t):
        t1, t2, t3 = _values(params)
        if t <= 0.0:
            if t == 0.0:
                return _endpoint_logpdf(*self.local_power(params))
            return -_INF
        return (
            math.log(t1) + math.log(t2) + math.log(t3)
            - (t3 + 1.0) * math.log(t)
            - (t1 + 1.0) * math.log1p(t2 * t ** (-t3))
        )

    def quantile(self, params, u):
        t1, t2, t3 = _values(params)
        return (math.expm1(-math.log(u) / t1) / t2) ** (-1.0 / t3)

    def survival_quantile(self, params, s):
        t1, t2, t3 = _values(params)
        return (math.expm1(-math.log1p(-s) / t1) / t2) ** (-1.0 / t3)

    def local_power(self, params):
        t1, t2, t3 = _values(params)
        return t1 * t3 - 1.0, t1 * t3 * t2 ** (-t1)

    def dcdf_dparams(self, params, t):
        t1, t2, t3 = _values(params)
        if t <= 0.0:
            return (0.0, 0.0, 0.0)
        A = t2 * t ** (-t3)
        L = math.log1p(A)
        R = A / (1.0 + A)
        G = math.exp(-t1 * L)
        return (-G * L, -t1 * G * R / t2, t1 * G * R * math.log(t))

    def dlogpdf_dparams(self, params, t):
        t1, t2, t3 = _values(params)
        A = t2 * t ** (-t3)
        L = math.log1p(A)
        R = A / (1.0 + A)
        lt = math.log(t)
        return (
            1.0 / t1 - L,
            1.0 / t2 - (t1 + 1.0) * R / t2,
            1.0 / t3 - lt + (t1 + 1.0) * R * lt,
        )

    def dlogsf_dparams(self, params, t):
        # d log(1-G)/dtheta = (G/(1-G)) (t1 L)'_theta with G = e^{-t1 L}
        t1, t2, t3 = _values(params)
        if t <= 0.0:
            return (0.0, 0.0, 0.0)
        A = t2 * t ** (-t3)
        L = math.log1p(A)
        R = A / (1.0 + A)
        ratio = 1.0 / math.expm1(t1 * L)  # G / (1 - G)
        return (
            ratio * L,
            ratio * t1 * R / t2,
            -ratio * t1 * R * math.log(t),
        )


class _SinghMaddala(BaselineFamily):
    family_id = "singh_maddala"
    param_names = ("gamma1", "gamma2", "gamma3")

    def log_cdf(self, params, t):
        g1, g2, g3 = _values(params)
        if t <= 0.0:
            return -_INF
        return log1mexp(-g1 * math.log1p(g2 * t ** g3))

    def log_sf(self, params, t):
        g1, g2, g3 = _values(params)
        if t <= 0.0:
            return 0.0
        return -g1 * math.log1p(g2 * t ** g3)

    def logpdf(self, params, t):
        g1, g2, g3 = _values(params)
        if t <= 0.0:
            if t == 0.0:
                return _endpoint_logpdf(*self.local_power(params))
            return -_INF
        return (
            math.log(g1) + math.log(g2) + math.log(g3)
            + (g3 - 1.0) * math.log(t)
            - (g1 + 1.0) * math.log1p(g2 * t ** g3)
        )

    def quantile(self, params, u):
        g1, g2, g3 = _values(params)
        return (math.expm1(-math.log1p(-u) / g1) / g2) ** (1.0 / g3)

    def survival_quantile(self, params, s):
        g1, g2, g3 = _values(params)
        return (math.expm1(-math.log(s) / g1) / g2) ** (1.0 / g3)

    def local_power(self, params):
        g1, g2, g3 = _values(params)
        return g3 - 1.0, g1 * g2 * g3

    def dcdf_dparams(self, params, t):
        g1, g2, g3 = _values(params)
        if t <= 0.0:
            return (0.0, 0.0, 0.0)
        A = g2 * t ** g3
        L = math.log1p(A)
        R = A / (1.0 + A)
        s = math.exp(-g1 * L)
        return (s * L, g1 * s * R / g2, g1 * s * R * math.log(t))

    def dlogpdf_dparams(self, params, t):
        g1, g2, g3 = _values(params)
        A = g2 * t ** g3
        L = math.log1p(A)
        R = A / (1.0 + A)
        lt = math.log(t)
        return (
            1.0 / g1 - L,
            1.0 / g2 - (g1 + 1.0) * R / g2,
            1.0 / g3 + lt - (g1 + 1.0) * R * lt,
        )

    def dlogsf_dparams(self, params, t):
        g1, g2, g3 = _values(params)
        if t <= 0.0:
            return (0.0, 0.0, 0.0)
        A = g2 * t ** g3
        L = math.log1p(A)
        R = A / (1.0 + A)
        return (-L, -g1 * R / g2, -g1 * R * math.log(t))


class _ModifiedWeibull(BaselineFamily):
    family_id = "modified_weibull"
    param_names = ("sigma", "beta", "gamma")

    def validate(self, params):
        v = _values(params)
        if len(v) != 3:
            raise ValueError(
                "modified_weibull expects 3 parameters (sigma, beta, gamma)"
            )
        sigma, beta, gamma = v
        if sigma < 0.0 or beta < 0.0 or sigma + beta <= 0.0:
            raise ValueError(
                "modified_weibull requires sigma, beta >= 0 with "
                "sigma + beta > 0"
            )
        if not (gamma > 0.0):
            raise ValueError("modified_weibull requires gamma > 0")
        return v

    def _cum(self, v, t):
        sigma, beta, gamma = v
        return sigma * t + beta * t ** gamma

    def log_cdf(self, params, t):
        v = _values(params)
        if t <= 0.0:
            return -_INF
        return log1mexp(-self._cum(v, t))

    def log_sf(self, params, t):
        v = _values(params)
        if t <= 0.0:
            return 0.0
        return -self._cum(v, t)

    def logpdf(self, params, t):
        sigma, beta, gamma = v = _values(params)
        if t < 0.0:
            return -_INF
        if t == 0.0:
            return _endpoint_logpdf(*self.local_power(params))
        rate = sigma + beta * gamma * t ** (gamma - 1.0)
        if rate <= 0.0:
            return -_INF
        return math.log(rate) - self._cum(v, t)

    def _invert(self, v, y):
        # cumulative hazard sigma*t + beta*t^gamma = y
        sigma, beta, gamma = v
        if y <= 0.0:
            return 0.0
        if beta == 0.0:
            return y / sigma
        if sigma == 0.0:
            return (y / beta) ** (1.0 / gamma)
        if gamma == 1.0:
            return y / (sigma + beta)
        hi = min(y / sigma, (y / beta) ** (1.0 / gamma))
        f = lambda t: sigma * t + beta * t ** gamma - y
        if f(hi) <= 0.0:
            return hi
        return brentq(f, 0.0, hi, xtol=1e-300, rtol=8.9e-16, maxiter=200)

    def quantile(self, params, u):
        return self._invert(_values(params), -math.log1p(-u))

    def survival_quantile(self, params, s):
        return self._invert(_values(params), -math.log(s))

    def local_power(self, params):
        sigma, beta, gamma = _values(params)
        if beta > 0.0 and gamma < 1.0:
            return gamma - 1.0, beta * gamma
        if beta > 0.0 and gamma == 1.0:
            return 0.0, sigma + beta
        if sigma > 0.0:
            return 0.0, sigma
        return gamma - 1.0, beta * gamma

    def dcdf_dparams(self, params, t):
        sigma, beta, gamma = v = _values(params)
        if t <= 0.0:
            return (0.0, 0.0, 0.0)
        s = math.exp(-self._cum(v, t))
        tg = t ** gamma
        return (t * s, tg * s, beta * tg * math.log(t) * s)

    def dlogpdf_dparams(self, params, t):
        sigma, beta, gamma = _values(params)
        tgm1 = t ** (gamma - 1.0)
        rate = sigma + beta * gamma * tgm1
        tg = t ** gamma
        lt = math.log(t)
        return (
            1.0 / rate - t,
            gamma * tgm1 / rate - tg,
            beta * tgm1 * (1.0 + gamma * lt) / rate - beta * tg * lt,
        )

    def dlogsf_dparams(self, params, t):
        sigma, beta, gamma = _values(params)
        if t <= 0.0:
            return (0.0, 0.0, 0.0)
        tg = t ** gamma
        return (-t, -tg, -beta * tg * math.log(t))


class _ExpPareto(BaselineFamily):
    family_id = "exp_pareto"
    param_names = ("theta", "k", "gamma")

    def support_low(self, params):
        theta, k, gamma = _values(params)
        return theta

    def log_cdf(self, params, t):
        theta, k, gamma = _values(params)
        if t <= theta:
            return -_INF
        return gamma * log1mexp(k * math.log(theta / t))

    def log_sf(self, params, t):
        theta, k, gamma = _values(params)
        if t <= theta:
            return 0.0
        return log1mexp(gamma * log1mexp(k * math.log(theta / t)))

    def logpdf(self, params, t):
        theta, k, gamma = _values(params)
        if t < theta:
            return -_INF
        if t == theta:
            return _endpoint_logpdf(*self.local_power(params))
        lw = log1mexp(k * math.log(theta / t))
        return (
            math.log(gamma) + math.log(k) + k * math.log(theta)
            - (k + 1.0) * math.log(t) + (gamma - 1.0) * lw
        )

    def quantile(self, params, u):
        theta, k, gamma = _values(params)
        return theta * math.exp(-log1mexp(math.log(u) / gamma) / k)

    def survival_quantile(self, params, s):
        theta, k, gamma = _values(params)
        return theta * math.exp(-log1mexp(math.log1p(-s) / gamma) / k)

    def local_power(self, params):
        theta, k, gamma = _values(params)
        return gamma - 1.0, gamma * (k / theta) ** gamma

    def dcdf_dparams(self, params, t):
        theta, k, gamma = _values(params)
        if t <= theta:
            return (0.0, 0.0, 0.0)
        ltt = math.log(theta / t)
        P = math.exp(k * ltt)
        W = -math.expm1(k * ltt)
        Wg = W ** gamma
        return (
            -gamma * k * P * Wg / (W * theta),
            -gamma * P * ltt * Wg / W,
            Wg * math.log(W),
        )

    def dlogpdf_dparams(self, params, t):
        theta, k, gamma = _values(params)
        ltt = math.log(theta / t)
        P = math.exp(k * ltt)
        W = -math.expm1(k * ltt)
        return (
            k / theta - (gamma - 1.0) * k * P / (theta * W),
            1.0 / k + ltt - (gamma - 1.0) * P * ltt / W,
            1.0 / gamma + math.log(W),
        )

    def dlogsf_dparams(self, params, t):
        # survival is 1 - W^gamma with W = 1 - (theta/t)^k
        theta, k, gamma = _values(params)
        if t <= theta:
            return (0.0, 0.0, 0.0)
        ltt = math.log(theta / t)
        P = math.exp(k * ltt)
        W = -math.expm1(k * ltt)
        Wg = W ** gamma
        S = -math.expm1(gamma * math.log(W))
        return (
            gamma * k * P * Wg / (theta * W * S),
            gamma * P * ltt * Wg / (W * S),
            -Wg * math.log(W) / S,
        )


@dataclass(frozen=True)
class _Host:
    """A monotone cumulative-hazard shape Z(t) and its derivative z(t)
    defining one extended Weibull instance.  ``z_power`` captures the
    local behavior Z(t) ~ zc (t-low)^ze near the lower endpoint;
    ``dZ_dhp`` and ``dz_dhp`` give the host-parameter gradients of Z
    and z (empty tuples for parameter-free hosts)."""

    name: str
    param_names: tuple
    Z: callable
    z: callable
    Z_inv: callable
    support_low: callable
    z_power: callable
    dZ_dhp: callable
    dz_dhp: callable


_HOSTS = {
    "linear": _Host(
        name="linear",
        param_names=(),
        Z=lambda t, hp: t,
        z=lambda t, hp: 1.0,
        Z_inv=lambda y, hp: y,
        support_low=lambda hp: 0.0,
        z_power=lambda hp: (1.0, 1.0),
        dZ_dhp=lambda t, hp: (),
        dz_dhp=lambda t, hp: (),
    ),
    "quadratic": _Host(
        name="quadratic",
        param_names=(),
        Z=lambda t, hp: t * t,
        z=lambda t, hp: 2.0 * t,
        Z_inv=lambda y, hp: math.sqrt(y),
        support_low=lambda hp: 0.0,
        z_power=lambda hp: (2.0, 1.0),
        dZ_dhp=lambda t, hp: (),
        dz_dhp=lambda t, hp: (),
    ),
    "pareto": _Host(
        name="pareto",
        param_names=("k",),
        Z=lambda t, hp: math.log(t / hp[0]),
        z=lambda t, hp: 1.0 / t,
        Z_inv=lambda y, hp: hp[0] * math.exp(y),
        support_low=lambda hp: hp[0],
        z_power=lambda hp: (1.0, 1.0 / hp[0]),
        dZ_dhp=lambda t, hp: (-1.0 / hp[0],),
        dz_dhp=lambda t, hp: (0.0,),
    ),
    "gompertz": _Host(
        name="gompertz",
        param_names=("beta",),
        Z=lambda t, hp: _expm1_cap(hp[0] * t) / hp[0],
        z=lambda t, hp: _exp_cap(hp[0] * t),
        Z_inv=lambda y, hp: math.log1p(hp[0] * y) / hp[0],
        support_low=lambda hp: 0.0,
        z_power=lambda hp: (1.0, 1.0),
        dZ_dhp=lambda t, hp: (
            _INF if hp[0] * t > _EXP_CAP else
            (hp[0] * t * math.exp(hp[0] * t) - math.expm1(hp[0] * t))
            / (hp[0] * hp[0]),
        ),
        dz_dhp=lambda t, hp: (t * _exp_cap(hp[0] * t),),
    ),
}


class _ExtendedWeibull(BaselineFamily):
    """G(t) = 1 - exp(-delta Z(t)) for a host-supplied monotone Z with
    Z(low) = 0 and derivative z.  The shipped hosts are linear
    (exponential law), quadratic (Rayleigh), pareto and gompertz."""

    family_id = "extended_weibull"

    def __init__(self, host):
        self._host = host
        self.param_names = ("delta",) + host.param_names
        if host.name != "linear":
            self.family_id = f"extended_weibull_{host.name}"

    @property
    def host(self):
        return self._host

    def support_low(self, params):
        v = _values(params)
        return self._host.support_low(v[1:])

    def _split(self, params):
        v = _values(params)
        return v[0], v[1:]

    def log_cdf(self, params, t):
        delta, hp = self._split(params)
        if t <= self.support_low(params):
            return -_INF
        return log1mexp(-delta * self._host.Z(t, hp))

    def log_sf(self, params, t):
        delta, hp = self._split(params)
        if t <= self.support_low(params):
            return 0.0
        return -delta * self._host.Z(t, hp)

    def logpdf(self, params, t):
        delta, hp = self._split(params)
        low = self.support_low(params)
        if t < low:
            return -_INF
        if t == low:
            return _endpoint_logpdf(*self.local_power(params))
        Z = self._host.Z(t, hp)
        if delta * Z == _INF:
            return -_INF
        return math.log(delta) + math.log(self._host.z(t, hp)) - delta * Z

    def _invert(self, params, y):
        delta, hp = self._split(params)
        if self._host.Z_inv is not None:
            return self._host.Z_inv(y / delta, hp)
        low = self.support_low(params)
        target = y / delta
        hi = max(low + 1.0, 2.0 * low + 1.0)
        while self._host.Z(hi, hp) < target:
            hi *= 2.0
            if hi > 1e300:
                raise RuntimeError(
                    "extended_weibull quantile bracket expansion failed"
                )
        return brentq(
            lambda t: self._host.Z(t, hp) - target, low, hi,
            xtol=1e-300, rtol=8.9e-16, maxiter=200,
        )

    def quantile(self, params, u):
        return self._invert(params, -math.log1p(-u))

    def survival_quantile(self, params, s):
        return self._invert(params, -math.log(s))

    def local_power(self, params):
        delta, hp = self._split(params)
        ze, zc = self._host.z_power(hp)
        return ze - 1.0, delta * zc * ze

    def dlogsf_dparams(self, params, t):
        delta, hp = self._split(params)
        if t <= self.support_low(params):
            return (0.0,) * len(self.param_names)
        Z = self._host.Z(t, hp)
        return (-Z,) + tuple(
            -delta * dZ for dZ in self._host.dZ_dhp(t, hp)
        )

    def dlogpdf_dparams(self, params, t):
        delta, hp = self._split(params)
        z = self._host.z(t, hp)
        Z = self._host.Z(t, hp)
        if Z == _INF:
            return (-_INF,) * len(self.param_names)
        dZ = self._host.dZ_dhp(t, hp)
        dz = self._host.dz_dhp(t, hp)
        return (1.0 / delta - Z,) + tuple(
            dzi / z - delta * dZi for dzi, dZi in zip(dz, dZ)
        )

    def dcdf_dparams(self, params, t):
        delta, hp = self._split(params)
        if t <= self.support_low(params):
            return (0.0,) * len(self.param_names)
        Z = self._host.Z(t, hp)
        if Z == _INF:
            return (0.0,) * len(self.param_names)
        s = math.exp(-delta * Z)
        return (Z * s,) + tuple(
            delta * dZ * s for dZ in self._host.dZ_dhp(t, hp)
        )


def make_extended_weibull(host_name):
    """Build the extended Weibull family for one of the shipped hosts:
    ``linear``, ``quadratic``, ``pareto`` or ``gompertz``."""
    try:
        return _ExtendedWeibull(_HOSTS[host_name])
    except KeyError:
        raise ValueError(
            f"unknown extended_weibull host {host_name!r}; "
            f"choose from {sorted(_HOSTS)}"
        ) from None


FAMILIES = {}
for _fam in (
    _Exponential(),
    _Weibull(),
    _Lomax(),
    _Frechet(),
    _Gompertz(),
    _Dagum(),
    _SinghMaddala(),
    _ModifiedWeibull(),
    _ExpPareto(),
    _ExtendedWeibull(_HOSTS["linear"]),
    _ExtendedWeibull(_HOSTS["quadratic"]),
    _ExtendedWeibull(_HOSTS["pareto"]),
    _ExtendedWeibull(_HOSTS["gompertz"]),
):
    FAMILIES[_fam.family_id] = _fam


def get_family(family):
    """Resolve a family id or instance to the registered instance."""
    if isinstance(family, BaselineFamily):
        return family
    try:
        return FAMILIES[family]
    except KeyError:
        raise ValueError(
            f"unknown baseline family {family!r}; "
            f"choose from {sorted(FAMILIES)}"
        ) from None


def baseline_cdf(family, params, t):
    """G(t) for the given family and parameter vector."""
    fam = get_family(family)
    v = fam.validate(params)
    return fam.cdf(v, t)


def baseline_pdf(family, params, t):
    """g(t) = dG/dt; infinity where the density diverges at the
    support endpoint."""
    fam = get_family(family)
    v = fam.validate(params)
    return fam.pdf(v, t)


def baseline_logpdf(family, params, t):
    """log g(t); -inf outside the support."""
    fam = get_family(family)
    v = fam.validate(params)
    return fam.logpdf(v, t)


def baseline_quantile(family, params, u):
    """t with G(t) = u for u in (0, 1)."""
    fam = get_family(family)
    v = fam.validate(params)
    if not 0.0 < u < 1.0:
        raise ValueError("baseline_quantile requires 0 < u < 1")
    return fam.quantile(v, u)
