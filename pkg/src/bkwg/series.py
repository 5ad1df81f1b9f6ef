"""Series expansions and moment machinery.

The generated density and distribution function admit finite binomial
expansions in the corresponding Kumaraswamy-layer quantities when the
beta-layer shapes are integers.  This module computes those coefficient
sequences (beta_prime, beta, eta, mu, lambda_pq), powers of the cdf
series for order statistics, probability weighted moments, ordinary
moments, the moment generating function, and Renyi entropy.  Every
series value has an adaptive-quadrature counterpart; the quadrature is
always the authoritative number, the series are the analytic objects
under test.

Notation used throughout (x for the Kumaraswamy-layer cdf):

    x = F_kw(t) = 1 - [1 - G(t)^a]^b,
    f_kw(t) = a b g(t) G(t)^{a-1} [1 - G(t)^a]^{b-1}.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from . import core
from .specialfn import log_beta

__all__ = [
    "SeriesCoeffs",
    "ExpansionUnsupportedError",
    "IntegralError",
    "beta_prime_coeffs",
    "eta_coeffs",
    "mu_coeffs",
    "lambda_pq_coeffs",
    "pwm",
    "moment",
    "order_stat_pdf",
    "order_stat_moment",
    "mgf",
    "renyi_entropy",
]


class ExpansionUnsupportedError(ValueError):
    """A binomial-expansion route was requested outside the integer
    parameter domain where it is exact."""


class IntegralError(RuntimeError):
    """Adaptive quadrature failed to converge (typically a moment that
    does not exist for the given tail weight)."""


@dataclass(frozen=True, eq=False)
class SeriesCoeffs:
    """A truncated coefficient sequence.

    kind is one of beta_prime, beta, eta, mu, lambda_pq, chi, d_power;
    values is the coefficient vector (a matrix for lambda_pq, indexed
    [p, q]); truncation is the largest retained index K; tail_bound is
    a crude estimate of the dropped mass (0 for exact finite series).
    """

    kind: str
    values: np.ndarray
    truncation: int
    tail_bound: float


def _as_positive_integer(x, name):
    xi = int(round(float(x)))
    if abs(float(x) - xi) > 1e-12 or xi < 1:
        raise ExpansionUnsupportedError(
            f"{name} must be a positive integer for this expansion, got {x}"
        )
    return xi


def _gen_binom(x, k):
    """Generalized binomial coefficient C(x, k) for integer k >= 0."""
    out = 1.0
    for i in range(k):
        out *= (x - i) / (i + 1.0)
    return out


def beta_prime_coeffs(m, n, b):
    """Mixture weights for the density.

    For integer m the density is the finite mixture
    f = sum_{j=0}^{m-1} beta'_j f_kw(t; a, b(j+n)) with
    beta'_j = (-1)^j C(m-1, j) / [B(m, n) (j+n)].

    b enters the mixture components, not the weights; it is accepted
    (and validated) to mirror how the expansion is used.
    """
    mi = _as_positive_integer(m, "m")
    if n <= 0.0 or b <= 0.0:
        raise ValueError("beta_prime_coeffs requires n > 0 and b > 0")
    B = math.exp(log_beta(mi, n))
    vals = np.array(
        [
            (-1.0) ** j * math.comb(mi - 1, j) / (B * (j + n))
            for j in range(mi)
        ]
    )
    return SeriesCoeffs("beta_prime", vals, mi - 1, 0.0)


def eta_coeffs(m, n):
    """Coefficients of f = f_kw(t; a, b) sum_l eta_l x^l.

    eta_l = sum_{j=0}^{m-1} (-1)^l beta_j C(j+n-1, l) with
    beta_j = beta'_j (j+n); finite (l = 0..m+n-2) for integer m, n.
    """
    mi = _as_positive_integer(m, "m")
    ni = _as_positive_integer(n, "n")
    B = math.exp(log_beta(mi, ni))
    L = mi + ni - 1
    vals = np.zeros(L)
    for ell in range(L):
        acc = 0.0
        for j in range(mi):
            if ell <= j + ni - 1:
                acc += (
                    (-1.0) ** j
                    * math.comb(mi - 1, j)
                    / B
                    * math.comb(j + ni - 1, ell)
                )
        vals[ell] = (-1.0) ** ell * acc
    return SeriesCoeffs("eta", vals, L - 1, 0.0)


def mu_coeffs(m, n, K=40):
    """Power-series coefficients of the beta layer: F = sum_k mu_k x^k.

    Expanding (1-s)^{n-1} inside the incomplete beta integral gives
    mu_{m+i} = (-1)^i C(n-1, i) / [B(m, n) (m+i)] and mu_k = 0 for
    k < m (the double-sum form collapses to one term per power).
    Integer m is required so the powers are integers; n may be any
    positive real, in which case the series is infinite and truncated
    at K with |mu_K| recorded as the tail bound.
    """
    mi = _as_positive_integer(m, "m")
    if n <= 0.0:
        raise ValueError("mu_coeffs requires n > 0")
    if K < 1:
        raise ValueError("mu_coeffs requires K >= 1")
    B = math.exp(log_beta(mi, n))
    vals = np.zeros(K + 1)
    n_int = abs(n - round(n)) < 1e-12
    for k in range(mi, K + 1):
        i = k - mi
        if n_int and i > round(n) - 1:
            break
        vals[k] = (-1.0) ** i * _gen_binom(n - 1.0, i) / (B * k)
    tail = 0.0 if n_int and K >= mi + round(n) - 1 else abs(vals[K])
    return SeriesCoeffs("mu", vals, K, tail)


def lambda_pq_coeffs(m, n):
    """Binomial cdf identity coefficients for integer m, n.

    F = sum_{p=m}^{m+n-1} sum_{q=0}^{m+n-1-p} lambda_{p,q} x^{p+q} with
    lambda_{p,q} = C(m+n-1, p) C(m+n-1-p, q) (-1)^q, i.e. the Bernoulli
    trials identity for I_x(m, n).  Returned as a matrix indexed
    [p, q].
    """
    mi = _as_positive_integer(m, "m")
    ni = _as_positive_integer(n, "n")
    N = mi + ni - 1
    vals = np.zeros((N + 1, N + 1))
    for p in range(mi, N + 1):
        for q in range(N - p + 1):
            vals[p, q] = math.comb(N, p) * math.comb(N - p, q) * (-1.0) ** q
    return SeriesCoeffs("lambda_pq", vals, N, 0.0)


# ---------------------------------------------------------------------------
# quadrature helpers
# ---------------------------------------------------------------------------


def _quad01(fn, epsabs=1e-10, epsrel=1e-8):
    """Adaptive quadrature of fn over (0, 1) with a convergence check."""
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, err = integrate.quad(
                fn, 0.0, 1.0, epsabs=epsabs, epsrel=epsrel, limit=200
            )
        except integrate.IntegrationWarning:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                val, err = integrate.quad(
                    fn, 0.0, 1.0, epsabs=epsabs, epsrel=epsrel, limit=500
                )
    if not math.isfinite(val) or err > max(1e-6 * abs(val), 1e-7):
        raise IntegralError(
            f"quadrature did not converge (value {val}, error bound {err})"
        )
    return val


def _kw_params(p):
    """The Kumaraswamy-layer-only version of p (beta layer switched off)."""
    return p.with_values(m=1.0, n=1.0)


def pwm(p, pw, q, r):
    """Probability weighted moment of the Kumaraswamy layer.

    Gamma_{pw,q,r} = E[T^pw x^q (1-x)^r] under the Kw-G(a, b) law built
    on p's baseline (p's beta-layer shapes m, n are ignored).  Computed
    by adaptive quadrature in quantile space:
    integral over u in (0,1) of Q_kw(u)^pw u^q (1-u)^r.
    """
    if pw < 0 or q < 0 or r < 0:
        raise ValueError("pwm orders must be non-negative")
    kw = _kw_params(p)

    def integrand(u):
        if u <= 0.0 or u >= 1.0:
            return 0.0
        t = core.quantile(kw, u)
        try:
            return t ** pw * u ** q * (1.0 - u) ** r
        except OverflowError:
            return math.inf

    return _quad01(integrand)


def moment(p, s):
    """s-th raw moment via the mixture expansion.

    E[T^s] = sum_j beta_j Gamma_{s,0,j+n-1} with beta_j = beta'_j (j+n),
    valid for integer m.  Agreement with direct quadrature of
    integral t^s f dt is the acceptance check for this route.
    """
    s = int(s)
    if s < 1:
        raise ValueError("moment order s must be a positive integer")
    bp = beta_prime_coeffs(p.m, p.n, p.b)
    total = 0.0
    for j, bpj in enumerate(bp.values):
        beta_j = bpj * (j + p.n)
        total += beta_j * pwm(p, s, 0, j + p.n - 1.0)
    return total


def _power_series_coeffs(pc, w, K):
    """Coefficients of P(x)^w up to x^K given P's coefficients pc
    (pc[0] != 0), by the standard power recursion."""
    out = np.zeros(K + 1)
    out[0] = pc[0] ** w
    for k in range(1, K + 1):
        acc = 0.0
        for c in range(1, min(k, len(pc) - 1) + 1):
            acc += (c * (w + 1.0) - k) * pc[c] * out[k - c]
        out[k] = acc / (k * pc[0])
    return out


def _order_stat_power_coeffs(p, r, nsample, K):
    """Per-power coefficients c_q of f_{r:nsample} = f_kw sum_q c_q x^q.

    Uses the eta expansion of the density, the mu series of the cdf and
    the power recursion for [F]^w.  Because mu_k = 0 below k = m, the
    lowest power is factored out before the recursion (which divides by
    the constant term) and restored as an x^{m w} shift.
    """
    r = int(r)
    nsample = int(nsample)
    if not 1 <= r <= nsample:
        raise ValueError("order statistic requires 1 <= r <= nsample")
    mi = _as_positive_integer(p.m, "m")
    eta = eta_coeffs(p.m, p.n).values
    mu = mu_coeffs(p.m, p.n, K=max(K, mi + 1)).values
    pc = mu[mi:]  # F = x^m * P(x) with P(0) = mu_m != 0
    lead = r * math.comb(nsample, r)
    qmax = K + mi * (nsample - 1) + len(eta)
    coeffs = np.zeros(qmax + 1)
    for j in range(nsample - r + 1):
        w = j + r - 1
        sign = (-1.0) ** j * math.comb(nsample - r, j)
        if w == 0:
            powc = np.array([1.0])
            shift = 0
        else:
            powc = _power_series_coeffs(pc, w, K)
            shift = mi * w
        for ell, eta_l in enumerate(eta):
            if eta_l == 0.0:
                continue
            for k, dk in enumerate(powc):
                if dk != 0.0:
                    coeffs[ell + shift + k] += lead * sign * eta_l * dk
    return coeffs


def order_stat_pdf(p, r, nsample, t, K=40):
    """Series-expanded density of the r-th order statistic of nsample
    independent draws, truncated at K powers of the cdf series.

    Must agree with the direct formula
    C * f * F^{r-1} * (1-F)^{nsample-r} at mid-quantiles.
    """
    coeffs = _order_stat_power_coeffs(p, r, nsample, K)
    kw = _kw_params(p)
    x = core.cdf(kw, t)
    fk = core.pdf(kw, t)
    powers = np.polynomial.polynomial.polyval(x, coeffs)
    return fk * powers


def order_stat_moment(p, r, nsample, s, K=40):
    """s-th raw moment of the r-th order statistic via the same
    per-power coefficients, pairing each x^q with Gamma_{s,q,0}."""
    s = int(s)
    if s < 1:
        raise ValueError("moment order s must be a positive integer")
    coeffs = _order_stat_power_coeffs(p, r, nsample, K)
    total = 0.0
    for q, cq in enumerate(coeffs):
        if cq != 0.0:
            total += cq * pwm(p, s, q, 0)
    return total


def mgf(p, s, route="quadrature"):
    """Moment generating function E[e^{sT}].

    The primary route integrates e^{s Q(u)} over u in (0, 1).  For
    integer m, route="mixture" instead sums the density mixture
    sum_j beta'_j M_j(s) where M_j is the mgf of Kw-G(a, b(j+n)).
    Raises IntegralError when s sits at or above the tail decay rate.
    """
    if s == 0.0:
        return 1.0
    def exp_s_quantile(u, pq):
        if u <= 0.0 or u >= 1.0:
            return 0.0
        try:
            return math.exp(s * core.quantile(pq, u))
        except OverflowError:
            return math.inf

    if s > 0.0:
        # probe the integrand's growth rate toward u = 1: if it blows
        # up like (1-u)^{-alpha} with alpha >= 1 the integral diverges
        # and quadrature would return garbage instead of failing
        h1 = exp_s_quantile(1.0 - 1e-8, p)
        h2 = exp_s_quantile(1.0 - 1e-12, p)
        if not math.isfinite(h1) or not math.isfinite(h2):
            raise IntegralError(
                "mgf integrand overflows near u=1 at s=%g" % s
            )
        if h1 > 0.0:
            alpha = (math.log(h2) - math.log(h1)) / (4.0 * math.log(10.0))
            if alpha >= 0.999:
                raise IntegralError(
                    "mgf integrand grows like (1-u)^(-%.3g) near u=1; "
                    "E[exp(sT)] does not exist at s=%g" % (alpha, s)
                )

    if route == "quadrature":
        return _quad01(lambda u: exp_s_quantile(u, p))
    if route == "mixture":
        bp = beta_prime_coeffs(p.m, p.n, p.b)
        total = 0.0
        for j, bpj in enumerate(bp.values):
            pj = p.with_values(m=1.0, n=1.0, b=p.b * (j + p.n))
            total += bpj * _quad01(lambda u, pj=pj: exp_s_quantile(u, pj))
        return total
    raise ValueError("route must be 'quadrature' or 'mixture'")


def renyi_entropy(p, delta, route="quadrature"):
    """Renyi entropy (1-delta)^{-1} log integral f^delta dt.

    The quadrature route substitutes u = F(t), giving
    integral f(Q(u))^{delta-1} du.  When (m-1)*delta is a non-negative
    integer, route="series" expands {1-[1-G^a]^b}^{(m-1)delta}
    binomially and integrates each term in baseline-cdf space.
    """
    if delta <= 0.0 or delta == 1.0:
        raise ValueError("renyi_entropy requires delta > 0, delta != 1")
    if route == "quadrature":
        def integrand(u):
            if u <= 0.0 or u >= 1.0:
                return 0.0
            lp = core.logpdf(p, core.quantile(p, u))
            try:
                return math.exp((delta - 1.0) * lp)
            except OverflowError:
                return math.inf

        integral = _quad01(integrand)
    elif route == "series":
        amax_f = (p.m - 1.0) * delta
        amax = int(round(amax_f))
        if abs(amax_f - amax) > 1e-10 or amax < 0:
            raise ExpansionUnsupportedError(
                "series route requires (m-1)*delta to be a non-negative "
                f"integer, got {amax_f}"
            )
        fam = p.family
        v = p.baseline_params.values
        lab = math.log(p.a) + math.log(p.b)
        integral = 0.0
        for alpha in range(amax + 1):
            R = (
                (-1.0) ** alpha
                * math.comb(amax, alpha)
                * math.exp(-delta * log_beta(p.m, p.n))
            )

            def integrand(x, alpha=alpha):
                # t = Q_G(x); the t-integral of
                # [a b g G^{a-1} (1-G^a)^{bn-1}]^delta (1-G^a)^{b alpha}
                # becomes this x-integral after dt = dx / g
                if x <= 0.0 or x >= 1.0:
                    return 0.0
                t = fam.quantile(v, x)
                lg = fam.logpdf(v, t)
                lA = math.log1p(-(x ** p.a))
                expo = (
                    delta * (lab + lg + (p.a - 1.0) * math.log(x))
                    - lg
                    + (delta * (p.b * p.n - 1.0) + p.b * alpha) * lA
                )
                try:
                    return math.exp(expo)
                except OverflowError:
                    return math.inf

            integral += R * _quad01(integrand)
    else:
        raise ValueError("route must be 'quadrature' or 'series'")
    if integral <= 0.0:
        raise IntegralError("integral of f^delta is not positive")
    return math.log(integral) / (1.0 - delta)
