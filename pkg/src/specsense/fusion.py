"""Cooperative n-out-of-N hard-decision fusion analytics.

N identically configured secondary users each take a local energy-detection
decision; the fusion center declares the primary present when at least n
users vote present.  Vote counts are binomial, so global probabilities are
binomial tail sums over the local probabilities.  The reporting channel is
assumed error free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .channel import AvgSnr
from .detector import (
    DetectorParams,
    GainSummary,
    avg_pd_numeric,
    calibrate_lambda,
    pf_single,
)
from .specfun import ConvergenceError, inv_reg_upper_gamma, log_binom


@dataclass(frozen=True)
class FusionParams:
    """N cooperating users, global vote threshold n, shared local detector."""

    n_users: int
    n_vote: int
    per_user: DetectorParams

    def __post_init__(self):
        if int(self.n_users) != self.n_users or self.n_users < 1:
            raise ValueError(f"user count N must be an integer >= 1, got {self.n_users!r}")
        if int(self.n_vote) != self.n_vote or not 1 <= self.n_vote <= self.n_users:
            raise ValueError(
                f"vote threshold n must be an integer in [1, N], got {self.n_vote!r}")


def binom_tail(n: int, k_min: int, p: float) -> float:
    """P(X >= k_min) for X ~ Binomial(n, p), summed term by term in log domain."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"success probability must be in [0, 1], got {p!r}")
    if k_min <= 0:
        return 1.0
    if k_min > n:
        return 0.0
    if p == 0.0:
        return 0.0
    if p == 1.0:
        return 1.0
    log_p = math.log(p)
    log_q = math.log1p(-p)
    terms = [math.exp(log_binom(n, k) + k * log_p + (n - k) * log_q)
             for k in range(k_min, n + 1)]
    return min(1.0, math.fsum(terms))


def binom_lower(n: int, k_max: int, p: float) -> float:
    """P(X <= k_max) for X ~ Binomial(n, p); complement of binom_tail."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"success probability must be in [0, 1], got {p!r}")
    if k_max < 0:
        return 0.0
    if k_max >= n:
        return 1.0
    if p == 0.0:
        return 1.0
    if p == 1.0:
        return 0.0
    log_p = math.log(p)
    log_q = math.log1p(-p)
    terms = [math.exp(log_binom(n, k) + k * log_p + (n - k) * log_q)
             for k in range(0, k_max + 1)]
    return min(1.0, math.fsum(terms))


def global_pf(params: FusionParams) -> float:
    """Global false alarm: binomial tail over the local P_F."""
    p_local = pf_single(params.per_user.m, params.per_user.lam)
    return binom_tail(params.n_users, params.n_vote, p_local)


def global_pd(params: FusionParams, avg) -> float:
    """Global detection: binomial tail over the Rayleigh-averaged local P_D."""
    pd_local = avg_pd_numeric(params.per_user.m, params.per_user.lam, avg)
    return binom_tail(params.n_users, params.n_vote, pd_local)


def global_pmd(params: FusionParams, avg) -> float:
    """Global missed detection: lower binomial sum over local miss votes.

    Written as sum_{l=0}^{n-1} C(N,l) pmd^{N-l} (1-pmd)^l with pmd the local
    averaged miss probability; identical to 1 - global_pd within 1e-12.
    """
    pd_local = avg_pd_numeric(params.per_user.m, params.per_user.lam, avg)
    pmd_local = 1.0 - pd_local
    n, n_vote = params.n_users, params.n_vote
    if pmd_local == 0.0:
        return 0.0
    if pmd_local == 1.0:
        return 1.0
    log_md = math.log(pmd_local)
    log_d = math.log1p(-pmd_local)
    terms = [math.exp(log_binom(n, k) + (n - k) * log_md + k * log_d)
             for k in range(0, n_vote)]
    return min(1.0, math.fsum(terms))


def calibrate_local_lambda_global(n_users: int, n_vote: int, m: int,
                                  alpha: float) -> float:
    """Local threshold such that the global false alarm equals alpha.

    Solves the monotone scalar equation binom_tail(N, n, p) = alpha for the
    local P_F by bisection, then maps p to lambda through the inverse
    incomplete gamma.  The result satisfies |P_F_G - alpha| <= 1e-9.
    """
    params = FusionParams(n_users=n_users, n_vote=n_vote,
                          per_user=DetectorParams(m=m, lam=1.0, alpha=alpha))
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"false-alarm level must be in (0, 1), got {alpha!r}")
    if params.n_users == 1:
        return calibrate_lambda(m, alpha)

    lo, hi = 0.0, 1.0
    p = alpha
    for _ in range(200):
        f = binom_tail(n_users, n_vote, p) - alpha
        if abs(f) <= 1e-14:
            break
        if f > 0.0:
            hi = p
        else:
            lo = p
        p = 0.5 * (lo + hi)
    lam = 2.0 * inv_reg_upper_gamma(float(m), p)
    achieved = binom_tail(n_users, n_vote, pf_single(m, lam))
    if abs(achieved - alpha) > 1e-9:
        raise ConvergenceError(
            f"global calibration missed alpha: |{achieved} - {alpha}| > 1e-9")
    return lam


def gains_coop(params: FusionParams) -> GainSummary:
    """Cooperative gains: d = N - n + 1, A = C(N, n-1)^{1/d} (M-1)/lambda.

    The vote threshold n = 1 (OR rule) maximizes the diversity order.
    """
    if params.per_user.m < 2:
        raise ValueError(f"coding gain needs M >= 2, got M={params.per_user.m}")
    d = params.n_users - params.n_vote + 1
    log_a = (log_binom(params.n_users, params.n_vote - 1) / d
             + math.log((params.per_user.m - 1) / params.per_user.lam))
    return GainSummary(diversity=float(d), coding_gain=math.exp(log_a))


def asymptotic_pmd_coop(params: FusionParams, avg) -> float:
    """High-SNR global miss asymptote C(N, n-1) x^{N-n+1}, x = lam/(2 gb (M-1)).

    Raw value (no clamping) so log-log slope fits remain exact.
    """
    if params.per_user.m < 2:
        raise ValueError(f"asymptotic form needs M >= 2, got M={params.per_user.m}")
    gamma_bar = AvgSnr.coerce(avg).gamma_bar
    d = params.n_users - params.n_vote + 1
    log_x = math.log(params.per_user.lam) - math.log(
        2.0 * gamma_bar * (params.per_user.m - 1))
    return math.exp(log_binom(params.n_users, params.n_vote - 1) + d * log_x)
