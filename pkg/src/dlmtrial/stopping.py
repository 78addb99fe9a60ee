"""Two-sample Bayesian t-test Bayes factor and the decisive-stop rule.

BF01 = T_nu(t | 0, 1) / T_nu(t | sqrt(n_delta)*lambda, 1 + n_delta*sigma_delta^2)

with t the pooled two-sample t statistic, nu = nA + nB - 2 and
n_delta = (1/nA + 1/nB)^-1.  Values of BF01 below the decisive
threshold (default 1/100) stop the trial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigError, DegenerateData, InsufficientData

_BF_CAP = 1e300


@dataclass(frozen=True)
class BFPriors:
    """Effect-size prior (location lambda, variance sigma_delta^2) and
    the decisive cutoff for BF01."""

    lam: float = 0.0
    sigma_delta_sq: float = 1.0
    threshold: float = 0.01

    def __post_init__(self):
        if self.sigma_delta_sq < 0.0:
            raise ConfigError("sigma_delta_sq must be >= 0")
        if not (0.0 < self.threshold < 1.0):
            raise ConfigError("threshold must lie in (0, 1)")


@dataclass(frozen=True)
class TwoSampleSummary:
    nA: int
    nB: int
    t: float
    nu: int
    n_delta: float


def two_sample_summary(ysA, ysB) -> TwoSampleSummary:
    """Pooled-variance two-sample t summary of raw arm outcomes."""
    nA, nB = len(ysA), len(ysB)
    if nA < 2 or nB < 2:
        raise InsufficientData(f"need >=2 outcomes per arm, have {nA}/{nB}")
    mA = math.fsum(ysA) / nA
    mB = math.fsum(ysB) / nB
    ssA = math.fsum((y - mA) ** 2 for y in ysA)
    ssB = math.fsum((y - mB) ** 2 for y in ysB)
    nu = nA + nB - 2
    sp2 = (ssA + ssB) / nu
    if sp2 <= 0.0:
        raise DegenerateData("zero pooled variance")
    n_delta = 1.0 / (1.0 / nA + 1.0 / nB)
    t = (mA - mB) / math.sqrt(sp2 * (1.0 / nA + 1.0 / nB))
    return TwoSampleSummary(nA=nA, nB=nB, t=t, nu=nu, n_delta=n_delta)


def t_logdensity_ls(t: float, nu: float, mu: float, sigma_sq: float) -> float:
    """Log of the location-scale Student-t density."""
    if nu <= 0.0 or sigma_sq <= 0.0:
        raise ConfigError("nu and sigma_sq must be > 0")
    z2 = (t - mu) ** 2 / sigma_sq
    return (math.lgamma((nu + 1.0) / 2.0) - math.lgamma(nu / 2.0)
            - 0.5 * math.log(nu * math.pi) - 0.5 * math.log(sigma_sq)
            - (nu + 1.0) / 2.0 * math.log1p(z2 / nu))


def t_density_ls(t: float, nu: float, mu: float, sigma_sq: float) -> float:
    """Location-scale Student-t density (1/sigma) g_nu((t - mu)/sigma)."""
    return math.exp(t_logdensity_ls(t, nu, mu, sigma_sq))


def bayes_factor_01(s: TwoSampleSummary, p: BFPriors) -> float:
    """BF01 under the effect-size prior; capped if the H1 density underflows."""
    log_num = t_logdensity_ls(s.t, s.nu, 0.0, 1.0)
    log_den = t_logdensity_ls(s.t, s.nu, math.sqrt(s.n_delta) * p.lam,
                              1.0 + s.n_delta * p.sigma_delta_sq)
    log_bf = log_num - log_den
    if log_bf >= math.log(_BF_CAP):
        return _BF_CAP
    return math.exp(log_bf)


def is_decisive(bf: float, p: BFPriors) -> bool:
    """Decisive evidence against H0: strictly below the threshold."""
    return bf < p.threshold
