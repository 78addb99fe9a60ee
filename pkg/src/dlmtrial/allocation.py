"""Per-patient randomization weights from arm forecasts.

Two published rules are implemented.  The ratio rule (RATIO) weights by
Q*sqrt(f) ratios and degenerates to 1/2 whenever a forecast mean is not
strictly positive.  The normal-CDF rule (CDF) sets the weight for arm A
to Phi((fB - fA)/sqrt(QA^2 + QB^2)), favoring the arm with the smaller
forecast mean (smaller response is better throughout).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import ConfigError


class Arm(str, enum.Enum):
    A = "A"
    B = "B"


class Rule(str, enum.Enum):
    EQ5 = "EQ5"  # ratio rule
    EQ6 = "EQ6"  # normal-CDF rule


@dataclass(frozen=True)
class ArmForecasts:
    """Predictive means and SD-scale spreads for both arms."""

    fA: float
    fB: float
    QA: float
    QB: float

    def __post_init__(self):
        vals = (self.fA, self.fB, self.QA, self.QB)
        if not all(math.isfinite(v) for v in vals):
            raise ConfigError("arm forecasts must be finite")
        if self.QA <= 0.0 or self.QB <= 0.0:
            raise ConfigError("QA and QB must be > 0")


@dataclass(frozen=True)
class AllocationWeight:
    wA: float
    rule: Rule

    @property
    def wB(self) -> float:
        return 1.0 - self.wA


def std_normal_cdf(z: float) -> float:
    """Standard normal CDF via erfc; accurate deep into both tails."""
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def design_vector(arm: Arm, x: float) -> list[float]:
    """Design vector against the shared 3-dim state
    (intercept, arm-B effect, covariate coefficient)."""
    if arm is Arm.A:
        return [1.0, 0.0, 0.0]
    return [1.0, 1.0, float(x)]


def weight_eq5(af: ArmForecasts) -> AllocationWeight:
    """Ratio rule.  Falls back to 1/2 on non-positive forecast means
    (sqrt undefined) and outside the two published branch conditions."""
    if af.fA <= 0.0 or af.fB <= 0.0:
        return AllocationWeight(0.5, Rule.EQ5)
    num = af.QA * math.sqrt(af.fB)
    den = af.QB * math.sqrt(af.fA)
    r = num / den
    if (af.fA < af.fB and r > 1.0) or (af.fA > af.fB and r < 1.0):
        return AllocationWeight(num / (num + den), Rule.EQ5)
    return AllocationWeight(0.5, Rule.EQ5)


def weight_eq6(af: ArmForecasts) -> AllocationWeight:
    """Normal-CDF rule: wA = Phi((fB - fA) / sqrt(QA^2 + QB^2))."""
    z = (af.fB - af.fA) / math.sqrt(af.QA ** 2 + af.QB ** 2)
    return AllocationWeight(std_normal_cdf(z), Rule.EQ6)


_RULES = {Rule.EQ5: weight_eq5, Rule.EQ6: weight_eq6}


def weight(af: ArmForecasts, rule: Rule) -> AllocationWeight:
    return _RULES[rule](af)


def assign(w: AllocationWeight, u: float) -> Arm:
    """Randomized assignment: arm A iff u < wA."""
    if not (0.0 <= u < 1.0):
        raise ValueError(f"u must lie in [0, 1), got {u}")
    return Arm.A if u < w.wA else Arm.B
