"""Two-sided relative-density bounds and their sharpness identities.

Everything here is a scalar formula plus grid verification: the expansion
floor lambda_lower, the coarse upper bound 1 + 2/(e^R - 1), the exact
cone-over-disc and puncture-over-disc density quotients, and the chain of
inequalities connecting them.  Formulas are rearranged with expm1/log1p to
stay stable for large R; the verbatim textbook forms overflow early.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

_ONE_PLUS = math.nextafter(1.0, math.inf)


def lambda_lower(R: float) -> float:
    """Certified expansion floor e^R / sqrt(e^(2R) - 1), always > 1.

    Computed as 1/sqrt(-expm1(-2R)).  For R large enough that the result is
    not representable above 1.0, the smallest double above 1.0 is returned
    so the strict inequality survives in floating point.
    """
    if R <= 0:
        raise DomainError("R must be positive")
    val = 1.0 / math.sqrt(-math.expm1(-2.0 * R))
    return max(val, _ONE_PLUS)


def w_of_R(R: float) -> float:
    """Euclidean radius with hyperbolic distance R from the disc centre."""
    if R <= 0:
        raise DomainError("R must be positive")
    return math.tanh(0.5 * R)


def R_of_w(w: float) -> float:
    """Hyperbolic distance log((1+w)/(1-w)) from the origin to radius w."""
    if not 0.0 < w < 1.0:
        raise DomainError("w must lie in (0, 1)")
    return 2.0 * math.atanh(w)


def ratio_upper(R: float) -> float:
    """Upper bound 1 + 2/(e^R - 1) on the relative density; equals 1/w(R)."""
    if R <= 0:
        raise DomainError("R must be positive")
    return 1.0 + 2.0 / math.expm1(R)


def ratio_cone_over_disc(k: int, w: float) -> float:
    """Exact quotient of the one-cone-disc density over the disc density.

    (1 - w^2) / (k * w^((k-1)/k) * (1 - w^(2/k))) at radius w, cone order k.
    """
    if k < 2:
        raise DomainError("cone order must be >= 2")
    if not 0.0 < w < 1.0:
        raise DomainError("w must lie in (0, 1)")
    log_w = math.log(w)
    one_minus_w2k = -math.expm1((2.0 / k) * log_w)
    return (1.0 - w * w) / (k * math.exp(((k - 1.0) / k) * log_w) * one_minus_w2k)


def ratio_puncture_over_disc(w: float) -> float:
    """Exact quotient of the punctured-disc density over the disc density."""
    if not 0.0 < w < 1.0:
        raise DomainError("w must lie in (0, 1)")
    return (1.0 - w * w) / (2.0 * w * abs(math.log(w)))


@dataclass(frozen=True)
class RatioBoundSample:
    """One verified point of the bound chain.

    ``k`` is the cone order, or None for the puncture case.  ``ratio`` is the
    exact density quotient; ``lower``/``upper`` are the claimed bounds at the
    same R = log((1+w)/(1-w)).
    """

    w: float
    R: float
    k: int | None
    ratio: float
    lower: float
    upper: float


@dataclass(frozen=True)
class ChainViolation:
    w: float
    k: int | None
    description: str
    slack: float


@dataclass
class BoundChainResult:
    samples: list[RatioBoundSample]
    violations: list[ChainViolation]
    worst_slack: float

    @property
    def passed(self) -> bool:
        return not self.violations


def verify_bound_chain(
    w_grid,
    k_set,
    slack: float = 1e-10,
) -> BoundChainResult:
    """Check lower <= cone(k) <= cone(k+1) <= puncture <= upper on a grid.

    Violations are returned as data; ``worst_slack`` is the largest amount by
    which any inequality came short (negative when everything holds with
    margin).
    """
    k_list = sorted(set(int(k) for k in k_set))
    if any(k < 2 for k in k_list):
        raise DomainError("cone orders must be >= 2")
    samples: list[RatioBoundSample] = []
    violations: list[ChainViolation] = []
    worst = -math.inf

    def check(lhs: float, rhs: float, w: float, k, what: str) -> None:
        nonlocal worst
        short = lhs - rhs
        worst = max(worst, short)
        if short > slack:
            violations.append(ChainViolation(w, k, what, short))

    for w in w_grid:
        R = R_of_w(w)
        lo = lambda_lower(R)
        up = ratio_upper(R)
        punct = ratio_puncture_over_disc(w)
        prev = None
        for k in k_list:
            r = ratio_cone_over_disc(k, w)
            samples.append(RatioBoundSample(w=w, R=R, k=k, ratio=r, lower=lo, upper=up))
            check(lo, r, w, k, "lambda_lower <= ratio_cone")
            if prev is not None:
                check(prev, r, w, k, "ratio_cone(k) <= ratio_cone(k+1)")
            check(r, punct, w, k, "ratio_cone <= ratio_puncture")
            prev = r
        samples.append(RatioBoundSample(w=w, R=R, k=None, ratio=punct, lower=lo, upper=up))
        check(punct, up, w, None, "ratio_puncture <= ratio_upper")
    return BoundChainResult(samples=samples, violations=violations, worst_slack=worst)


def lambda_table(r_min: float, r_max: float, count: int) -> list[tuple[float, float]]:
    """(R, lambda_lower(R)) rows for a plot-ready table."""
    if not (0 < r_min < r_max) or count < 2:
        raise DomainError("need 0 < r_min < r_max and count >= 2")
    rs = np.linspace(r_min, r_max, count)
    return [(float(R), lambda_lower(float(R))) for R in rs]


def default_w_grid(points: int = 999) -> list[float]:
    """w = j/(points+1) scaled into (0.001, 0.999) on a uniform grid."""
    return [0.001 * j for j in range(1, points + 1)]
