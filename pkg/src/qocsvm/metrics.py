"""Classification scores and the outperformance probability of one classifier over another.

Anomalies are the positive class throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

SIGMA_FLOOR = 1e-12


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0

    def __post_init__(self):
        if min(self.tp, self.fp, self.fn, self.tn) < 0:
            raise ValueError(f"confusion counts must be >= 0: {self}")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


def confusion_counts(is_anomaly, predicted) -> ConfusionCounts:
    """``is_anomaly``: truthy for anomalies.  ``predicted``: OCSVM labels, -1 flags an anomaly."""
    truth = np.asarray(is_anomaly).astype(bool)
    flagged = np.asarray(predicted) == -1
    if truth.shape != flagged.shape:
        raise ValueError(f"label arrays differ in shape: {truth.shape} vs {flagged.shape}")
    return ConfusionCounts(
        int(np.sum(truth & flagged)),
        int(np.sum(~truth & flagged)),
        int(np.sum(truth & ~flagged)),
        int(np.sum(~truth & ~flagged)),
    )


def precision_recall_f1(c: ConfusionCounts) -> tuple:
    """(P, R, F1); any ratio with a zero denominator is reported as 0."""
    p = c.tp / (c.tp + c.fp) if c.tp + c.fp else 0.0
    r = c.tp / (c.tp + c.fn) if c.tp + c.fn else 0.0
    f1 = 2.0 / (1.0 / p + 1.0 / r) if p > 0 and r > 0 else 0.0
    return p, r, f1


def baseline_f1(r: float) -> float:
    """F1 of the classifier that flags every sample, at anomaly ratio ``r``.

    Evaluated exactly on the decimal ratio as written (``repr(r)``) and
    rounded once, so r = 0.2 gives 1/3 to the last bit.
    """
    q = Fraction(repr(float(r)))
    return float(2 * q / (q + 1))


def phi_cdf(x: float) -> float:
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


@dataclass(frozen=True)
class ScoreDistribution:
    mu: float
    sigma: float
    floored: bool = False

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be > 0, got {self.sigma}")


def fold_statistics(scores: Sequence[float]) -> ScoreDistribution:
    """Mean and (n-1) standard deviation; a zero spread is floored at 1e-12 and flagged."""
    s = np.asarray(scores, dtype=float)
    if s.size < 2:
        raise ValueError("need at least two scores")
    mu = float(s.mean())
    sigma = float(s.std(ddof=1))
    if sigma < SIGMA_FLOOR:
        return ScoreDistribution(mu, SIGMA_FLOOR, floored=True)
    return ScoreDistribution(mu, sigma)


def outperformance_probability(
    q: ScoreDistribution, r: ScoreDistribution, interval: tuple = (-1.0, 1.0)
) -> float:
    """Pr[D > 0] for D ~ N(q.mu - r.mu, q.sigma^2 + r.sigma^2) truncated to ``interval``."""
    lo, hi = interval
    if not lo < hi:
        raise ValueError(f"empty truncation interval {interval}")
    if not (q.sigma > 0 and r.sigma > 0):
        raise ValueError("sigmas must be > 0")
    mu = q.mu - r.mu
    sigma = math.hypot(q.sigma, r.sigma)
    if hi <= 0:
        return 0.0
    top = phi_cdf((hi - mu) / sigma)
    norm = top - phi_cdf((lo - mu) / sigma)
    if norm <= 0:
        # interval lies far out in one tail; decide by which side carries the mass
        return 1.0 if mu > 0 else 0.0
    return min(1.0, max(0.0, (top - phi_cdf((max(lo, 0.0) - mu) / sigma)) / norm))
